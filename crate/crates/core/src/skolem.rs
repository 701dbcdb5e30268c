//! Outer Skolemization.
//!
//! Every universaloid quantifier is deleted and its variable `x` is replaced by
//! `sk$x(y1, …, ym)`, where `y1 … ym` are the variables of the existentialoid
//! quantifiers enclosing it, outermost first. Free variables stay as they are.

use crate::polarity::{class_of, Parity, QuantifierClass};
use crate::syntax::{Formula, Substitution, Symbol, Term, SKOLEM_PREFIX};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// A deleted δ-quantifier and the Skolem term that replaced its variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemBinding {
    pub variable: Symbol,
    pub symbol: Symbol,
    /// γ-variables the Skolem symbol is applied to.
    pub arguments: Vec<Symbol>,
}

/// Skolem symbol name for a δ-variable: `sk$x`, disambiguated with `$k` if the
/// name is already taken in the formula.
fn skolem_name(var: &Symbol, taken: &BTreeSet<String>) -> String {
    let base = format!("{SKOLEM_PREFIX}{}", var.name());
    if !taken.contains(&base) {
        return base;
    }
    (1..)
        .map(|k| format!("{base}${k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded counter")
}

pub fn outer_skolemize(a: &Formula) -> Formula {
    outer_skolemize_with_bindings(a).0
}

/// The outer Skolemized form together with one binding per deleted quantifier, in pre-order.
pub fn outer_skolemize_with_bindings(a: &Formula) -> (Formula, Vec<SkolemBinding>) {
    let mut taken: BTreeSet<String> = a
        .function_symbols()
        .iter()
        .map(|s| String::from(s.name()))
        .collect();
    let mut bindings = Vec::new();
    let f = go(a, Parity::Even, &mut Vec::new(), &mut taken, &mut bindings);
    (f, bindings)
}

fn go(
    f: &Formula,
    parity: Parity,
    gammas: &mut Vec<Symbol>,
    taken: &mut BTreeSet<String>,
    bindings: &mut Vec<SkolemBinding>,
) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(go(a, parity.flip(), gammas, taken, bindings)),
        Formula::And(a, b) => Formula::and(
            go(a, parity, gammas, taken, bindings),
            go(b, parity, gammas, taken, bindings),
        ),
        Formula::Or(a, b) => Formula::or(
            go(a, parity, gammas, taken, bindings),
            go(b, parity, gammas, taken, bindings),
        ),
        Formula::Quantified(q, v, body) => match class_of(*q, parity) {
            QuantifierClass::Gamma => {
                gammas.push(v.clone());
                let body = go(body, parity, gammas, taken, bindings);
                gammas.pop();
                Formula::quantified(*q, v.clone(), body)
            }
            QuantifierClass::Delta => {
                let name = skolem_name(v, taken);
                taken.insert(name.clone());
                let symbol = Symbol::skolem(&name, gammas.len());
                let term = Term::app(
                    symbol.clone(),
                    gammas.iter().cloned().map(Term::from_var).collect(),
                );
                bindings.push(SkolemBinding {
                    variable: v.clone(),
                    symbol,
                    arguments: gammas.clone(),
                });
                // The Skolem term only mentions enclosing binders, so nothing is captured.
                let body = body
                    .substitute(&Substitution::single(v.clone(), term))
                    .expect("Skolem terms are built from enclosing binders");
                go(&body, parity, gammas, taken, bindings)
            }
        },
    }
}
