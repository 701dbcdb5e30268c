//! Negation parity and the existentialoid/universaloid classification of
//! quantifier occurrences.

use crate::syntax::{Formula, FormulaError, Position, Quantifier, Symbol};
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// γ (existentialoid) or δ (universaloid).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantifierClass {
    Gamma,
    Delta,
}

/// `∃` under even parity and `∀` under odd parity are γ; the rest are δ.
pub fn class_of(q: Quantifier, parity: Parity) -> QuantifierClass {
    match (q, parity) {
        (Quantifier::Exists, Parity::Even) | (Quantifier::Forall, Parity::Odd) => {
            QuantifierClass::Gamma
        }
        _ => QuantifierClass::Delta,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifierOccurrence {
    pub position: Position,
    pub quantifier: Quantifier,
    pub variable: Symbol,
    pub parity: Parity,
    pub class: QuantifierClass,
    /// Not in the scope of any other quantifier.
    pub accessible: bool,
}

/// One entry per quantifier occurrence, in pre-order.
pub fn classify_quantifiers(a: &Formula) -> Vec<QuantifierOccurrence> {
    fn go(
        f: &Formula,
        pos: &mut Vec<usize>,
        parity: Parity,
        under_quantifier: bool,
        out: &mut Vec<QuantifierOccurrence>,
    ) {
        match f {
            Formula::Atom(_) => {}
            Formula::Not(a) => {
                pos.push(0);
                go(a, pos, parity.flip(), under_quantifier, out);
                pos.pop();
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                pos.push(0);
                go(a, pos, parity, under_quantifier, out);
                pos.pop();
                pos.push(1);
                go(b, pos, parity, under_quantifier, out);
                pos.pop();
            }
            Formula::Quantified(q, v, body) => {
                out.push(QuantifierOccurrence {
                    position: Position::from_indices(pos.clone()),
                    quantifier: *q,
                    variable: v.clone(),
                    parity,
                    class: class_of(*q, parity),
                    accessible: !under_quantifier,
                });
                pos.push(0);
                go(body, pos, parity, true, out);
                pos.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(a, &mut Vec::new(), Parity::Even, false, &mut out);
    out
}

/// Parity of the negations strictly above `p`.
pub fn polarity_at(a: &Formula, p: &Position) -> Result<Parity, FormulaError> {
    let mut parity = Parity::Even;
    let mut cur = a;
    for &i in p.indices() {
        if matches!(cur, Formula::Not(_)) {
            parity = parity.flip();
        }
        cur = cur
            .child(i)
            .ok_or_else(|| FormulaError::UnresolvablePosition(p.clone()))?;
    }
    Ok(parity)
}

/// True if some proper ancestor of `p` is a quantifier. `p` must be valid.
pub fn in_quantifier_scope(a: &Formula, p: &Position) -> bool {
    let mut cur = a;
    for &i in p.indices() {
        if matches!(cur, Formula::Quantified(..)) {
            return true;
        }
        match cur.child(i) {
            Some(c) => cur = c,
            None => return false,
        }
    }
    false
}
