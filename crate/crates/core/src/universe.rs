//! Term height, champs finis and the expansion of a formula over a finite term set.

use crate::syntax::{print_term, Formula, Symbol, SymbolKind, Term};
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// `|f(t1, …, tm)| = 1 + max{0, |t1|, …, |tm|}`; variables and constants have height 1.
pub fn height(t: &Term) -> usize {
    1 + t.args().iter().map(height).max().unwrap_or(0)
}

/// The champ fini `T_n(F)`: the ground terms of height `< n` over the free symbols of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChampFini {
    order: usize,
    signature: Vec<Symbol>,
    terms: Vec<Term>,
}

impl ChampFini {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Function symbols (including constants and Skolem symbols), free variables,
    /// and the bullet if it was needed.
    pub fn signature(&self) -> &[Symbol] {
        &self.signature
    }

    /// Sorted by height, then by printed form.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniverseError {
    /// A quantifier cannot be expanded over an empty term set.
    EmptyTermSet,
    /// The champ fini would exceed the given number of terms.
    TooManyTerms { limit: usize },
}

impl fmt::Display for UniverseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseError::EmptyTermSet => {
                f.write_str("cannot expand a quantifier over an empty term set (order too small)")
            }
            UniverseError::TooManyTerms { limit } => {
                write!(f, "champ fini exceeds the limit of {limit} terms")
            }
        }
    }
}

impl core::error::Error for UniverseError {}

pub fn champ_fini(n: usize, f: &Formula) -> ChampFini {
    champ_fini_bounded(n, f, usize::MAX).expect("unbounded")
}

/// As [`champ_fini`], failing once more than `max_terms` terms would be produced.
pub fn champ_fini_bounded(n: usize, f: &Formula, max_terms: usize) -> Result<ChampFini, UniverseError> {
    assert!(n >= 1, "champ fini order must be positive");
    let mut signature: BTreeSet<Symbol> = f.function_symbols();
    signature.extend(f.free_variables());

    let mut leaves: Vec<Term> = Vec::new();
    let mut functions: Vec<&Symbol> = Vec::new();
    for s in &signature {
        match (s.kind(), s.arity()) {
            (SymbolKind::Variable, _) => leaves.push(Term::from_var(s.clone())),
            (_, 0) => leaves.push(Term::app(s.clone(), Vec::new())),
            _ => functions.push(s),
        }
    }
    let needs_bullet = leaves.is_empty();
    if needs_bullet {
        leaves.push(Term::bullet());
    }

    let mut terms: Vec<Term> = Vec::new();
    if n > 1 {
        let mut layers: Vec<Vec<Term>> = vec![leaves];
        let mut total = layers[0].len();
        if total > max_terms {
            return Err(UniverseError::TooManyTerms { limit: max_terms });
        }
        for h in 2..n {
            let below: Vec<&Term> = layers.iter().flatten().collect();
            let top = h - 1;
            let mut layer = Vec::new();
            for f in &functions {
                let k = f.arity();
                let mut idx = vec![0usize; k];
                'tuples: loop {
                    if idx.iter().any(|&i| height(below[i]) == top) {
                        layer.push(Term::app((*f).clone(), idx.iter().map(|&i| below[i].clone()).collect()));
                        total += 1;
                        if total > max_terms {
                            return Err(UniverseError::TooManyTerms { limit: max_terms });
                        }
                    }
                    for slot in (0..k).rev() {
                        idx[slot] += 1;
                        if idx[slot] < below.len() {
                            continue 'tuples;
                        }
                        idx[slot] = 0;
                    }
                    break;
                }
            }
            if layer.is_empty() {
                break;
            }
            layers.push(layer);
        }
        terms = layers.into_iter().flatten().collect();
        let mut keyed: Vec<(usize, String, Term)> =
            terms.into_iter().map(|t| (height(&t), print_term(&t), t)).collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        keyed.dedup_by(|a, b| a.2 == b.2);
        terms = keyed.into_iter().map(|(_, _, t)| t).collect();
    }
    let mut signature: Vec<Symbol> = signature.into_iter().collect();
    if needs_bullet {
        signature.push(Symbol::bullet());
    }
    Ok(ChampFini {
        order: n,
        signature,
        terms,
    })
}

/// `A^T`: `∃` becomes a disjunction and `∀` a conjunction over `terms`, in order,
/// folded to the left.
pub fn expand(a: &Formula, terms: &[Term]) -> Result<Formula, UniverseError> {
    if terms.is_empty() {
        return if a.is_quantifier_free() {
            Ok(a.clone())
        } else {
            Err(UniverseError::EmptyTermSet)
        };
    }
    Ok(expand_in(a, terms, &mut Vec::new()))
}

fn expand_in(a: &Formula, terms: &[Term], env: &mut Vec<(Symbol, Term)>) -> Formula {
    match a {
        Formula::Atom(atom) => Formula::Atom(atom.map_terms(|t| instantiate(t, env))),
        Formula::Not(b) => Formula::not(expand_in(b, terms, env)),
        Formula::And(b, c) => Formula::and(expand_in(b, terms, env), expand_in(c, terms, env)),
        Formula::Or(b, c) => Formula::or(expand_in(b, terms, env), expand_in(c, terms, env)),
        Formula::Quantified(q, v, body) => {
            let mut parts = terms.iter().map(|t| {
                env.push((v.clone(), t.clone()));
                let part = expand_in(body, terms, env);
                env.pop();
                part
            });
            let first = parts.next().expect("non-empty term set");
            match q {
                crate::syntax::Quantifier::Exists => parts.fold(first, Formula::or),
                crate::syntax::Quantifier::Forall => parts.fold(first, Formula::and),
            }
        }
    }
}

pub(crate) fn instantiate(t: &Term, env: &[(Symbol, Term)]) -> Term {
    if let Some(v) = t.as_var() {
        return env
            .iter()
            .rev()
            .find(|(b, _)| b == v)
            .map_or_else(|| t.clone(), |(_, r)| r.clone());
    }
    if t.args().is_empty() {
        return t.clone();
    }
    Term::app(t.head().clone(), t.args().iter().map(|a| instantiate(a, env)).collect())
}

/// Number of atom occurrences in `A^T` for `|T| = width`, or `None` on overflow.
pub fn expansion_atom_count(a: &Formula, width: usize) -> Option<usize> {
    fn go(f: &Formula, factor: usize, width: usize) -> Option<usize> {
        match f {
            Formula::Atom(_) => Some(factor),
            Formula::Not(b) => go(b, factor, width),
            Formula::And(b, c) | Formula::Or(b, c) => go(b, factor, width)?.checked_add(go(c, factor, width)?),
            Formula::Quantified(_, _, b) => go(b, factor.checked_mul(width)?, width),
        }
    }
    go(a, 1, width)
}
