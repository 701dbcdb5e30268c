//! The six rules of passage, in both directions.
//!
//! ```text
//! (1)  ¬∀x.A       ≡  ∃x.¬A
//! (2)  ¬∃x.A       ≡  ∀x.¬A
//! (3)  (∀x.A) ∨ B  ≡  ∀x.(A ∨ B)
//! (4)  B ∨ ∀x.A    ≡  ∀x.(B ∨ A)
//! (5)  (∃x.A) ∨ B  ≡  ∃x.(A ∨ B)
//! (6)  B ∨ ∃x.A    ≡  ∃x.(B ∨ A)
//! ```
//!
//! `x` must not occur free in `B`. Left to right is the prenex direction.

use super::{Derivation, Rule, RuleApplication, RuleError};
use crate::syntax::{Formula, Position, Quantifier};
use alloc::boxed::Box;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Left to right.
    Prenex,
    /// Right to left.
    Antiprenex,
}

fn side_condition(x: &crate::syntax::Symbol, b: &Formula) -> Result<(), RuleError> {
    if b.has_free_variable(x) {
        Err(RuleError::FreeInSide { variable: x.clone() })
    } else {
        Ok(())
    }
}

fn q(quantifier: Quantifier, x: &crate::syntax::Symbol, body: Formula) -> Formula {
    Formula::Quantified(quantifier, x.clone(), Box::new(body))
}

/// Rewrites `sub` itself by rule `index`.
pub fn rewrite(sub: &Formula, index: u8, direction: Direction) -> Result<Formula, RuleError> {
    use Direction::*;
    use Formula::*;
    use Quantifier::*;
    let mismatch = Err(RuleError::PatternMismatch);
    match (direction, index) {
        (Prenex, 1 | 2) => match sub {
            Not(inner) => match &**inner {
                Quantified(qq, x, a) if *qq == if index == 1 { Forall } else { Exists } => {
                    Ok(q(qq.dual(), x, Formula::not((**a).clone())))
                }
                _ => mismatch,
            },
            _ => mismatch,
        },
        (Prenex, 3..=6) => {
            let want = if index <= 4 { Forall } else { Exists };
            let quantified_left = index % 2 == 1;
            match sub {
                Or(l, r) => {
                    let (quant, side) = if quantified_left { (l, r) } else { (r, l) };
                    match &**quant {
                        Quantified(qq, x, a) if *qq == want => {
                            side_condition(x, side)?;
                            let body = if quantified_left {
                                Formula::or((**a).clone(), (**side).clone())
                            } else {
                                Formula::or((**side).clone(), (**a).clone())
                            };
                            Ok(q(want, x, body))
                        }
                        _ => mismatch,
                    }
                }
                _ => mismatch,
            }
        }
        (Antiprenex, 1 | 2) => {
            let want = if index == 1 { Exists } else { Forall };
            match sub {
                Quantified(qq, x, body) if *qq == want => match &**body {
                    Not(a) => Ok(Formula::not(q(want.dual(), x, (**a).clone()))),
                    _ => mismatch,
                },
                _ => mismatch,
            }
        }
        (Antiprenex, 3..=6) => {
            let want = if index <= 4 { Forall } else { Exists };
            let quantified_left = index % 2 == 1;
            match sub {
                Quantified(qq, x, body) if *qq == want => match &**body {
                    Or(l, r) => {
                        if quantified_left {
                            side_condition(x, r)?;
                            Ok(Formula::or(q(want, x, (**l).clone()), (**r).clone()))
                        } else {
                            side_condition(x, l)?;
                            Ok(Formula::or((**l).clone(), q(want, x, (**r).clone())))
                        }
                    }
                    _ => mismatch,
                },
                _ => mismatch,
            }
        }
        _ => mismatch,
    }
}

/// Applies rule of passage `index` at position `p` of `premise`.
pub fn apply_passage(premise: &Formula, p: &Position, index: u8, direction: Direction) -> Result<Formula, RuleError> {
    let sub = premise
        .subformula_at(p)
        .ok_or_else(|| RuleError::UnresolvablePosition(p.clone()))?;
    let rewritten = rewrite(sub, index, direction)?;
    Ok(premise.replace_at(p, rewritten)?)
}

/// Every `(position, index)` at which a rule applies, positions in pre-order and
/// indices ascending.
pub fn applicable_passages(f: &Formula, direction: Direction) -> Vec<(Position, u8)> {
    let mut out = Vec::new();
    for p in f.positions() {
        let sub = f.subformula_at(&p).expect("own position");
        for i in 1..=6 {
            if rewrite(sub, i, direction).is_ok() {
                out.push((p.clone(), i));
            }
        }
    }
    out
}

/// No quantifier occurs below a connective.
pub fn is_prenex(f: &Formula) -> bool {
    match f {
        Formula::Quantified(_, _, body) => is_prenex(body),
        other => other.is_quantifier_free(),
    }
}

/// Rewrites leftmost-outermost with the lowest applicable rule until none applies or
/// `max_steps` steps were taken. The steps are recorded as a derivation.
pub fn normalize_passage(f: &Formula, direction: Direction, max_steps: usize) -> Derivation {
    let mut d = Derivation::new(f.clone());
    while d.len() < max_steps {
        let Some((p, index)) = applicable_passages(d.conclusion(), direction).into_iter().next() else {
            break;
        };
        d.push(RuleApplication::new(Rule::Passage { index, direction }, p))
            .expect("applicable rule");
    }
    d
}

/// Replaces every `A ∧ B` by `¬(¬A ∨ ¬B)`, the form the rules of passage act on.
pub fn unfold_conjunctions(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(unfold_conjunctions(a)),
        Formula::And(a, b) => Formula::not(Formula::or(
            Formula::not(unfold_conjunctions(a)),
            Formula::not(unfold_conjunctions(b)),
        )),
        Formula::Or(a, b) => Formula::or(unfold_conjunctions(a), unfold_conjunctions(b)),
        Formula::Quantified(qq, x, body) => q(*qq, x, unfold_conjunctions(body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn documented_instances() {
        let r = apply_passage(&f("~forall x. P(x)"), &Position::root(), 1, Direction::Prenex).unwrap();
        assert_eq!(r, f("exists x. ~P(x)"));
        let r = apply_passage(&f("(forall x. P(x)) \\/ B"), &Position::root(), 3, Direction::Prenex).unwrap();
        assert_eq!(r, f("forall x. (P(x) \\/ B)"));
        let back = apply_passage(&f("exists x. ~P(x)"), &Position::root(), 1, Direction::Antiprenex).unwrap();
        assert_eq!(back, f("~forall x. P(x)"));
    }

    #[test]
    fn all_six_prenex() {
        let cases = [
            (1, "~forall x. P(x)", "exists x. ~P(x)"),
            (2, "~exists x. P(x)", "forall x. ~P(x)"),
            (3, "forall x. P(x) \\/ Q", "forall x. (P(x) \\/ Q)"),
            (4, "Q \\/ forall x. P(x)", "forall x. (Q \\/ P(x))"),
            (5, "exists x. P(x) \\/ Q", "exists x. (P(x) \\/ Q)"),
            (6, "Q \\/ exists x. P(x)", "exists x. (Q \\/ P(x))"),
        ];
        for (i, from, to) in cases {
            let r = apply_passage(&f(from), &Position::root(), i, Direction::Prenex).unwrap();
            assert_eq!(r, f(to), "rule {i}");
            let back = apply_passage(&r, &Position::root(), i, Direction::Antiprenex).unwrap();
            assert_eq!(back, f(from), "rule {i} reversed");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            apply_passage(&f("P \\/ Q"), &Position::root(), 3, Direction::Prenex),
            Err(RuleError::PatternMismatch)
        );
        assert_eq!(
            rewrite(&f("forall x. (P(x) \\/ Q(x))"), 3, Direction::Antiprenex),
            Err(RuleError::FreeInSide { variable: crate::syntax::Symbol::variable("x") })
        );
    }

    #[test]
    fn normalization_reaches_prenex_form() {
        let a = f("~(forall x. P(x) \\/ ~exists y. Q(y))");
        let d = normalize_passage(&a, Direction::Prenex, 100);
        assert!(is_prenex(d.conclusion()));
        assert_eq!(check(&d), super::super::Verdict::Accepted);
        let back = normalize_passage(d.conclusion(), Direction::Antiprenex, 100);
        assert!(back.conclusion().alpha_equal(&a));
    }

    #[test]
    fn conjunction_unfolding() {
        assert_eq!(unfold_conjunctions(&f("P /\\ Q")), f("~(~P \\/ ~Q)"));
    }
}
