use super::parse::is_variable_name;
use super::{Formula, SymbolKind, Term, BULLET_ASCII};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

/// Canonical ASCII rendering; `parse(print(a))` is alpha-equal to `a`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, &mut Vec::new(), &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, &[], &mut out);
    out
}

fn term(t: &Term, bound: &[&str], out: &mut String) {
    let head = t.head();
    match head.kind() {
        SymbolKind::Bullet => out.push_str(BULLET_ASCII),
        SymbolKind::Variable => {
            let name = head.name();
            if !bound.contains(&name) && !is_variable_name(name) {
                out.push('?');
            }
            out.push_str(name);
        }
        _ => {
            out.push_str(head.name());
            let shadowed = bound.contains(&head.name()) || is_variable_name(head.name());
            if !t.args().is_empty() || (shadowed && head.kind() == SymbolKind::Function) {
                out.push('(');
                for (i, a) in t.args().iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(a, bound, out);
                }
                out.push(')');
            }
        }
    }
}

fn is_unary(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_) | Formula::Not(_) | Formula::Quantified(..))
}

fn operand<'a>(f: &'a Formula, bare: bool, bound: &mut Vec<&'a str>, out: &mut String) {
    if bare {
        formula(f, bound, out);
    } else {
        out.push('(');
        formula(f, bound, out);
        out.push(')');
    }
}

fn formula<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut String) {
    match f {
        Formula::Atom(a) => {
            let pred = a.predicate();
            if pred.name() == "lt" && a.args().len() == 2 {
                out.push('(');
                term(&a.args()[0], bound, out);
                out.push_str(" < ");
                term(&a.args()[1], bound, out);
                out.push(')');
                return;
            }
            out.push_str(pred.name());
            if !a.args().is_empty() {
                out.push('(');
                for (i, t) in a.args().iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(t, bound, out);
                }
                out.push(')');
            }
        }
        Formula::Not(a) => {
            out.push('~');
            operand(a, is_unary(a), bound, out);
        }
        Formula::Quantified(q, v, body) => {
            let _ = write!(out, "{} {}. ", q.keyword(), v.name());
            bound.push(v.name());
            operand(body, is_unary(body), bound, out);
            bound.pop();
        }
        Formula::And(a, b) => {
            operand(a, is_unary(a) || matches!(**a, Formula::And(..)), bound, out);
            out.push_str(" /\\ ");
            operand(b, is_unary(b), bound, out);
        }
        Formula::Or(a, b) => {
            operand(a, is_unary(a) || matches!(**a, Formula::Or(..)), bound, out);
            out.push_str(" \\/ ");
            operand(b, is_unary(b), bound, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Symbol};
    use alloc::vec;

    #[test]
    fn grammar_rendering() {
        let f = Formula::forall(
            "x",
            Formula::or(
                Formula::atom(Symbol::predicate("H", 1), vec![Term::var("x")]),
                Formula::atom(Symbol::predicate("M", 1), vec![Term::var("x")]),
            ),
        );
        assert_eq!(print(&f), "forall x. (H(x) \\/ M(x))");
        assert_eq!(print(&Formula::prop("P")), "P");
    }

    #[test]
    fn precedes_formula_is_canonical() {
        let text = "forall x. exists y. (x < y) \\/ exists m. forall z. ~(m < z)";
        assert_eq!(print(&parse(text).unwrap()), text);
    }

    #[test]
    fn ambiguous_names_get_markers() {
        let f = Formula::atom(
            Symbol::predicate("P", 2),
            vec![Term::var("a"), Term::constant("x")],
        );
        let text = print(&f);
        assert_eq!(text, "P(?a, x())");
        assert_eq!(parse(&text).unwrap(), f);
        assert_eq!(print_term(&Term::bullet()), "_dot");
    }

    #[test]
    fn associativity_parens() {
        for text in ["A /\\ B /\\ C", "A /\\ (B /\\ C)", "(A \\/ B) /\\ C", "(A /\\ B) \\/ C", "~(A \\/ B)", "forall x. (P(x) /\\ Q)"] {
            assert_eq!(print(&parse(text).unwrap()), text);
        }
    }
}
