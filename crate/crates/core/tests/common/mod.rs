#![allow(dead_code)]

use herbrand_core::syntax::{Formula, Term};
use proptest::prelude::*;

/// Formula text over a small signature; bound names may clash, the parser renames them.
pub fn formula_text(depth: u32) -> impl Strategy<Value = String> {
    let term = prop_oneof![
        Just("c".to_string()),
        Just("d".to_string()),
        Just("u".to_string()),
        Just("v".to_string()),
        Just("w".to_string()),
        Just("f(c)".to_string()),
        Just("f(u)".to_string()),
        Just("g(v, c)".to_string()),
    ];
    let atom = prop_oneof![
        term.clone().prop_map(|t| format!("P({t})")),
        (term.clone(), term).prop_map(|(s, t)| format!("R({s}, {t})")),
        Just("Q".to_string()),
    ];
    atom.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("~{a}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} /\\ {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} \\/ {b})")),
            (prop::sample::select(vec!["u", "v", "w"]), inner.clone()).prop_map(|(x, a)| format!("forall {x}. {a}")),
            (prop::sample::select(vec!["u", "v", "w"]), inner).prop_map(|(x, a)| format!("exists {x}. {a}")),
        ]
    })
}

pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    formula_text(depth).prop_map(|s| herbrand_core::parse(&s).expect("generated text parses"))
}

/// Evaluation under an assignment of truth values to atoms, by printed atom.
pub fn eval(f: &Formula, truth: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(_) => truth(&herbrand_core::print(f)),
        Formula::Not(a) => !eval(a, truth),
        Formula::And(a, b) => eval(a, truth) && eval(b, truth),
        Formula::Or(a, b) => eval(a, truth) || eval(b, truth),
        Formula::Quantified(..) => panic!("quantifier in sentential evaluation"),
    }
}

/// Reference validity check: all assignments to the distinct printed atoms.
pub fn truth_table_valid(f: &Formula) -> bool {
    let mut atoms: Vec<String> = Vec::new();
    f.visit(&mut |g| {
        if let Formula::Atom(_) = g {
            let s = herbrand_core::print(g);
            if !atoms.contains(&s) {
                atoms.push(s);
            }
        }
    });
    assert!(atoms.len() <= 20, "truth table too large");
    (0u32..1 << atoms.len()).all(|bits| {
        eval(f, &|name| {
            let i = atoms.iter().position(|a| a == name).unwrap();
            bits >> i & 1 == 1
        })
    })
}

pub fn is_skolem_headed(t: &Term) -> bool {
    t.head().is_skolem()
}
