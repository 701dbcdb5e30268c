mod common;

use common::{formula, truth_table_valid};
use herbrand_core::calculus::{apply, Rule, RuleApplication};
use herbrand_core::polarity::{classify_quantifiers, QuantifierClass};
use herbrand_core::sentential::is_tautology;
use herbrand_core::skolem::outer_skolemize;
use herbrand_core::syntax::{NameSupply, Substitution, Symbol};
use herbrand_core::universe::{champ_fini, expand, expansion_atom_count};
use herbrand_core::{parse, print, Formula, Position};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn quantifier_free(f: &Formula) -> Formula {
    match f {
        Formula::Quantified(_, _, b) => quantifier_free(b),
        Formula::Not(a) => Formula::not(quantifier_free(a)),
        Formula::And(a, b) => Formula::and(quantifier_free(a), quantifier_free(b)),
        Formula::Or(a, b) => Formula::or(quantifier_free(a), quantifier_free(b)),
        Formula::Atom(_) => f.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parsed_formulas_are_rectified(f in formula(5)) {
        prop_assert!(f.is_rectified());
    }

    #[test]
    fn print_parse_round_trip(f in formula(5)) {
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn renaming_binders_apart_is_alpha_equal(f in formula(5)) {
        let mut names = NameSupply::new();
        names.reserve_formula(&f);
        let map: BTreeMap<Symbol, Symbol> = f
            .bound_variables()
            .into_iter()
            .map(|v| { let new = Symbol::variable(&names.fresh(v.name())); (v, new) })
            .collect();
        let g = f.rename_bound(&map);
        prop_assert!(g.alpha_equal(&f));
        prop_assert!(g.is_rectified());
        prop_assert_eq!(g.variant_map(&f).map(|m| f.rename_bound(&m)), Some(g.clone()));
    }

    #[test]
    fn identity_substitution_is_identity(f in formula(5)) {
        let id: Substitution = f.free_variables().into_iter().map(|v| (v.clone(), herbrand_core::Term::from_var(v))).collect();
        prop_assert_eq!(f.substitute(&id).unwrap(), f);
    }

    #[test]
    fn replacing_a_subformula_by_itself(f in formula(5), pick in any::<prop::sample::Index>()) {
        let ps = f.positions();
        let p = &ps[pick.index(ps.len())];
        let sub = f.subformula_at(p).unwrap().clone();
        prop_assert_eq!(f.replace_at(p, sub).unwrap(), f);
    }

    #[test]
    fn outer_skolemization_is_idempotent(f in formula(5)) {
        let s = outer_skolemize(&f);
        prop_assert!(classify_quantifiers(&s).iter().all(|o| o.class == QuantifierClass::Gamma));
        prop_assert_eq!(outer_skolemize(&s), s);
    }

    #[test]
    fn champ_fini_grows_with_the_order(f in formula(4)) {
        let s = outer_skolemize(&f);
        for n in 1..4 {
            let small = champ_fini(n, &s);
            let large = champ_fini(n + 1, &s);
            prop_assert!(small.terms().iter().all(|t| large.terms().contains(t)));
        }
    }

    #[test]
    fn expansion_size_law(f in formula(4)) {
        let s = outer_skolemize(&f);
        let t = champ_fini(3, &s);
        if let (Ok(e), Some(count)) = (expand(&s, t.terms()), expansion_atom_count(&s, t.len())) {
            let mut occurrences = 0;
            e.visit(&mut |g| if matches!(g, Formula::Atom(_)) { occurrences += 1 });
            prop_assert_eq!(occurrences, count);
        }
    }

    #[test]
    fn tautology_check_agrees_with_truth_table(f in formula(5)) {
        let qf = quantifier_free(&f);
        prop_assert_eq!(is_tautology(&qf).unwrap(), truth_table_valid(&qf));
    }

    #[test]
    fn quantification_adds_exactly_one_quantifier(f in formula(4), pick in any::<prop::sample::Index>()) {
        let ps = f.positions();
        let p = ps[pick.index(ps.len())].clone();
        let app = RuleApplication::new(
            Rule::UniversaloidQuantification { quantifier: herbrand_core::Quantifier::Forall, variable: Symbol::variable("q$0") },
            p.clone(),
        );
        let app2 = RuleApplication::new(
            Rule::UniversaloidQuantification { quantifier: herbrand_core::Quantifier::Exists, variable: Symbol::variable("q$0") },
            p,
        );
        for a in [app, app2] {
            if let Ok(g) = apply(&f, &a) {
                prop_assert_eq!(g.quantifier_count(), f.quantifier_count() + 1);
            }
        }
    }
}

#[test]
fn prenex_existential_size_law() {
    use herbrand_core::syntax::Term;
    for k in 1..=3 {
        let vars = ["x", "y", "z"];
        let args = vars[..k].join(", ");
        let prefix: String = vars[..k].iter().map(|v| format!("exists {v}. ")).collect();
        let f = parse(&format!("{prefix}P({args})")).unwrap();
        for width in 1usize..=3 {
            let terms: Vec<Term> = (0..width).map(|i| Term::constant(&format!("c{i}"))).collect();
            let e = expand(&f, &terms).unwrap();
            assert_eq!(e.atoms().len(), width.pow(k as u32));
        }
    }
}

#[test]
fn accessible_quantifiers_of_a_prenex_formula() {
    let f = parse("forall x. exists y. forall z. R(x, y, z)").unwrap();
    let access: Vec<bool> = classify_quantifiers(&f).iter().map(|o| o.accessible).collect();
    assert_eq!(access, [true, false, false]);
    assert!(Position::root().is_root());
}
