//! Plain and record renderings of Property C reports and champs finis.

use herbrand_core::syntax::print_term;
use herbrand_core::universe::ChampFini;
use herbrand_core::{print, PropertyCReport};
use std::fmt::Write as _;

pub fn champ_plain(champ: &ChampFini) -> String {
    champ.terms().iter().map(|t| print_term(t) + "\n").collect()
}

pub fn champ_record(champ: &ChampFini) -> String {
    let mut out = format!("(champ (order {})", champ.order());
    for t in champ.terms() {
        let _ = write!(out, " (term {})", print_term(t));
    }
    out.push_str(")\n");
    out
}

pub fn report_plain(r: &PropertyCReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "formula:    {}", print(&r.formula));
    let _ = writeln!(out, "skolemized: {}", print(&r.skolemized));
    let _ = writeln!(out, "order:      {}", r.order);
    let terms: Vec<String> = r.champ.terms().iter().map(print_term).collect();
    let _ = writeln!(out, "champ fini: {{{}}}", terms.join(", "));
    match &r.expansion {
        Some(e) => {
            let _ = writeln!(out, "expansion:  {}", print(e));
        }
        None => out.push_str("expansion:  undefined (empty champ fini)\n"),
    }
    let _ = writeln!(out, "atoms:      {}", r.atom_count);
    let _ = writeln!(
        out,
        "verdict:    {}",
        if r.verdict { "Property C holds" } else { "no Property C" }
    );
    out
}

pub fn report_record(r: &PropertyCReport) -> String {
    let mut out = String::from("(property-c\n");
    let _ = writeln!(out, "  (order {})", r.order);
    let _ = write!(out, "  (champ");
    for t in r.champ.terms() {
        let _ = write!(out, " (term {})", print_term(t));
    }
    out.push_str(")\n");
    match &r.expansion {
        Some(e) => {
            let _ = writeln!(out, "  (expansion {})", print(e));
        }
        None => out.push_str("  (expansion)\n"),
    }
    let _ = writeln!(out, "  (verdict {})", r.verdict);
    let _ = writeln!(out, "  (atom-count {}))", r.atom_count);
    out
}
