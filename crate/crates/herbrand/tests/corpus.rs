use herbrand::corpus::corpus;
use herbrand::{read_derivation, write_derivation};
use herbrand_core::{check, prove, ProveOutcome};

#[test]
fn invalid_entries_are_never_proved() {
    for e in corpus().into_iter().filter(|e| !e.derivable) {
        match prove(&e.formula, 4).unwrap() {
            ProveOutcome::ExhaustedBudget { reports, .. } => assert!(reports.iter().all(|r| !r.verdict), "{}", e.name),
            ProveOutcome::Found { order, .. } => panic!("{}: Property C at order {order}", e.name),
        }
    }
}

#[test]
fn derivation_files_round_trip_for_the_whole_corpus() {
    for e in corpus().into_iter().filter(|e| e.derivable) {
        let ProveOutcome::Found { derivation, .. } = prove(&e.formula, 5).unwrap() else {
            panic!("{}: not found", e.name)
        };
        let text = write_derivation(&derivation);
        let back = read_derivation(&text).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(back, derivation, "{}", e.name);
        assert_eq!(write_derivation(&back), text, "{}", e.name);
        assert!(check(&back).is_accepted(), "{}", e.name);
    }
}

#[test]
fn names_are_unique() {
    let entries = corpus();
    let mut names: Vec<_> = entries.iter().map(|e| e.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), entries.len());
}

#[test]
fn property_c_persists_two_orders_up() {
    use herbrand_core::check_property_c;
    for e in corpus() {
        for n in 1..=3 {
            if check_property_c(&e.formula, n).verdict {
                assert!(check_property_c(&e.formula, n + 2).verdict, "{} at {}", e.name, n + 2);
            }
        }
    }
}
