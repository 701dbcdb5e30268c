//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use herbrand::corpus::corpus;
use herbrand::read_derivation;
use herbrand_core::calculus::{
    apply_existentialoid_quantification, apply_passage, applicable_passages, check_with, is_prenex, normalize_passage,
    CheckOptions, Direction,
};
use herbrand_core::fundamental::{check_property_c_with_budget, FundamentalError, DEFAULT_ATOM_BUDGET};
use herbrand_core::polarity::classify_quantifiers;
use herbrand_core::sentential::is_tautology;
use herbrand_core::skolem::outer_skolemize;
use herbrand_core::universe::{champ_fini, expand};
use herbrand_core::{lemma4_bound, parse, print, prove, Formula, ProveOutcome, Quantifier, Term, Verdict};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

const PRECEDES: &str = "forall x. exists y. (x < y) \\/ exists m. forall z. ~(m < z)";
const PRECEDES_ORDER: usize = 3;

const LIMIT_CHAMP: Duration = Duration::from_secs(1);
const LIMIT_END_TO_END: Duration = Duration::from_secs(1);
const LIMIT_TAUTOLOGY: Duration = Duration::from_secs(30);
const LIMIT_PASSAGE: Duration = Duration::from_secs(10);
const LIMIT_ROUND_TRIP: Duration = Duration::from_secs(60);
const LIMIT_MONOTONE: Duration = Duration::from_secs(60);

const TAUTOLOGY_SAMPLES: usize = 1000;
const MAX_ATOMS: usize = 12;
const PASSAGE_SAMPLES: usize = 200;
const PASSAGE_DEPTH: u32 = 6;
const PASSAGE_STEP_FACTOR: usize = 10;
const MIN_DERIVABLE: usize = 10;
const SEED: u64 = 0x4865_7262;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(started: Instant, limit: Duration) -> Result<String, String> {
    let took = started.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{took:.2?} (limit {limit:?})"))
}

/// Exhaustive evaluation over the distinct printed atoms.
fn truth_table(f: &Formula) -> bool {
    fn atoms(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::Atom(_) => {
                let s = print(f);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            Formula::Not(a) => atoms(a, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                atoms(a, out);
                atoms(b, out);
            }
            Formula::Quantified(..) => panic!("quantifier in sentential formula"),
        }
    }
    fn eval(f: &Formula, names: &[String], bits: u32) -> bool {
        match f {
            Formula::Atom(_) => {
                let i = names.iter().position(|n| *n == print(f)).unwrap();
                bits >> i & 1 == 1
            }
            Formula::Not(a) => !eval(a, names, bits),
            Formula::And(a, b) => eval(a, names, bits) && eval(b, names, bits),
            Formula::Or(a, b) => eval(a, names, bits) || eval(b, names, bits),
            Formula::Quantified(..) => unreachable!(),
        }
    }
    let mut names = Vec::new();
    atoms(f, &mut names);
    (0..1u32 << names.len()).all(|bits| eval(f, &names, bits))
}

fn champ_base_case() -> Outcome {
    let started = Instant::now();
    let entries = corpus();
    ensure(entries.len() >= 30, || format!("corpus has only {} formulas", entries.len()))?;
    for e in &entries {
        let t = champ_fini(1, &outer_skolemize(&e.formula));
        ensure(t.is_empty(), || format!("{}: order 1 has {} terms", e.name, t.len()))?;
    }
    Ok(format!("{} formulas, {}", entries.len(), within(started, LIMIT_CHAMP)?))
}

fn run_cli(args: &[&str], stdin_file: Option<&Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_herbrand"));
    cmd.args(args).env_remove("HERBRAND_ATOM_BUDGET");
    if let Some(p) = stdin_file {
        cmd.arg(p);
    }
    let out = cmd.output().expect("run herbrand");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn precedes_end_to_end() -> Outcome {
    let a = parse(PRECEDES).unwrap();
    // The golden order comes from the truth table, not from the library's checker.
    let f = outer_skolemize(&a);
    let oracle_order = (2..=5)
        .find(|&n| truth_table(&expand(&f, champ_fini(n, &f).terms()).unwrap()))
        .ok_or("truth table finds no order up to 5")?;
    ensure(oracle_order == PRECEDES_ORDER, || format!("truth table gives order {oracle_order}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("precedes.txt");
    let proof = dir.path().join("precedes.proof");
    std::fs::write(&input, PRECEDES).map_err(|e| e.to_string())?;
    let proof_arg = proof.to_str().unwrap();
    let started = Instant::now();

    let (code, _, err) = run_cli(&["prove", "--max-order", "5", "-o", proof_arg], Some(&input));
    ensure(code == 0, || format!("prove exited {code}: {err}"))?;
    let order: usize = err
        .split_whitespace()
        .skip_while(|w| *w != "order")
        .nth(1)
        .and_then(|w| w.trim_end_matches(';').parse().ok())
        .ok_or_else(|| format!("no order in `{err}`"))?;
    ensure(order == PRECEDES_ORDER, || format!("prove reports order {order}"))?;

    let (code, out, _) = run_cli(&["verify", "--require-tautology", proof_arg], None);
    ensure(code == 0, || format!("verify exited {code}: {out}"))?;

    let d = read_derivation(&std::fs::read_to_string(&proof).unwrap()).map_err(|e| e.to_string())?;
    ensure(d.conclusion().alpha_equal(&a), || format!("final formula {}", print(d.conclusion())))?;

    let (code, out, err) = run_cli(&["bound", proof_arg], None);
    ensure(code == 0, || format!("bound exited {code}: {err}"))?;
    let b: usize = out.trim().parse().map_err(|_| format!("bound printed `{out}`"))?;

    let (code, _, err) = run_cli(&["check-c", "--order", &b.to_string()], Some(&input));
    ensure(code == 0, || format!("check-c --order {b} exited {code}: {err}"))?;

    let (code, out, _) = run_cli(&["champ", "--order", "1"], Some(&input));
    ensure(code == 0 && out.trim().is_empty(), || format!("champ --order 1 printed `{out}`"))?;

    Ok(format!(
        "order {order}, {} steps accepted, bound {b}, {}",
        d.len(),
        within(started, LIMIT_END_TO_END)?
    ))
}

fn random_sentential(rng: &mut ChaCha8Rng, atoms: &[String], depth: u32) -> String {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return atoms.choose(rng).unwrap().clone();
    }
    match rng.gen_range(0..7) {
        0 | 1 => format!("~{}", random_sentential(rng, atoms, depth - 1)),
        2 | 3 => format!("({} /\\ {})", random_sentential(rng, atoms, depth - 1), random_sentential(rng, atoms, depth - 1)),
        4 | 5 => format!("({} \\/ {})", random_sentential(rng, atoms, depth - 1), random_sentential(rng, atoms, depth - 1)),
        // Seed some valid structure so both verdicts are well represented.
        _ => {
            let a = random_sentential(rng, atoms, depth - 1);
            format!("({} \\/ ~{a} \\/ {})", a, random_sentential(rng, atoms, depth - 1))
        }
    }
}

fn tautology_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool: Vec<String> = ["P", "Q(c)", "Q(d)", "R(c, d)", "R(d, c)", "R(c, c)", "S(f(c))", "S(f(d))", "T(u)", "T(v)", "Q(f(u))", "R(u, v)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(pool.len(), MAX_ATOMS);
    let started = Instant::now();
    let mut valid = 0;
    for i in 0..TAUTOLOGY_SAMPLES {
        let k = rng.gen_range(1..=MAX_ATOMS);
        let atoms: Vec<String> = pool.choose_multiple(&mut rng, k).cloned().collect();
        let text = random_sentential(&mut rng, &atoms, 7);
        let f = parse(&text).map_err(|e| format!("sample {i}: {e}"))?;
        let expected = truth_table(&f);
        let got = is_tautology(&f).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("sample {i} `{text}`: checker {got}, truth table {expected}"))?;
        valid += usize::from(expected);
    }
    Ok(format!(
        "{TAUTOLOGY_SAMPLES}/{TAUTOLOGY_SAMPLES} agree ({valid} valid), {}",
        within(started, LIMIT_TAUTOLOGY)?
    ))
}

fn random_quantified(rng: &mut ChaCha8Rng, depth: u32) -> String {
    const VARS: [&str; 3] = ["x", "y", "z"];
    const TERMS: [&str; 6] = ["x", "y", "z", "c", "u", "f(x)"];
    if depth <= 1 || rng.gen_ratio(1, 5) {
        return match rng.gen_range(0..3) {
            0 => format!("P({})", TERMS.choose(rng).unwrap()),
            1 => format!("R({}, {})", TERMS.choose(rng).unwrap(), TERMS.choose(rng).unwrap()),
            _ => "Q".to_string(),
        };
    }
    match rng.gen_range(0..6) {
        0 => format!("~{}", random_quantified(rng, depth - 1)),
        1 | 2 => format!("({} \\/ {})", random_quantified(rng, depth - 1), random_quantified(rng, depth - 1)),
        3 | 4 => format!("forall {}. {}", VARS.choose(rng).unwrap(), random_quantified(rng, depth - 1)),
        _ => format!("exists {}. {}", VARS.choose(rng).unwrap(), random_quantified(rng, depth - 1)),
    }
}

fn depth(f: &Formula) -> u32 {
    match f {
        Formula::Atom(_) => 1,
        Formula::Not(a) | Formula::Quantified(_, _, a) => 1 + depth(a),
        Formula::And(a, b) | Formula::Or(a, b) => 1 + depth(a).max(depth(b)),
    }
}

fn quantifier_multiset(f: &Formula) -> Vec<String> {
    let mut v: Vec<String> = classify_quantifiers(f)
        .iter()
        .map(|o| format!("{:?} {}", o.class, o.variable.name()))
        .collect();
    v.sort();
    v
}

fn passage_involution_and_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let started = Instant::now();
    let (mut rewrites, mut max_steps, mut quantifiers) = (0, 0, 0);
    for i in 0..PASSAGE_SAMPLES {
        let text = random_quantified(&mut rng, PASSAGE_DEPTH);
        let f = parse(&text).map_err(|e| format!("sample {i}: {e}"))?;
        ensure(depth(&f) <= PASSAGE_DEPTH && !f.contains_conjunction(), || format!("sample {i} out of range"))?;
        for (p, index) in applicable_passages(&f, Direction::Prenex) {
            let there = apply_passage(&f, &p, index, Direction::Prenex).map_err(|e| e.to_string())?;
            let back = apply_passage(&there, &p, index, Direction::Antiprenex)
                .map_err(|e| format!("sample {i}, rule {index} at {p}: no way back: {e}"))?;
            ensure(back.alpha_equal(&f), || format!("sample {i}, rule {index} at {p}: {}", print(&back)))?;
            rewrites += 1;
        }
        let q = f.quantifier_count();
        let limit = PASSAGE_STEP_FACTOR * q;
        let d = normalize_passage(&f, Direction::Prenex, limit + 1);
        ensure(d.len() <= limit, || format!("sample {i}: {} steps for {q} quantifiers", d.len()))?;
        ensure(is_prenex(d.conclusion()), || format!("sample {i}: not prenex: {}", print(d.conclusion())))?;
        ensure(quantifier_multiset(d.conclusion()) == quantifier_multiset(&f), || {
            format!("sample {i}: quantifiers changed in {}", print(d.conclusion()))
        })?;
        ensure(check_with(&d, &CheckOptions::default()).is_accepted(), || format!("sample {i}: kernel rejects"))?;
        max_steps = max_steps.max(d.len());
        quantifiers += q;
    }
    Ok(format!(
        "{PASSAGE_SAMPLES} formulas, {rewrites} round trips, {quantifiers} quantifiers, longest normalization {max_steps} steps, {}",
        within(started, LIMIT_PASSAGE)?
    ))
}

fn lemma_round_trip() -> Outcome {
    let started = Instant::now();
    let derivable: Vec<_> = corpus().into_iter().filter(|e| e.derivable).collect();
    ensure(derivable.len() >= MIN_DERIVABLE, || format!("only {} derivable formulas", derivable.len()))?;
    for name in ["drinker", "example-closed"] {
        ensure(derivable.iter().any(|e| e.name == name), || format!("`{name}` missing"))?;
    }
    let opts = CheckOptions {
        require_tautological_start: true,
        forbid_conjunction: false,
    };
    let (mut bounds, mut over_budget) = (Vec::new(), Vec::new());
    for e in &derivable {
        let outcome = prove(&e.formula, 5).map_err(|err| format!("{}: {err}", e.name))?;
        let ProveOutcome::Found { order, derivation, .. } = outcome else {
            return Err(format!("{}: no Property C up to order 5", e.name));
        };
        match check_with(&derivation, &opts) {
            Verdict::Accepted => {}
            Verdict::Rejected { step, reason } => return Err(format!("{}: rejected at {step}: {}", e.name, reason.code())),
        }
        ensure(derivation.conclusion().alpha_equal(&e.formula), || format!("{}: wrong conclusion", e.name))?;
        let b = lemma4_bound(&derivation).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(b >= order, || format!("{}: bound {b} below the least order {order}", e.name))?;
        // The bound can be far above the least order; over a binary function the
        // champ fini at the bound is out of reach, and such entries are named.
        match check_property_c_with_budget(&e.formula, b, DEFAULT_ATOM_BUDGET) {
            Ok(r) => {
                ensure(r.verdict, || format!("{}: no Property C at bound {b}", e.name))?;
                bounds.push(format!("{}:{order}/{b}", e.name));
            }
            Err(FundamentalError::AtomBudgetExceeded { .. }) => over_budget.push(format!("{}:{order}/{b}", e.name)),
            Err(err) => return Err(format!("{}: {err}", e.name)),
        }
    }
    ensure(bounds.len() >= MIN_DERIVABLE, || format!("only {} bounds checked", bounds.len()))?;
    Ok(format!(
        "{} formulas proved and accepted; Property C at the bound for {} (order/bound {}); over atom budget at the bound: {}; {}",
        derivable.len(),
        bounds.len(),
        bounds.join(" "),
        if over_budget.is_empty() { "none".to_string() } else { over_budget.join(" ") },
        within(started, LIMIT_ROUND_TRIP)?
    ))
}

fn monotonicity() -> Outcome {
    let started = Instant::now();
    let (mut pairs, mut skipped) = (0, 0);
    for e in corpus() {
        for n in 1..=4 {
            let here = match check_property_c_with_budget(&e.formula, n, DEFAULT_ATOM_BUDGET) {
                Ok(r) => r.verdict,
                Err(FundamentalError::AtomBudgetExceeded { .. }) => {
                    skipped += 1;
                    break;
                }
                Err(err) => return Err(format!("{}: {err}", e.name)),
            };
            if !here {
                continue;
            }
            match check_property_c_with_budget(&e.formula, n + 1, DEFAULT_ATOM_BUDGET) {
                Ok(r) => ensure(r.verdict, || format!("{}: holds at {n} but not at {}", e.name, n + 1))?,
                Err(FundamentalError::AtomBudgetExceeded { .. }) => skipped += 1,
                Err(err) => return Err(format!("{}: {err}", e.name)),
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} holding orders checked, {skipped} over budget, {}", within(started, LIMIT_MONOTONE)?))
}

fn kernel_rejections() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corrupted");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    files.sort();
    ensure(files.len() == 20, || format!("{} corrupted files", files.len()))?;
    let mut codes = std::collections::BTreeMap::<String, usize>::new();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy();
        let text = std::fs::read_to_string(path).unwrap();
        let expect = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("; expect: "))
            .ok_or_else(|| format!("{name}: no expectation header"))?;
        let (code, step) = expect.split_once(" at ").ok_or_else(|| format!("{name}: bad header"))?;
        let step: usize = step.trim().parse().map_err(|_| format!("{name}: bad step"))?;
        let d = read_derivation(&text).map_err(|e| format!("{name}: {e}"))?;
        match check_with(&d, &CheckOptions::default()) {
            Verdict::Rejected { step: s, reason } if s == step && reason.code() == code => {
                *codes.entry(code.to_string()).or_default() += 1;
            }
            Verdict::Rejected { step: s, reason } => {
                return Err(format!("{name}: expected {code} at {step}, got {} at {s}", reason.code()))
            }
            Verdict::Accepted => return Err(format!("{name}: accepted")),
        }
    }
    let summary: Vec<String> = codes.iter().map(|(c, n)| format!("{c} x{n}")).collect();
    Ok(format!("{} rejected exactly ({})", files.len(), summary.join(", ")))
}

fn existentialoid_example() -> Outcome {
    let premise = parse("(t < t) \\/ ~forall z. (t < z)").unwrap();
    let t = Term::constant("t");
    let x = herbrand_core::Symbol::variable("x");
    let cases = [
        (vec![1], Quantifier::Exists, "~forall z. (x < z)", "(t < t) \\/ exists x. ~forall z. (x < z)"),
        (vec![1, 0], Quantifier::Forall, "forall z. (x < z)", "(t < t) \\/ ~forall x. forall z. (x < z)"),
    ];
    for (path, q, body, stated) in cases {
        let p = herbrand_core::Position::from_indices(path);
        let body = parse(body).unwrap();
        let got = apply_existentialoid_quantification(&premise, &p, q, &x, &t, Some(&body))
            .map_err(|e| format!("at {p}: {e}"))?;
        ensure(got.alpha_equal(&parse(stated).unwrap()), || format!("at {p}: {}", print(&got)))?;
    }
    Ok("both conclusions reproduced from the shared premise".to_string())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("champ fini of order 1 is empty", champ_base_case),
        ("precedes formula end to end", precedes_end_to_end),
        ("tautology checker vs truth table", tautology_oracle),
        ("rules of passage involution and normalization", passage_involution_and_normalization),
        ("derivation round trip on derivable corpus", lemma_round_trip),
        ("Property C monotone in the order", monotonicity),
        ("kernel rejects corrupted derivations", kernel_rejections),
        ("existentialoid quantification example", existentialoid_example),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
