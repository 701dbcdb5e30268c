use clap::{Parser, Subcommand, ValueEnum};
use herbrand::derivation_file::{read_derivation, write_derivation};
use herbrand::report::{champ_plain, champ_record, report_plain, report_record};
use herbrand_core::calculus::{
    apply_passage, applicable_passages, check_with, is_prenex, normalize_passage, unfold_conjunctions, CheckOptions,
    Direction,
};
use herbrand_core::fundamental::{check_property_c_with_budget, prove_with_budget, FundamentalError, DEFAULT_ATOM_BUDGET};
use herbrand_core::skolem::outer_skolemize;
use herbrand_core::universe::{champ_fini_bounded, expand};
use herbrand_core::{build_derivation, lemma4_bound, parse, print, Formula, ProveOutcome, Verdict};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FALSE: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "herbrand", version, about = "Property C, linear derivations and their kernel check")]
struct Cli {
    /// Output style for formulas, champs finis and reports.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Record,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Prenex,
    Antiprenex,
}

#[derive(Subcommand)]
enum Command {
    /// Print the rectified formula.
    Parse { file: Option<PathBuf> },
    /// Print the outer Skolemized form.
    Skolemize { file: Option<PathBuf> },
    /// List the champ fini of the given order.
    Champ {
        #[arg(long)]
        order: usize,
        file: Option<PathBuf>,
    },
    /// Print the expansion over the champ fini of the given order.
    Expand {
        #[arg(long)]
        order: usize,
        file: Option<PathBuf>,
    },
    /// Decide Property C of the given order; exit 0 iff it holds.
    CheckC {
        #[arg(long)]
        order: usize,
        #[arg(long, env = "HERBRAND_ATOM_BUDGET", default_value_t = DEFAULT_ATOM_BUDGET)]
        atom_budget: usize,
        file: Option<PathBuf>,
    },
    /// Try orders 1..=max-order and emit a checked derivation on success.
    Prove {
        #[arg(long)]
        max_order: usize,
        #[arg(long, env = "HERBRAND_ATOM_BUDGET", default_value_t = DEFAULT_ATOM_BUDGET)]
        atom_budget: usize,
        /// Write the derivation here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        file: Option<PathBuf>,
    },
    /// Build the derivation for an order with Property C.
    Derive {
        #[arg(long)]
        order: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        file: Option<PathBuf>,
    },
    /// Check a derivation file; exit 0 iff accepted.
    Verify {
        proof: PathBuf,
        /// Also require the first formula to be a sentential tautology.
        #[arg(long)]
        require_tautology: bool,
        /// Reject conjunctions, as in the historic calculus.
        #[arg(long)]
        forbid_conjunction: bool,
    },
    /// Print the order bound of a derivation file.
    Bound { proof: PathBuf },
    /// Apply rules of passage: one leftmost-outermost step, or all with --normalize.
    Passage {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        normalize: bool,
        file: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read_input(file: Option<&Path>) -> Result<String, Failure> {
    match file {
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| fail(EXIT_NO_INPUT, format!("standard input: {e}")))?;
            Ok(s)
        }
        Some(p) if p == Path::new("-") => read_input(None),
        Some(p) => std::fs::read_to_string(p).map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", p.display()))),
    }
}

fn read_formula(file: Option<&Path>) -> Result<Formula, Failure> {
    let text = read_input(file)?;
    let name = file.map_or("<stdin>".to_string(), |p| p.display().to_string());
    parse(&text).map_err(|e| fail(EXIT_DATA, format!("{name}:{e}")))
}

fn formula_out(f: &Formula, format: Format) -> String {
    match format {
        Format::Plain => format!("{}\n", print(f)),
        Format::Record => format!("(formula {})\n", print(f)),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn positive(order: usize, flag: &str) -> Result<usize, Failure> {
    if order == 0 {
        Err(fail(EXIT_USAGE, format!("--{flag} must be at least 1")))
    } else {
        Ok(order)
    }
}

fn resource(e: FundamentalError) -> Failure {
    match e {
        FundamentalError::AtomBudgetExceeded { .. } => fail(EXIT_RESOURCE, e.to_string()),
        FundamentalError::Build(_) => fail(70, e.to_string()),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Parse { file } => {
            print!("{}", formula_out(&read_formula(file.as_deref())?, format));
        }
        Command::Skolemize { file } => {
            let a = read_formula(file.as_deref())?;
            print!("{}", formula_out(&outer_skolemize(&a), format));
        }
        Command::Champ { order, file } => {
            let order = positive(order, "order")?;
            let f = outer_skolemize(&read_formula(file.as_deref())?);
            let champ = champ_fini_bounded(order, &f, DEFAULT_ATOM_BUDGET).map_err(|e| fail(EXIT_RESOURCE, e.to_string()))?;
            match format {
                Format::Plain => print!("{}", champ_plain(&champ)),
                Format::Record => print!("{}", champ_record(&champ)),
            }
        }
        Command::Expand { order, file } => {
            let order = positive(order, "order")?;
            let f = outer_skolemize(&read_formula(file.as_deref())?);
            let champ = champ_fini_bounded(order, &f, DEFAULT_ATOM_BUDGET).map_err(|e| fail(EXIT_RESOURCE, e.to_string()))?;
            let e = expand(&f, champ.terms()).map_err(|e| fail(EXIT_FALSE, e.to_string()))?;
            print!("{}", formula_out(&e, format));
        }
        Command::CheckC {
            order,
            atom_budget,
            file,
        } => {
            let order = positive(order, "order")?;
            let a = read_formula(file.as_deref())?;
            let report = check_property_c_with_budget(&a, order, atom_budget).map_err(resource)?;
            match format {
                Format::Plain => print!("{}", report_plain(&report)),
                Format::Record => print!("{}", report_record(&report)),
            }
            return Ok(if report.verdict { 0 } else { EXIT_FALSE });
        }
        Command::Prove {
            max_order,
            atom_budget,
            output,
            file,
        } => {
            let max_order = positive(max_order, "max-order")?;
            let a = read_formula(file.as_deref())?;
            match prove_with_budget(&a, max_order, atom_budget).map_err(resource)? {
                ProveOutcome::Found { order, derivation, .. } => {
                    eprintln!("Property C of order {order}; derivation with {} steps", derivation.len());
                    emit(&write_derivation(&derivation), output.as_deref())?;
                }
                ProveOutcome::ExhaustedBudget { max_order, .. } => {
                    eprintln!("no Property C up to order {max_order}");
                    return Ok(EXIT_EXHAUSTED);
                }
            }
        }
        Command::Derive { order, output, file } => {
            let order = positive(order, "order")?;
            let a = read_formula(file.as_deref())?;
            let d = build_derivation(&a, order).map_err(|e| fail(EXIT_FALSE, e.to_string()))?;
            emit(&write_derivation(&d), output.as_deref())?;
        }
        Command::Verify {
            proof,
            require_tautology,
            forbid_conjunction,
        } => {
            let text = read_input(Some(&proof))?;
            let d = read_derivation(&text).map_err(|e| fail(EXIT_DATA, format!("{}:{e}", proof.display())))?;
            let opts = CheckOptions {
                require_tautological_start: require_tautology,
                forbid_conjunction,
            };
            match check_with(&d, &opts) {
                Verdict::Accepted => println!("accepted ({} steps)", d.len()),
                Verdict::Rejected { step, reason } => {
                    println!("rejected at step {step}: {reason}");
                    return Ok(EXIT_FALSE);
                }
            }
        }
        Command::Bound { proof } => {
            let text = read_input(Some(&proof))?;
            let d = read_derivation(&text).map_err(|e| fail(EXIT_DATA, format!("{}:{e}", proof.display())))?;
            match lemma4_bound(&d) {
                Ok(b) => println!("{b}"),
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(EXIT_FALSE);
                }
            }
        }
        Command::Passage {
            direction,
            normalize,
            file,
        } => {
            let direction = match direction {
                DirectionArg::Prenex => Direction::Prenex,
                DirectionArg::Antiprenex => Direction::Antiprenex,
            };
            let a = read_formula(file.as_deref())?;
            if normalize {
                let a = unfold_conjunctions(&a);
                let limit = 10 * a.quantifier_count().max(1) * a.size();
                let d = normalize_passage(&a, direction, limit);
                match format {
                    Format::Plain => print!("{}", formula_out(d.conclusion(), format)),
                    Format::Record => print!("{}", write_derivation(&d)),
                }
                if direction == Direction::Prenex && !is_prenex(d.conclusion()) {
                    eprintln!("normal form is not prenex");
                    return Ok(EXIT_FALSE);
                }
            } else {
                match applicable_passages(&a, direction).into_iter().next() {
                    Some((p, index)) => {
                        let r = apply_passage(&a, &p, index, direction).expect("applicable rule");
                        eprintln!("rule {index} at {p}");
                        print!("{}", formula_out(&r, format));
                    }
                    None => {
                        eprintln!("no rule of passage applies");
                        print!("{}", formula_out(&a, format));
                    }
                }
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // Deep formulas recurse deeply; give the work a generous stack.
    let worker = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join() {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure { code, message })) => {
            eprintln!("herbrand: {message}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(70),
    }
}
