//! Text format for derivations.
//!
//! ```text
//! (derivation
//!   (start (P(c) \/ ~P(c)))
//!   (step (rule existentialoid-quantification) (pos)
//!     (quantifier exists) (var x) (witness c) (body P(x) \/ ~P(x))
//!     (result exists x. (P(x) \/ ~P(x)))))
//! ```
//!
//! Formula and term fields hold printed syntax verbatim; `(pos)` is the root and
//! `(pos 1 0)` a path of child indices. Writing and reading round-trips exactly.

use crate::sexp::{line_column, read_all, Sexp, SexpError};
use herbrand_core::calculus::{Direction, Renaming};
use herbrand_core::syntax::{parse_term, ParseError};
use herbrand_core::{parse, print, Derivation, Formula, Position, Quantifier, Rule, RuleApplication, Step, Symbol};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{0}")]
    Syntax(#[from] SexpError),
    #[error("{line}:{column}: {message}")]
    Structure { line: usize, column: usize, message: String },
    #[error("{line}:{column}: in `{field}`: {source}")]
    Formula {
        line: usize,
        column: usize,
        field: String,
        source: ParseError,
    },
}

fn quantifier_name(q: Quantifier) -> &'static str {
    match q {
        Quantifier::Exists => "exists",
        Quantifier::Forall => "forall",
    }
}

fn write_map(out: &mut String, map: &Renaming) {
    out.push_str(" (map");
    for (old, new) in map {
        let _ = write!(out, " ({} {})", old.name(), new.name());
    }
    out.push(')');
}

pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::from("(derivation\n");
    let _ = writeln!(out, "  (start {})", print(&d.start));
    for step in &d.steps {
        let app = &step.application;
        let _ = write!(out, "  (step (rule {}) (pos", app.rule.name());
        for i in app.position.indices() {
            let _ = write!(out, " {i}");
        }
        out.push(')');
        match &app.rule {
            Rule::ExistentialoidQuantification {
                quantifier,
                variable,
                witness,
                body,
            }
            | Rule::ShallowGammaQuantification {
                quantifier,
                variable,
                witness,
                body,
            } => {
                let _ = write!(
                    out,
                    "\n    (quantifier {}) (var {}) (witness {}) (body {})",
                    quantifier_name(*quantifier),
                    variable.name(),
                    herbrand_core::syntax::print_term(witness),
                    print(body)
                );
            }
            Rule::UniversaloidQuantification { quantifier, variable }
            | Rule::ShallowDeltaQuantification { quantifier, variable } => {
                let _ = write!(out, " (quantifier {}) (var {})", quantifier_name(*quantifier), variable.name());
            }
            Rule::Simplification { renaming } | Rule::GammaSimplification { renaming } | Rule::RenameBound { renaming } => {
                write_map(&mut out, renaming);
            }
            Rule::Passage { index, .. } => {
                let _ = write!(out, " (index {index})");
            }
        }
        let _ = writeln!(out, "\n    (result {}))", print(&step.result));
    }
    out.push_str(")\n");
    out
}

struct Reader<'s> {
    src: &'s str,
}

impl<'s> Reader<'s> {
    fn fail<T>(&self, at: usize, message: impl Into<String>) -> Result<T, FileError> {
        let (line, column) = line_column(self.src, at);
        Err(FileError::Structure {
            line,
            column,
            message: message.into(),
        })
    }

    fn field<'a>(&self, list: &'a Sexp, name: &str) -> Result<&'a Sexp, FileError> {
        match list.items().iter().find(|f| f.head() == Some(name)) {
            Some(f) => Ok(f),
            None => self.fail(list.offset(), format!("missing `({name} …)`")),
        }
    }

    fn formula(&self, field: &Sexp) -> Result<Formula, FileError> {
        let text = field.tail_text(self.src);
        parse(text).map_err(|source| {
            let (line, column) = line_column(self.src, field.offset());
            FileError::Formula {
                line,
                column,
                field: field.head().unwrap_or_default().to_string(),
                source,
            }
        })
    }

    fn atom(&self, field: &Sexp) -> Result<&'s str, FileError> {
        match field.items() {
            [_, Sexp::Atom { at, text }] => Ok(&self.src[*at..*at + text.len()]),
            _ => self.fail(field.offset(), format!("`{}` takes one name", field.head().unwrap_or_default())),
        }
    }

    fn variable(&self, field: &Sexp) -> Result<Symbol, FileError> {
        Ok(Symbol::variable(self.atom(field)?))
    }

    fn quantifier(&self, step: &Sexp) -> Result<Quantifier, FileError> {
        let field = self.field(step, "quantifier")?;
        match self.atom(field)? {
            "exists" => Ok(Quantifier::Exists),
            "forall" => Ok(Quantifier::Forall),
            other => self.fail(field.offset(), format!("unknown quantifier `{other}`")),
        }
    }

    fn map(&self, step: &Sexp) -> Result<Renaming, FileError> {
        let field = self.field(step, "map")?;
        let mut map = Renaming::new();
        for pair in &field.items()[1..] {
            match pair.items() {
                [Sexp::Atom { text: old, .. }, Sexp::Atom { text: new, .. }] => {
                    map.insert(Symbol::variable(old), Symbol::variable(new));
                }
                _ => return self.fail(pair.offset(), "expected `(old new)`"),
            }
        }
        Ok(map)
    }

    fn position(&self, step: &Sexp) -> Result<Position, FileError> {
        let field = self.field(step, "pos")?;
        let mut path = Vec::new();
        for item in &field.items()[1..] {
            match item.as_atom().and_then(|a| a.parse::<usize>().ok()) {
                Some(i) => path.push(i),
                None => return self.fail(item.offset(), "positions are child indices"),
            }
        }
        Ok(Position::from_indices(path))
    }

    fn step(&self, step: &Sexp) -> Result<Step, FileError> {
        let rule_field = self.field(step, "rule")?;
        let name = self.atom(rule_field)?;
        let position = self.position(step)?;
        let witness = |s: &Sexp| -> Result<_, FileError> {
            let field = self.field(s, "witness")?;
            parse_term(field.tail_text(self.src)).map_err(|source| {
                let (line, column) = line_column(self.src, field.offset());
                FileError::Formula {
                    line,
                    column,
                    field: "witness".into(),
                    source,
                }
            })
        };
        let rule = match name {
            "existentialoid-quantification" | "shallow-gamma-quantification" => {
                let quantifier = self.quantifier(step)?;
                let variable = self.variable(self.field(step, "var")?)?;
                let witness = witness(step)?;
                let body = self.formula(self.field(step, "body")?)?;
                if name.starts_with("shallow") {
                    Rule::ShallowGammaQuantification {
                        quantifier,
                        variable,
                        witness,
                        body,
                    }
                } else {
                    Rule::ExistentialoidQuantification {
                        quantifier,
                        variable,
                        witness,
                        body,
                    }
                }
            }
            "universaloid-quantification" | "shallow-delta-quantification" => {
                let quantifier = self.quantifier(step)?;
                let variable = self.variable(self.field(step, "var")?)?;
                if name.starts_with("shallow") {
                    Rule::ShallowDeltaQuantification { quantifier, variable }
                } else {
                    Rule::UniversaloidQuantification { quantifier, variable }
                }
            }
            "simplification" => Rule::Simplification { renaming: self.map(step)? },
            "gamma-simplification" => Rule::GammaSimplification { renaming: self.map(step)? },
            "rename-bound" => Rule::RenameBound { renaming: self.map(step)? },
            "passage-lr" | "passage-rl" => {
                let field = self.field(step, "index")?;
                let index = match self.atom(field)?.parse::<u8>() {
                    Ok(i @ 1..=6) => i,
                    _ => return self.fail(field.offset(), "passage index must be 1 to 6"),
                };
                let direction = if name == "passage-lr" { Direction::Prenex } else { Direction::Antiprenex };
                Rule::Passage { index, direction }
            }
            other => return self.fail(rule_field.offset(), format!("unknown rule `{other}`")),
        };
        let result = self.formula(self.field(step, "result")?)?;
        Ok(Step {
            application: RuleApplication::new(rule, position),
            result,
        })
    }
}

pub fn read_derivation(src: &str) -> Result<Derivation, FileError> {
    let reader = Reader { src };
    let top = read_all(src)?;
    let root = match top.as_slice() {
        [root] if root.head() == Some("derivation") => root,
        [] => return reader.fail(0, "empty file"),
        _ => return reader.fail(top[0].offset(), "expected a single `(derivation …)`"),
    };
    let mut start = None;
    let mut steps = Vec::new();
    for item in &root.items()[1..] {
        match item.head() {
            Some("start") if start.is_none() => start = Some(reader.formula(item)?),
            Some("step") => steps.push(reader.step(item)?),
            _ => return reader.fail(item.offset(), "expected `(start …)` or `(step …)`"),
        }
    }
    let Some(start) = start else {
        return reader.fail(root.offset(), "missing `(start …)`");
    };
    Ok(Derivation { start, steps })
}
