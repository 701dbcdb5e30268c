//! The bundled formula corpus.
//!
//! One entry per line: `tag | name | formula`. Entries tagged `derivable` have
//! Property C of some order at most 5; `invalid` entries are falsifiable.

use herbrand_core::{parse, Formula};

pub const CORPUS: &str = include_str!("../corpus/formulas.txt");

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub derivable: bool,
    pub formula: Formula,
}

pub fn corpus() -> Vec<Entry> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut parts = line.splitn(3, '|').map(str::trim);
            let (tag, name, text) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
            let formula = parse(text).unwrap_or_else(|e| panic!("corpus entry `{name}`: {e}"));
            Entry {
                name,
                derivable: match tag {
                    "derivable" => true,
                    "invalid" => false,
                    _ => panic!("corpus entry `{name}`: unknown tag `{tag}`"),
                },
                formula,
            }
        })
        .collect()
}
