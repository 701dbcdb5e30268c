//! A small s-expression reader that remembers where every list came from, so that
//! fields holding formulas can be taken verbatim from the source.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, at: usize },
    List { items: Vec<Sexp>, start: usize, end: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct SexpError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error(src: &str, offset: usize, message: impl Into<String>) -> SexpError {
    let (line, column) = line_column(src, offset);
    SexpError {
        line,
        column,
        message: message.into(),
    }
}

/// Reads all top-level expressions. `;` starts a comment running to the end of the line.
pub fn read_all(src: &str) -> Result<Vec<Sexp>, SexpError> {
    let bytes = src.as_bytes();
    let mut stack: Vec<(usize, Vec<Sexp>)> = Vec::new();
    let mut top = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                stack.push((i, Vec::new()));
                i += 1;
            }
            b')' => {
                let (start, items) = stack.pop().ok_or_else(|| error(src, i, "unbalanced `)`"))?;
                let list = Sexp::List { items, start, end: i + 1 };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(list),
                    None => top.push(list),
                }
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let at = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'(' | b')' | b';') {
                    i += 1;
                }
                let atom = Sexp::Atom {
                    text: src[at..i].to_string(),
                    at,
                };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((start, _)) = stack.last() {
        return Err(error(src, *start, "unclosed `(`"));
    }
    Ok(top)
}

impl Sexp {
    pub fn offset(&self) -> usize {
        match self {
            Sexp::Atom { at, .. } => *at,
            Sexp::List { start, .. } => *start,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn items(&self) -> &[Sexp] {
        match self {
            Sexp::List { items, .. } => items,
            Sexp::Atom { .. } => &[],
        }
    }

    /// The head atom of a list such as `(start …)`.
    pub fn head(&self) -> Option<&str> {
        self.items().first().and_then(Sexp::as_atom)
    }

    /// Source text of a list after its head atom, without the closing paren.
    pub fn tail_text<'s>(&self, src: &'s str) -> &'s str {
        match self {
            Sexp::List { items, end, start } => {
                let from = match items.first() {
                    Some(Sexp::Atom { text, at }) => at + text.len(),
                    _ => start + 1,
                };
                src[from..end - 1].trim()
            }
            Sexp::Atom { .. } => "",
        }
    }
}
