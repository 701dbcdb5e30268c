//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence from tightest to loosest: `~` and quantifiers, `/\`, `\/`, `->`
//! (right associative). A quantifier's scope is the next complete unary operand.
//! `a < b` is sugar for `lt(a, b)`; `#` starts a comment.
//!
//! A bare identifier in term position is a variable if it is bound, if it starts
//! with one of `u`..`z`, if it contains `$`, or if it is written `?name`; otherwise
//! it is a constant. `name()` always denotes a constant.

use super::{Atom, Formula, NameSupply, Quantifier, Symbol, SymbolKind, Term, BULLET_ASCII, SKOLEM_PREFIX};
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    ArityMismatch { symbol: String, expected: usize, found: usize },
    BoundVariableApplied(String),
    TrailingInput(String),
}

/// Syntax error with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::ArityMismatch { symbol, expected, found } => write!(
                f,
                "symbol `{symbol}` used with {found} argument(s), earlier with {expected}"
            ),
            ParseErrorKind::BoundVariableApplied(v) => {
                write!(f, "bound variable `{v}` applied to arguments")
            }
            ParseErrorKind::TrailingInput(t) => write!(f, "unexpected trailing input starting at {t}"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Loc {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Skolem(String),
    ForcedVar(String),
    Bullet,
    Forall,
    Exists,
    Dot,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    Comma,
    Lt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Skolem(s) => format!("`{s}`"),
            Tok::ForcedVar(s) => format!("`?{s}`"),
            Tok::Bullet => "`_dot`".to_string(),
            Tok::Forall => "`forall`".to_string(),
            Tok::Exists => "`exists`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Not => "`~`".to_string(),
            Tok::And => "`/\\`".to_string(),
            Tok::Or => "`\\/`".to_string(),
            Tok::Implies => "`->`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Lt => "`<`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether a free, bare occurrence of `name` reads back as a variable.
pub(crate) fn is_variable_name(name: &str) -> bool {
    name.contains('$') || matches!(name.chars().next(), Some('u'..='z'))
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Identifier core followed by any number of `#digits` / `$digits` suffixes.
    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0).filter(|c| is_ident_continue(*c)) {
            s.push(c);
            self.bump();
        }
        while let (Some(m @ ('#' | '$')), Some(d)) = (self.peek(0), self.peek(1)) {
            if !d.is_ascii_digit() {
                break;
            }
            s.push(m);
            self.bump();
            while let Some(d) = self.peek(0).filter(char::is_ascii_digit) {
                s.push(d);
                self.bump();
            }
        }
        s
    }

    fn next(&mut self) -> Result<(Tok, Loc), ParseError> {
        self.skip_trivia();
        let loc = Loc {
            line: self.line,
            column: self.column,
        };
        let err = |c| ParseError {
            line: loc.line,
            column: loc.column,
            kind: ParseErrorKind::UnexpectedChar(c),
        };
        let Some(c) = self.peek(0) else {
            return Ok((Tok::Eof, loc));
        };
        let tok = match c {
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '.' => {
                self.bump();
                Tok::Dot
            }
            '~' => {
                self.bump();
                Tok::Not
            }
            '<' => {
                self.bump();
                Tok::Lt
            }
            '•' => {
                self.bump();
                Tok::Bullet
            }
            '/' if self.peek(1) == Some('\\') => {
                self.bump();
                self.bump();
                Tok::And
            }
            '\\' if self.peek(1) == Some('/') => {
                self.bump();
                self.bump();
                Tok::Or
            }
            '-' if self.peek(1) == Some('>') => {
                self.bump();
                self.bump();
                Tok::Implies
            }
            '?' => {
                self.bump();
                if !self.peek(0).is_some_and(is_ident_start) {
                    return Err(err('?'));
                }
                Tok::ForcedVar(self.ident())
            }
            c if is_ident_start(c) => {
                let is_skolem = SKOLEM_PREFIX
                    .chars()
                    .enumerate()
                    .all(|(i, p)| self.peek(i) == Some(p))
                    && self.peek(SKOLEM_PREFIX.len()).is_some_and(is_ident_start);
                if is_skolem {
                    for _ in 0..SKOLEM_PREFIX.len() {
                        self.bump();
                    }
                    let rest = self.ident();
                    Tok::Skolem(format!("{SKOLEM_PREFIX}{rest}"))
                } else {
                    let s = self.ident();
                    match s.as_str() {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        BULLET_ASCII => Tok::Bullet,
                        _ => Tok::Ident(s),
                    }
                }
            }
            c => return Err(err(c)),
        };
        Ok((tok, loc))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RawKind {
    Plain,
    Skolem,
    ForcedVar,
    Bullet,
}

#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    kind: RawKind,
    args: Option<Vec<RawTerm>>,
    loc: Loc,
}

#[derive(Clone, Debug)]
enum Raw {
    Atom { pred: String, args: Vec<RawTerm>, loc: Loc },
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Quant(Quantifier, String, Box<Raw>),
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    loc: Loc,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, loc) = lexer.next()?;
        Ok(Parser { lexer, tok, loc })
    }

    fn advance(&mut self) -> Result<(Tok, Loc), ParseError> {
        let (tok, loc) = self.lexer.next()?;
        Ok((core::mem::replace(&mut self.tok, tok), core::mem::replace(&mut self.loc, loc)))
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.loc.line,
            column: self.loc.column,
            kind: ParseErrorKind::Unexpected {
                found: self.tok.describe(),
                expected,
            },
        })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.tok == tok {
            self.advance()?;
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.disjunction()?;
        if self.tok == Tok::Implies {
            self.advance()?;
            let rhs = self.formula()?;
            return Ok(Raw::Or(Box::new(Raw::Not(Box::new(lhs))), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.tok == Tok::Or {
            self.advance()?;
            let rhs = self.conjunction()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::And {
            self.advance()?;
            let rhs = self.unary()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        match self.tok {
            Tok::Not => {
                self.advance()?;
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Tok::Forall | Tok::Exists => {
                let q = if self.tok == Tok::Forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                self.advance()?;
                let var = match &self.tok {
                    Tok::Ident(s) | Tok::ForcedVar(s) => s.clone(),
                    _ => return self.unexpected("a variable"),
                };
                self.advance()?;
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                let body = self.unary()?;
                Ok(Raw::Quant(q, var, Box::new(body)))
            }
            Tok::LParen => {
                self.advance()?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        let loc = self.loc;
        let lhs = self.term()?;
        if self.tok == Tok::Lt {
            self.advance()?;
            let rhs = self.term()?;
            return Ok(Raw::Atom {
                pred: "lt".to_string(),
                args: alloc::vec![lhs, rhs],
                loc,
            });
        }
        if lhs.kind != RawKind::Plain {
            return self.unexpected("`<` after a term");
        }
        Ok(Raw::Atom {
            pred: lhs.name,
            args: lhs.args.unwrap_or_default(),
            loc,
        })
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let loc = self.loc;
        let (name, kind) = match &self.tok {
            Tok::Ident(s) => (s.clone(), RawKind::Plain),
            Tok::Skolem(s) => (s.clone(), RawKind::Skolem),
            Tok::ForcedVar(s) => (s.clone(), RawKind::ForcedVar),
            Tok::Bullet => (BULLET_ASCII.to_string(), RawKind::Bullet),
            _ => return self.unexpected("a term"),
        };
        self.advance()?;
        let mut args = None;
        if self.tok == Tok::LParen && matches!(kind, RawKind::Plain | RawKind::Skolem) {
            self.advance()?;
            let mut list = Vec::new();
            if self.tok != Tok::RParen {
                list.push(self.term()?);
                while self.tok == Tok::Comma {
                    self.advance()?;
                    list.push(self.term()?);
                }
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
            args = Some(list);
        }
        Ok(RawTerm { name, kind, args, loc })
    }
}

/// Parses and rectifies a formula. Binders that clash with a free name or with an
/// earlier binder are renamed `x#1`, `x#2`, … in pre-order.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.formula()?;
    if p.tok != Tok::Eof {
        return Err(ParseError {
            line: p.loc.line,
            column: p.loc.column,
            kind: ParseErrorKind::TrailingInput(p.tok.describe()),
        });
    }
    Resolver::new(&raw).resolve(&raw)
}

/// Parses a single term; bare identifiers follow the free-occurrence rule.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.term()?;
    if p.tok != Tok::Eof {
        return Err(ParseError {
            line: p.loc.line,
            column: p.loc.column,
            kind: ParseErrorKind::TrailingInput(p.tok.describe()),
        });
    }
    let mut r = Resolver {
        renames: Vec::new(),
        next_binder: 0,
        scope: Vec::new(),
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
    };
    r.term(&raw)
}

struct Resolver {
    /// New binder names in pre-order.
    renames: Vec<String>,
    next_binder: usize,
    scope: Vec<(String, Symbol)>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

impl Resolver {
    fn new(raw: &Raw) -> Self {
        let mut free = BTreeSet::new();
        let mut binders = Vec::new();
        let mut all = NameSupply::new();
        collect(raw, &mut Vec::new(), &mut free, &mut binders, &mut all);
        let mut kept = BTreeSet::new();
        let renames = binders
            .into_iter()
            .map(|b| {
                if !free.contains(&b) && kept.insert(b.clone()) {
                    b
                } else {
                    all.fresh(&b)
                }
            })
            .collect();
        Resolver {
            renames,
            next_binder: 0,
            scope: Vec::new(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    fn resolve(&mut self, raw: &Raw) -> Result<Formula, ParseError> {
        Ok(match raw {
            Raw::Atom { pred, args, loc } => {
                check_arity(&mut self.predicates, pred, args.len(), *loc)?;
                let mut ts = Vec::with_capacity(args.len());
                for a in args {
                    ts.push(self.term(a)?);
                }
                Formula::Atom(Atom::new(Symbol::predicate(pred, args.len()), ts))
            }
            Raw::Not(a) => Formula::not(self.resolve(a)?),
            Raw::And(a, b) => Formula::and(self.resolve(a)?, self.resolve(b)?),
            Raw::Or(a, b) => Formula::or(self.resolve(a)?, self.resolve(b)?),
            Raw::Quant(q, v, body) => {
                let new = Symbol::variable(&self.renames[self.next_binder]);
                self.next_binder += 1;
                self.scope.push((v.clone(), new.clone()));
                let body = self.resolve(body);
                self.scope.pop();
                Formula::quantified(*q, new, body?)
            }
        })
    }

    fn bound(&self, name: &str) -> Option<&Symbol> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn term(&mut self, t: &RawTerm) -> Result<Term, ParseError> {
        match (t.kind, &t.args) {
            (RawKind::Bullet, _) => Ok(Term::bullet()),
            (RawKind::ForcedVar, _) => Ok(match self.bound(&t.name) {
                Some(v) => Term::from_var(v.clone()),
                None => Term::var(&t.name),
            }),
            (RawKind::Plain, None) => {
                if let Some(v) = self.bound(&t.name) {
                    return Ok(Term::from_var(v.clone()));
                }
                if is_variable_name(&t.name) {
                    return Ok(Term::var(&t.name));
                }
                check_arity(&mut self.functions, &t.name, 0, t.loc)?;
                Ok(Term::constant(&t.name))
            }
            (kind, args) => {
                let args = args.as_deref().unwrap_or_default();
                if kind == RawKind::Plain && self.bound(&t.name).is_some() {
                    return Err(ParseError {
                        line: t.loc.line,
                        column: t.loc.column,
                        kind: ParseErrorKind::BoundVariableApplied(t.name.clone()),
                    });
                }
                check_arity(&mut self.functions, &t.name, args.len(), t.loc)?;
                let mut ts = Vec::with_capacity(args.len());
                for a in args {
                    ts.push(self.term(a)?);
                }
                let head = if kind == RawKind::Skolem {
                    Symbol::skolem(&t.name, ts.len())
                } else {
                    Symbol::function(&t.name, ts.len())
                };
                debug_assert!(matches!(head.kind(), SymbolKind::Function | SymbolKind::Skolem));
                Ok(Term::app(head, ts))
            }
        }
    }
}

fn check_arity(
    table: &mut BTreeMap<String, usize>,
    name: &str,
    arity: usize,
    loc: Loc,
) -> Result<(), ParseError> {
    match table.get(name) {
        Some(&expected) if expected != arity => Err(ParseError {
            line: loc.line,
            column: loc.column,
            kind: ParseErrorKind::ArityMismatch {
                symbol: name.to_string(),
                expected,
                found: arity,
            },
        }),
        Some(_) => Ok(()),
        None => {
            table.insert(name.to_string(), arity);
            Ok(())
        }
    }
}

fn collect(
    raw: &Raw,
    scope: &mut Vec<String>,
    free: &mut BTreeSet<String>,
    binders: &mut Vec<String>,
    all: &mut NameSupply,
) {
    fn term(t: &RawTerm, scope: &[String], free: &mut BTreeSet<String>, all: &mut NameSupply) {
        all.reserve(&t.name);
        if t.args.is_none() && !scope.contains(&t.name) {
            free.insert(t.name.clone());
        }
        for a in t.args.iter().flatten() {
            term(a, scope, free, all);
        }
    }
    match raw {
        Raw::Atom { args, .. } => {
            for a in args {
                term(a, scope, free, all);
            }
        }
        Raw::Not(a) => collect(a, scope, free, binders, all),
        Raw::And(a, b) | Raw::Or(a, b) => {
            collect(a, scope, free, binders, all);
            collect(b, scope, free, binders, all);
        }
        Raw::Quant(_, v, body) => {
            all.reserve(v);
            binders.push(v.clone());
            scope.push(v.clone());
            collect(body, scope, free, binders, all);
            scope.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print;
    use alloc::vec;

    #[test]
    fn nullary_atom() {
        assert_eq!(parse("P").unwrap(), Formula::prop("P"));
    }

    #[test]
    fn minimal_quantifier_scope() {
        let f = parse("forall x. exists y. (x < y) \\/ exists m. forall z. ~(m < z)").unwrap();
        let lt = |a: Term, b: Term| Formula::atom(Symbol::predicate("lt", 2), vec![a, b]);
        let expected = Formula::or(
            Formula::forall("x", Formula::exists("y", lt(Term::var("x"), Term::var("y")))),
            Formula::exists(
                "m",
                Formula::forall("z", Formula::not(lt(Term::var("m"), Term::var("z")))),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn renames_clashing_binder() {
        let f = parse("Human(x) /\\ exists x. Mortal(x)").unwrap();
        assert_eq!(print(&f), "Human(x) /\\ exists x#1. Mortal(x#1)");
        assert!(f.is_rectified());
        let g = parse("forall x. P(x) \\/ forall x. Q(x) \\/ forall x#1. R(x#1)").unwrap();
        assert_eq!(g.bound_variables().iter().map(|v| v.name()).collect::<Vec<_>>(), ["x", "x#2", "x#1"]);
    }

    #[test]
    fn implication_is_sugar_and_right_associative() {
        let f = parse("A -> B -> C").unwrap();
        let expected = Formula::or(
            Formula::not(Formula::prop("A")),
            Formula::or(Formula::not(Formula::prop("B")), Formula::prop("C")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence() {
        let f = parse("~A /\\ B \\/ C").unwrap();
        let expected = Formula::or(
            Formula::and(Formula::not(Formula::prop("A")), Formula::prop("B")),
            Formula::prop("C"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn variables_and_constants() {
        let f = parse("P(x, c, a(), ?b, sk$z(sk$x), _dot, y$3)").unwrap();
        let Formula::Atom(a) = f else { panic!() };
        let kinds: Vec<_> = a.args().iter().map(|t| t.head().kind()).collect();
        use SymbolKind::*;
        assert_eq!(kinds, [Variable, Function, Function, Variable, Skolem, Bullet, Variable]);
    }

    #[test]
    fn comments_and_counters() {
        let f = parse("# leading comment\nforall x#2. P(x#2) # trailing").unwrap();
        assert_eq!(f.bound_variables()[0].name(), "x#2");
    }

    #[test]
    fn syntax_error_has_location() {
        let e = parse("P(x) \\/\n  /\\ Q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("P(x").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse("P & Q").unwrap_err().kind, ParseErrorKind::UnexpectedChar('&')));
    }

    #[test]
    fn arity_mismatch() {
        let e = parse("P(f(c)) \\/ Q(f(c, c))").unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::ArityMismatch {
                symbol: "f".into(),
                expected: 1,
                found: 2
            }
        );
        assert_eq!((e.line, e.column), (1, 14));
        assert!(parse("P(c) \\/ P").is_err());
    }

    #[test]
    fn bound_variable_applied() {
        let e = parse("forall x. P(x(c))").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BoundVariableApplied("x".into()));
    }
}
