//! First-order terms and formulas over `~`, `/\`, `\/` and the two quantifiers.
//!
//! All public operations work on *rectified* formulas: every bound variable is
//! bound by exactly one quantifier and no variable occurs both free and bound.
//! The parser establishes this by renaming binders apart, and
//! [`Formula::replace_at`] re-checks it.

mod parse;
mod print;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse, parse_term, ParseError, ParseErrorKind};
pub use print::{print, print_term};

/// Name prefix reserved for Skolem symbols; the lexer never produces it for user symbols.
pub const SKOLEM_PREFIX: &str = "sk$";
/// Internal name of the fresh constant added to empty champs finis.
pub const BULLET_NAME: &str = "•";
/// ASCII spelling of the bullet constant.
pub const BULLET_ASCII: &str = "_dot";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
    Variable,
    Skolem,
    Bullet,
}

/// A named symbol with a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
    kind: SymbolKind,
}

impl Symbol {
    fn new(name: &str, arity: usize, kind: SymbolKind) -> Self {
        Symbol {
            name: Arc::from(name),
            arity,
            kind,
        }
    }

    pub fn variable(name: &str) -> Self {
        Self::new(name, 0, SymbolKind::Variable)
    }

    pub fn function(name: &str, arity: usize) -> Self {
        assert!(
            !name.starts_with(SKOLEM_PREFIX),
            "function symbol `{name}` uses the reserved Skolem prefix"
        );
        Self::new(name, arity, SymbolKind::Function)
    }

    pub fn constant(name: &str) -> Self {
        Self::function(name, 0)
    }

    pub fn predicate(name: &str, arity: usize) -> Self {
        Self::new(name, arity, SymbolKind::Predicate)
    }

    /// A Skolem symbol. `name` must carry [`SKOLEM_PREFIX`].
    pub fn skolem(name: &str, arity: usize) -> Self {
        assert!(
            name.starts_with(SKOLEM_PREFIX),
            "Skolem symbol `{name}` lacks the reserved prefix"
        );
        Self::new(name, arity, SymbolKind::Skolem)
    }

    pub fn bullet() -> Self {
        Self::new(BULLET_NAME, 0, SymbolKind::Bullet)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_variable(&self) -> bool {
        self.kind == SymbolKind::Variable
    }

    pub fn is_skolem(&self) -> bool {
        self.kind == SymbolKind::Skolem
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Bullet => f.write_str(BULLET_ASCII),
            _ => f.write_str(&self.name),
        }
    }
}

/// A variable or a function application. Constants are nullary applications.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    head: Symbol,
    args: Vec<Term>,
}

impl Term {
    /// Panics if `args.len()` differs from the head's arity or the head is a predicate.
    pub fn app(head: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(
            head.arity,
            args.len(),
            "arity mismatch for `{}`",
            head.name
        );
        assert!(head.kind != SymbolKind::Predicate, "predicate used as term head");
        Term { head, args }
    }

    pub fn var(name: &str) -> Self {
        Self::from_var(Symbol::variable(name))
    }

    pub fn from_var(var: Symbol) -> Self {
        assert!(var.is_variable());
        Term {
            head: var,
            args: Vec::new(),
        }
    }

    pub fn constant(name: &str) -> Self {
        Self::app(Symbol::constant(name), Vec::new())
    }

    pub fn bullet() -> Self {
        Self::app(Symbol::bullet(), Vec::new())
    }

    pub fn head(&self) -> &Symbol {
        &self.head
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn is_var(&self) -> bool {
        self.head.is_variable()
    }

    pub fn as_var(&self) -> Option<&Symbol> {
        self.is_var().then_some(&self.head)
    }

    pub fn is_ground(&self) -> bool {
        !self.is_var() && self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        if self.is_var() {
            out.insert(self.head.clone());
        }
        for a in &self.args {
            a.collect_vars(out);
        }
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Symbol) -> bool {
        (self.is_var() && &self.head == v) || self.args.iter().any(|a| a.contains_var(v))
    }

    /// True if `sub` occurs as a subterm (including `self` itself).
    pub fn contains(&self, sub: &Term) -> bool {
        self == sub || self.args.iter().any(|a| a.contains(sub))
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        if !self.is_var() {
            out.insert(self.head.clone());
        }
        for a in &self.args {
            a.collect_symbols(out);
        }
    }

    pub fn substitute(&self, sigma: &Substitution) -> Term {
        if self.is_var() {
            if let Some(t) = sigma.get(&self.head) {
                return t.clone();
            }
            return self.clone();
        }
        Term {
            head: self.head.clone(),
            args: self.args.iter().map(|a| a.substitute(sigma)).collect(),
        }
    }

    /// Replaces every occurrence of the subterm `from` by `to`.
    pub fn replace_subterm(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        Term {
            head: self.head.clone(),
            args: self.args.iter().map(|a| a.replace_subterm(from, to)).collect(),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A predicate applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    predicate: Symbol,
    args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(predicate.kind, SymbolKind::Predicate);
        assert_eq!(
            predicate.arity,
            args.len(),
            "arity mismatch for `{}`",
            predicate.name
        );
        Atom { predicate, args }
    }

    pub fn predicate(&self) -> &Symbol {
        &self.predicate
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(&mut f).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Quantified(Quantifier, Symbol, Box<Formula>),
}

/// Path of child indices from the root. `Not` and quantifiers have child 0,
/// `And`/`Or` have children 0 and 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_indices(indices: Vec<usize>) -> Self {
        Position(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.0.split_last()?;
        Some(Position(init.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

/// Parallel substitution of terms for distinct variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Symbol, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: Symbol, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(var, t);
        s
    }

    /// Panics if `var` is not a variable. A later binding for the same variable replaces the earlier one.
    pub fn insert(&mut self, var: Symbol, t: Term) {
        assert!(var.is_variable(), "substitution domain must be variables");
        self.0.insert(var, t);
    }

    pub fn get(&self, var: &Symbol) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.0.iter()
    }
}

impl FromIterator<(Symbol, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Symbol, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert(v, t);
        }
        s
    }
}

/// Errors of the structural formula operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaError {
    /// A term of the substitution range would be captured by `binder`.
    Capture { binder: Symbol, variable: Symbol },
    UnresolvablePosition(Position),
    /// `variable` is bound twice, or both free and bound.
    NotRectified { variable: Symbol },
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::Capture { binder, variable } => write!(
                f,
                "substituting for `{variable}` would be captured by the quantifier on `{binder}`"
            ),
            FormulaError::UnresolvablePosition(p) => write!(f, "position {p} does not exist"),
            FormulaError::NotRectified { variable } => {
                write!(f, "variable `{variable}` is bound more than once or occurs both free and bound")
            }
        }
    }
}

impl core::error::Error for FormulaError {}

impl Formula {
    pub fn atom(predicate: Symbol, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    /// Nullary atom.
    pub fn prop(name: &str) -> Self {
        Self::atom(Symbol::predicate(name, 0), Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn quantified(q: Quantifier, var: Symbol, body: Formula) -> Self {
        assert!(var.is_variable(), "quantifiers bind variables");
        Formula::Quantified(q, var, Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Self::quantified(Quantifier::Forall, Symbol::variable(var), body)
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Self::quantified(Quantifier::Exists, Symbol::variable(var), body)
    }

    /// `a -> b` as `~a \/ b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Self::or(Self::not(a), b)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(a) | Formula::Quantified(_, _, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn child(&self, i: usize) -> Option<&Formula> {
        match (self, i) {
            (Formula::Not(a), 0) | (Formula::Quantified(_, _, a), 0) => Some(a),
            (Formula::And(a, _), 0) | (Formula::Or(a, _), 0) => Some(a),
            (Formula::And(_, b), 1) | (Formula::Or(_, b), 1) => Some(b),
            _ => None,
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Formula> {
        match (self, i) {
            (Formula::Not(a), 0) | (Formula::Quantified(_, _, a), 0) => Some(a),
            (Formula::And(a, _), 0) | (Formula::Or(a, _), 0) => Some(a),
            (Formula::And(_, b), 1) | (Formula::Or(_, b), 1) => Some(b),
            _ => None,
        }
    }

    pub fn subformula_at(&self, p: &Position) -> Option<&Formula> {
        p.indices().iter().try_fold(self, |f, &i| f.child(i))
    }

    fn subformula_at_mut(&mut self, p: &Position) -> Option<&mut Formula> {
        let mut cur = self;
        for &i in p.indices() {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// Replaces the subformula at `p` without checking rectifiedness of the result.
    pub fn replace_at_unchecked(&self, p: &Position, c: Formula) -> Result<Formula, FormulaError> {
        let mut out = self.clone();
        let slot = out
            .subformula_at_mut(p)
            .ok_or_else(|| FormulaError::UnresolvablePosition(p.clone()))?;
        *slot = c;
        Ok(out)
    }

    /// `A[C]`: the subformula at `p` replaced by `c`; the result must be rectified.
    pub fn replace_at(&self, p: &Position, c: Formula) -> Result<Formula, FormulaError> {
        let out = self.replace_at_unchecked(p, c)?;
        out.check_rectified()?;
        Ok(out)
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        fn go(f: &Formula, p: &mut Vec<usize>, out: &mut Vec<Position>) {
            out.push(Position(p.clone()));
            for (i, c) in f.children().into_iter().enumerate() {
                p.push(i);
                go(c, p, out);
                p.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_variables(&self) -> BTreeSet<Symbol> {
        fn go(f: &Formula, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
            match f {
                Formula::Atom(a) => {
                    for t in &a.args {
                        let mut vs = BTreeSet::new();
                        t.collect_vars(&mut vs);
                        out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                    }
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Quantified(_, v, body) => {
                    bound.push(v.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn has_free_variable(&self, v: &Symbol) -> bool {
        self.free_variables().contains(v)
    }

    /// Variables of the quantifier occurrences, in pre-order (with repetitions).
    pub fn bound_variables(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Quantified(_, v, _) = f {
                out.push(v.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, visitor: &mut impl FnMut(&'a Formula)) {
        visitor(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(a) | Formula::Quantified(_, _, a) => a.visit(visitor),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(visitor);
                b.visit(visitor);
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    /// Function, Skolem and bullet symbols occurring in terms.
    pub fn function_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            for t in &a.args {
                t.collect_symbols(&mut out);
            }
        }
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Quantified(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn contains_conjunction(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::And(..)) {
                found = true;
            }
        });
        found
    }

    pub fn quantifier_count(&self) -> usize {
        self.bound_variables().len()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn check_rectified(&self) -> Result<(), FormulaError> {
        let free = self.free_variables();
        let mut seen = BTreeSet::new();
        for v in self.bound_variables() {
            if free.contains(&v) || !seen.insert(v.clone()) {
                return Err(FormulaError::NotRectified { variable: v });
            }
        }
        Ok(())
    }

    pub fn is_rectified(&self) -> bool {
        self.check_rectified().is_ok()
    }

    /// Parallel substitution for the free occurrences of the domain variables.
    ///
    /// Fails if a variable of a substituted term would be captured by a quantifier
    /// on the path to the replaced occurrence.
    pub fn substitute(&self, sigma: &Substitution) -> Result<Formula, FormulaError> {
        fn go(
            f: &Formula,
            sigma: &Substitution,
            binders: &mut Vec<Symbol>,
        ) -> Result<Formula, FormulaError> {
            Ok(match f {
                Formula::Atom(a) => {
                    let mut args = Vec::with_capacity(a.args.len());
                    for t in &a.args {
                        args.push(subst_term(t, sigma, binders)?);
                    }
                    Formula::Atom(Atom {
                        predicate: a.predicate.clone(),
                        args,
                    })
                }
                Formula::Not(a) => Formula::not(go(a, sigma, binders)?),
                Formula::And(a, b) => Formula::and(go(a, sigma, binders)?, go(b, sigma, binders)?),
                Formula::Or(a, b) => Formula::or(go(a, sigma, binders)?, go(b, sigma, binders)?),
                Formula::Quantified(q, v, body) => {
                    binders.push(v.clone());
                    let body = go(body, sigma, binders);
                    binders.pop();
                    Formula::Quantified(*q, v.clone(), Box::new(body?))
                }
            })
        }
        fn subst_term(
            t: &Term,
            sigma: &Substitution,
            binders: &[Symbol],
        ) -> Result<Term, FormulaError> {
            if t.is_var() {
                // Bound occurrences are never replaced.
                if binders.contains(&t.head) {
                    return Ok(t.clone());
                }
                if let Some(r) = sigma.get(&t.head) {
                    let vars = r.variables();
                    if let Some(b) = binders.iter().rev().find(|b| vars.contains(*b)) {
                        return Err(FormulaError::Capture {
                            binder: b.clone(),
                            variable: t.head.clone(),
                        });
                    }
                    return Ok(r.clone());
                }
                return Ok(t.clone());
            }
            let mut args = Vec::with_capacity(t.args.len());
            for a in &t.args {
                args.push(subst_term(a, sigma, binders)?);
            }
            Ok(Term {
                head: t.head.clone(),
                args,
            })
        }
        go(self, sigma, &mut Vec::new())
    }

    /// Applies `f` to every term argument of every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut *f)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Quantified(q, v, body) => {
                Formula::Quantified(*q, v.clone(), Box::new(body.map_terms(f)))
            }
        }
    }

    /// Renames binders and their bound occurrences by `map`. Free occurrences are untouched.
    pub fn rename_bound(&self, map: &BTreeMap<Symbol, Symbol>) -> Formula {
        fn go(f: &Formula, map: &BTreeMap<Symbol, Symbol>, active: &mut Vec<(Symbol, Symbol)>) -> Formula {
            match f {
                Formula::Atom(a) => Formula::Atom(a.map_terms(|t| rename_term(t, active))),
                Formula::Not(a) => Formula::not(go(a, map, active)),
                Formula::And(a, b) => Formula::and(go(a, map, active), go(b, map, active)),
                Formula::Or(a, b) => Formula::or(go(a, map, active), go(b, map, active)),
                Formula::Quantified(q, v, body) => match map.get(v) {
                    Some(new) => {
                        active.push((v.clone(), new.clone()));
                        let body = go(body, map, active);
                        active.pop();
                        Formula::Quantified(*q, new.clone(), Box::new(body))
                    }
                    None => {
                        // An inner binder with the same name shadows an outer renaming.
                        active.push((v.clone(), v.clone()));
                        let body = go(body, map, active);
                        active.pop();
                        Formula::Quantified(*q, v.clone(), Box::new(body))
                    }
                },
            }
        }
        fn rename_term(t: &Term, active: &[(Symbol, Symbol)]) -> Term {
            if t.is_var() {
                if let Some((_, new)) = active.iter().rev().find(|(old, _)| old == &t.head) {
                    return Term::from_var(new.clone());
                }
                return t.clone();
            }
            Term {
                head: t.head.clone(),
                args: t.args.iter().map(|a| rename_term(a, active)).collect(),
            }
        }
        go(self, map, &mut Vec::new())
    }

    /// Equality up to the names of bound variables (compared by binder index).
    pub fn alpha_equal(&self, other: &Formula) -> bool {
        fn go<'a>(a: &'a Formula, b: &'a Formula, sa: &mut Vec<&'a Symbol>, sb: &mut Vec<&'a Symbol>) -> bool {
            match (a, b) {
                (Formula::Atom(x), Formula::Atom(y)) => {
                    x.predicate == y.predicate
                        && x.args.len() == y.args.len()
                        && x.args.iter().zip(&y.args).all(|(s, t)| term_eq(s, t, sa, sb))
                }
                (Formula::Not(x), Formula::Not(y)) => go(x, y, sa, sb),
                (Formula::And(x1, x2), Formula::And(y1, y2))
                | (Formula::Or(x1, x2), Formula::Or(y1, y2)) => go(x1, y1, sa, sb) && go(x2, y2, sa, sb),
                (Formula::Quantified(qa, va, x), Formula::Quantified(qb, vb, y)) => {
                    if qa != qb {
                        return false;
                    }
                    sa.push(va);
                    sb.push(vb);
                    let r = go(x, y, sa, sb);
                    sa.pop();
                    sb.pop();
                    r
                }
                _ => false,
            }
        }
        fn index(stack: &[&Symbol], v: &Symbol) -> Option<usize> {
            stack.iter().rev().position(|b| *b == v)
        }
        fn term_eq(s: &Term, t: &Term, sa: &[&Symbol], sb: &[&Symbol]) -> bool {
            match (s.is_var(), t.is_var()) {
                (true, true) => match (index(sa, &s.head), index(sb, &t.head)) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => s.head == t.head,
                    _ => false,
                },
                (false, false) => {
                    s.head == t.head
                        && s.args.len() == t.args.len()
                        && s.args.iter().zip(&t.args).all(|(x, y)| term_eq(x, y, sa, sb))
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Pairs of binders of `self` and `other` at corresponding positions, if the two are
    /// alpha-equal. This is the renaming that turns `other` into `self`.
    pub fn variant_map(&self, other: &Formula) -> Option<BTreeMap<Symbol, Symbol>> {
        if !self.alpha_equal(other) {
            return None;
        }
        let mut map = BTreeMap::new();
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        self.visit(&mut |f| {
            if let Formula::Quantified(_, v, _) = f {
                xs.push(v.clone());
            }
        });
        other.visit(&mut |f| {
            if let Formula::Quantified(_, v, _) = f {
                ys.push(v.clone());
            }
        });
        for (x, y) in xs.into_iter().zip(ys) {
            if x != y {
                map.insert(y, x);
            }
        }
        Some(map)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Generates variable names not in a given set: `x`, `x#1`, `x#2`, …
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: BTreeSet<String>,
}

impl NameSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(String::from(name));
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// Reserves every symbol name of `f` (variables, functions, predicates).
    pub fn reserve_formula(&mut self, f: &Formula) {
        for v in f.bound_variables() {
            self.reserve(v.name());
        }
        for v in f.free_variables() {
            self.reserve(v.name());
        }
        for s in f.function_symbols() {
            self.reserve(s.name());
        }
    }

    /// `base` itself if unused, else `root#k` for the least free `k`, where `root`
    /// is `base` without any `#k` suffix.
    pub fn fresh(&mut self, base: &str) -> String {
        if self.used.insert(String::from(base)) {
            return String::from(base);
        }
        let root = strip_counter(base);
        let mut k = 1usize;
        loop {
            let candidate = alloc::format!("{root}#{k}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

fn strip_counter(name: &str) -> &str {
    match name.rfind('#') {
        Some(i) if i > 0 && name[i + 1..].bytes().all(|b| b.is_ascii_digit()) && i + 1 < name.len() => {
            &name[..i]
        }
        _ => name,
    }
}
