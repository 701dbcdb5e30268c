//! Sentential validity of quantifier-free formulas.
//!
//! Atoms (a predicate with its exact argument terms) are read as propositional
//! variables. Validity of `A` is decided as unsatisfiability of `~A`: the negation
//! is brought into negation normal form, encoded into clauses with one-sided
//! (polarity-aware) definitions, and refuted by a DPLL search with unit
//! propagation over two watched literals.

use crate::syntax::{Atom, Formula};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Propositional structure over dense atom indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Prop::Var(i) => assignment[*i],
            Prop::Not(p) => !p.eval(assignment),
            Prop::And(p, q) => p.eval(assignment) && q.eval(assignment),
            Prop::Or(p, q) => p.eval(assignment) || q.eval(assignment),
        }
    }

    /// One more than the largest atom index, or 0.
    pub fn var_bound(&self) -> usize {
        match self {
            Prop::Var(i) => i + 1,
            Prop::Not(p) => p.var_bound(),
            Prop::And(p, q) | Prop::Or(p, q) => p.var_bound().max(q.var_bound()),
        }
    }
}

/// Bijection between distinct atoms and indices `0..len`, in order of first occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
}

impl AtomTable {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: usize) -> Option<&Atom> {
        self.atoms.get(i)
    }

    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn intern(&mut self, a: &Atom) -> usize {
        if let Some(&i) = self.index.get(a) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(a.clone());
        self.index.insert(a.clone(), i);
        i
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantifierPresent;

impl fmt::Display for QuantifierPresent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("formula is not quantifier-free")
    }
}

impl core::error::Error for QuantifierPresent {}

pub fn abstract_atoms(a: &Formula) -> Result<(Prop, AtomTable), QuantifierPresent> {
    fn go(f: &Formula, table: &mut AtomTable) -> Result<Prop, QuantifierPresent> {
        Ok(match f {
            Formula::Atom(a) => Prop::Var(table.intern(a)),
            Formula::Not(b) => Prop::Not(Box::new(go(b, table)?)),
            Formula::And(b, c) => Prop::And(Box::new(go(b, table)?), Box::new(go(c, table)?)),
            Formula::Or(b, c) => Prop::Or(Box::new(go(b, table)?), Box::new(go(c, table)?)),
            Formula::Quantified(..) => return Err(QuantifierPresent),
        })
    }
    let mut table = AtomTable::default();
    let p = go(a, &mut table)?;
    Ok((p, table))
}

pub fn is_tautology(a: &Formula) -> Result<bool, QuantifierPresent> {
    let (p, table) = abstract_atoms(a)?;
    Ok(prop_is_tautology(&p, table.len()))
}

/// Validity of `p` over `num_vars` atoms.
pub fn prop_is_tautology(p: &Prop, num_vars: usize) -> bool {
    let num_vars = num_vars.max(p.var_bound());
    let nnf = Nnf::of(p, true);
    !satisfiable(&nnf, num_vars)
}

/// Exhaustive evaluation over all `2^num_vars` assignments. Exponential; used as a
/// reference for the search-based check.
pub fn truth_table_tautology(p: &Prop, num_vars: usize) -> bool {
    let num_vars = num_vars.max(p.var_bound());
    assert!(num_vars < usize::BITS as usize, "too many atoms for a truth table");
    let mut assignment = vec![false; num_vars];
    for bits in 0u64..(1u64 << num_vars) {
        for (i, slot) in assignment.iter_mut().enumerate() {
            *slot = bits >> i & 1 == 1;
        }
        if !p.eval(&assignment) {
            return false;
        }
    }
    true
}

/// A literal: `var << 1 | negated`.
type Lit = u32;

fn lit(var: usize, negated: bool) -> Lit {
    (var as u32) << 1 | negated as u32
}

fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

/// Negation normal form with flattened n-ary connectives.
enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    /// NNF of `p`, or of `~p` when `negate` is set.
    fn of(p: &Prop, negate: bool) -> Nnf {
        match p {
            Prop::Var(i) => Nnf::Lit(lit(*i, negate)),
            Prop::Not(q) => Nnf::of(q, !negate),
            Prop::And(a, b) | Prop::Or(a, b) => {
                let conj = matches!(p, Prop::And(..)) != negate;
                let mut parts = Vec::new();
                for side in [a, b] {
                    match (Nnf::of(side, negate), conj) {
                        (Nnf::And(xs), true) | (Nnf::Or(xs), false) => parts.extend(xs),
                        (x, _) => parts.push(x),
                    }
                }
                if conj {
                    Nnf::And(parts)
                } else {
                    Nnf::Or(parts)
                }
            }
        }
    }
}

/// Clauses asserting `n`, with fresh definition variables for inner nodes. Each
/// definition is one-directional because every node occurs positively.
fn encode(n: &Nnf, next_var: &mut usize, clauses: &mut Vec<Vec<Lit>>) -> Lit {
    match n {
        Nnf::Lit(l) => *l,
        Nnf::And(xs) | Nnf::Or(xs) => {
            let d = *next_var;
            *next_var += 1;
            let children: Vec<Lit> = xs.iter().map(|x| encode(x, next_var, clauses)).collect();
            let not_d = lit(d, true);
            if matches!(n, Nnf::And(_)) {
                for c in children {
                    clauses.push(vec![not_d, c]);
                }
            } else {
                let mut clause = vec![not_d];
                clause.extend(children);
                clauses.push(clause);
            }
            lit(d, false)
        }
    }
}

fn satisfiable(n: &Nnf, num_vars: usize) -> bool {
    let mut clauses = Vec::new();
    let mut next_var = num_vars;
    match n {
        // A conjunction at the root needs no definition variable.
        Nnf::And(xs) => {
            for x in xs {
                let l = encode(x, &mut next_var, &mut clauses);
                clauses.push(vec![l]);
            }
        }
        _ => {
            let l = encode(n, &mut next_var, &mut clauses);
            clauses.push(vec![l]);
        }
    }
    Dpll::new(next_var, clauses, num_vars).solve()
}

const UNASSIGNED: u8 = 2;

struct Dpll {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// 0 = false, 1 = true, 2 = unassigned.
    value: Vec<u8>,
    trail: Vec<Lit>,
    /// (trail length before the decision, decision literal, already flipped).
    decisions: Vec<(usize, Lit, bool)>,
    head: usize,
    units: Vec<Lit>,
    /// Atoms that occur with one polarity only.
    pure: Vec<Lit>,
}

impl Dpll {
    fn new(num_vars: usize, clauses: Vec<Vec<Lit>>, atom_vars: usize) -> Self {
        let mut watches = vec![Vec::new(); 2 * num_vars];
        let mut units = Vec::new();
        let mut polarity = vec![0u8; atom_vars];
        for (ci, c) in clauses.iter().enumerate() {
            for &l in c {
                if var_of(l) < atom_vars {
                    polarity[var_of(l)] |= 1 << (l & 1);
                }
            }
            match c.len() {
                0 => {}
                1 => units.push(c[0]),
                _ => {
                    watches[c[0] as usize].push(ci);
                    watches[c[1] as usize].push(ci);
                }
            }
        }
        let pure = polarity
            .iter()
            .enumerate()
            .filter_map(|(v, &p)| match p {
                1 => Some(lit(v, false)),
                2 => Some(lit(v, true)),
                _ => None,
            })
            .collect();
        Dpll {
            clauses,
            watches,
            value: vec![UNASSIGNED; num_vars],
            trail: Vec::new(),
            decisions: Vec::new(),
            head: 0,
            units,
            pure,
        }
    }

    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[var_of(l)] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (l & 1) as u8,
        }
    }

    /// Returns false on an immediate contradiction.
    fn enqueue(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            1 => true,
            0 => false,
            _ => {
                self.value[var_of(l)] = 1 ^ (l & 1) as u8;
                self.trail.push(l);
                true
            }
        }
    }

    /// Unit propagation; returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head] ^ 1;
            self.head += 1;
            let mut watchers = core::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut ok = true;
            while i < watchers.len() {
                let ci = watchers[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_value = match self.value[var_of(first)] {
                    UNASSIGNED => UNASSIGNED,
                    v => v ^ (first & 1) as u8,
                };
                if first_value == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let v = self.value[var_of(l)];
                    if v == UNASSIGNED || v ^ (l & 1) as u8 == 1 {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(ci);
                        watchers.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                if first_value == 0 || !self.enqueue(first) {
                    ok = false;
                    break;
                }
            }
            self.watches[falsified as usize].extend(watchers);
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            self.value[var_of(l)] = UNASSIGNED;
        }
        self.head = self.head.min(len);
    }

    fn solve(&mut self) -> bool {
        if self.clauses.iter().any(Vec::is_empty) {
            return false;
        }
        for l in core::mem::take(&mut self.units) {
            if !self.enqueue(l) {
                return false;
            }
        }
        // Pure atoms can be fixed without loss: setting them only satisfies clauses.
        for l in core::mem::take(&mut self.pure) {
            self.enqueue(l);
        }
        let mut next_free = 0;
        loop {
            if !self.propagate() {
                // Chronological backtracking to the last unflipped decision.
                loop {
                    let Some((len, l, flipped)) = self.decisions.pop() else {
                        return false;
                    };
                    self.undo_to(len);
                    if !flipped {
                        self.decisions.push((len, l ^ 1, true));
                        self.enqueue(l ^ 1);
                        next_free = 0;
                        break;
                    }
                }
                continue;
            }
            while next_free < self.value.len() && self.value[next_free] != UNASSIGNED {
                next_free += 1;
            }
            if next_free == self.value.len() {
                return true;
            }
            let l = lit(next_free, true);
            self.decisions.push((self.trail.len(), l, false));
            self.enqueue(l);
        }
    }
}
