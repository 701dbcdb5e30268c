//! From Property C to a linear derivation.
//!
//! The builder keeps a skeleton that mirrors `A` instance by instance: every
//! existentialoid quantifier becomes a junction with one branch per champ-fini term,
//! every universaloid quantifier a node binding the pseudo-variable that stands for
//! its Skolem term. Rendering the skeleton with nothing introduced gives the
//! expansion `F^{T_n(F)}` with Skolem-headed terms read as variables; introducing
//! quantifiers one by one, merging the then-identical branches and renaming the
//! binders back gives `A`. Every step goes through the kernel.

use crate::calculus::{Derivation, Renaming, Rule, RuleApplication, RuleError};
use crate::polarity::{class_of, Parity, QuantifierClass};
use crate::sentential::is_tautology;
use crate::skolem::outer_skolemize_with_bindings;
use crate::syntax::{Atom, Formula, NameSupply, Position, Quantifier, Symbol, Term};
use crate::universe::{champ_fini, instantiate};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    /// The expansion at this order is not a sentential tautology.
    NoPropertyC { order: usize },
    /// The introduction order could not be scheduled; names a blocked quantifier.
    Unschedulable { variable: Symbol },
    /// The kernel rejected a step the builder produced.
    Kernel { step: usize, reason: RuleError },
    /// The builder's own rendering disagrees with the kernel's result.
    Diverged { step: usize },
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::NoPropertyC { order } => write!(f, "no Property C of order {order}"),
            BuildError::Unschedulable { variable } => {
                write!(f, "cannot schedule the introduction of `{variable}`")
            }
            BuildError::Kernel { step, reason } => write!(f, "kernel rejected step {step}: {reason}"),
            BuildError::Diverged { step } => write!(f, "builder and kernel disagree at step {step}"),
        }
    }
}

impl core::error::Error for BuildError {}

#[derive(Debug)]
enum Kind {
    Atom(Atom),
    Not,
    And,
    Or,
    Delta {
        quantifier: Quantifier,
        var: Symbol,
        pseudo: Symbol,
        introduced: bool,
    },
    Gamma {
        quantifier: Quantifier,
        var: Symbol,
    },
    Branch {
        var: Symbol,
        witness: Term,
        introduced: bool,
        live: bool,
    },
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    children: Vec<usize>,
    parent: Option<usize>,
}

/// Node ids are in pre-order.
struct Skeleton {
    nodes: Vec<Node>,
}

struct Builder<'a> {
    terms: &'a [Term],
    /// Skolem symbol per universaloid quantifier position of `A`.
    skolem_at: BTreeMap<Position, Symbol>,
    skeleton: Skeleton,
    /// Skolem ground term of each universaloid node.
    delta_terms: Vec<(usize, Term)>,
}

impl Builder<'_> {
    fn add(&mut self, kind: Kind, parent: Option<usize>) -> usize {
        let id = self.skeleton.nodes.len();
        self.skeleton.nodes.push(Node {
            kind,
            children: Vec::new(),
            parent,
        });
        if let Some(p) = parent {
            self.skeleton.nodes[p].children.push(id);
        }
        id
    }

    /// `gammas` holds the champ-fini terms chosen for the enclosing junctions.
    fn grow(&mut self, f: &Formula, pos: &mut Vec<usize>, parity: Parity, parent: Option<usize>, gammas: &mut Vec<Term>) {
        match f {
            Formula::Atom(a) => {
                self.add(Kind::Atom(a.clone()), parent);
            }
            Formula::Not(a) => {
                let id = self.add(Kind::Not, parent);
                pos.push(0);
                self.grow(a, pos, parity.flip(), Some(id), gammas);
                pos.pop();
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let kind = if matches!(f, Formula::And(..)) { Kind::And } else { Kind::Or };
                let id = self.add(kind, parent);
                for (i, c) in [a, b].into_iter().enumerate() {
                    pos.push(i);
                    self.grow(c, pos, parity, Some(id), gammas);
                    pos.pop();
                }
            }
            Formula::Quantified(q, v, body) => {
                pos.push(0);
                match class_of(*q, parity) {
                    QuantifierClass::Delta => {
                        let here = Position::from_indices(pos[..pos.len() - 1].to_vec());
                        let sk = self.skolem_at[&here].clone();
                        let id = self.add(
                            Kind::Delta {
                                quantifier: *q,
                                var: v.clone(),
                                pseudo: v.clone(),
                                introduced: false,
                            },
                            parent,
                        );
                        self.delta_terms.push((id, Term::app(sk, gammas.clone())));
                        self.grow(body, pos, parity, Some(id), gammas);
                    }
                    QuantifierClass::Gamma => {
                        let junction = self.add(
                            Kind::Gamma {
                                quantifier: *q,
                                var: v.clone(),
                            },
                            parent,
                        );
                        for t in self.terms {
                            let branch = self.add(
                                Kind::Branch {
                                    var: v.clone(),
                                    witness: t.clone(),
                                    introduced: false,
                                    live: true,
                                },
                                Some(junction),
                            );
                            gammas.push(t.clone());
                            self.grow(body, pos, parity, Some(branch), gammas);
                            gammas.pop();
                        }
                    }
                }
                pos.pop();
            }
        }
    }
}

/// Replaces every maximal Skolem-headed subterm by its pseudo-variable.
fn read(t: &Term, pseudo: &BTreeMap<Term, Symbol>) -> Option<Term> {
    if t.head().is_skolem() {
        return pseudo.get(t).cloned().map(Term::from_var);
    }
    if t.args().is_empty() {
        return Some(t.clone());
    }
    let args = t.args().iter().map(|a| read(a, pseudo)).collect::<Option<Vec<_>>>()?;
    Some(Term::app(t.head().clone(), args))
}

fn fold_path(i: usize, live: usize) -> Vec<usize> {
    if i == 0 {
        vec![0; live - 1]
    } else {
        let mut p = vec![0; live - 1 - i];
        p.push(1);
        p
    }
}

impl Skeleton {
    fn live_branches(&self, junction: usize) -> Vec<usize> {
        self.nodes[junction]
            .children
            .iter()
            .copied()
            .filter(|&b| matches!(self.nodes[b].kind, Kind::Branch { live: true, .. }))
            .collect()
    }

    fn render(&self, id: usize, env: &mut Vec<(Symbol, Term)>) -> Formula {
        let node = &self.nodes[id];
        match &node.kind {
            Kind::Atom(a) => Formula::Atom(a.map_terms(|t| instantiate(t, env))),
            Kind::Not => Formula::not(self.render(node.children[0], env)),
            Kind::And => Formula::and(self.render(node.children[0], env), self.render(node.children[1], env)),
            Kind::Or => Formula::or(self.render(node.children[0], env), self.render(node.children[1], env)),
            Kind::Delta {
                quantifier,
                var,
                pseudo,
                introduced,
            } => {
                env.push((var.clone(), Term::from_var(pseudo.clone())));
                let body = self.render(node.children[0], env);
                env.pop();
                if *introduced {
                    Formula::quantified(*quantifier, pseudo.clone(), body)
                } else {
                    body
                }
            }
            Kind::Gamma { quantifier, var } => {
                let mut parts = self.live_branches(id).into_iter().map(|b| {
                    let Kind::Branch {
                        var: bvar,
                        witness,
                        introduced,
                        ..
                    } = &self.nodes[b].kind
                    else {
                        unreachable!()
                    };
                    let value = if *introduced {
                        Term::from_var(bvar.clone())
                    } else {
                        witness.clone()
                    };
                    env.push((var.clone(), value));
                    let body = self.render(self.nodes[b].children[0], env);
                    env.pop();
                    if *introduced {
                        Formula::quantified(*quantifier, bvar.clone(), body)
                    } else {
                        body
                    }
                });
                let first = parts.next().expect("a junction keeps one live branch");
                match quantifier {
                    Quantifier::Exists => parts.fold(first, Formula::or),
                    Quantifier::Forall => parts.fold(first, Formula::and),
                }
            }
            Kind::Branch { .. } => unreachable!("branches are rendered by their junction"),
        }
    }

    fn render_root(&self) -> Formula {
        self.render(0, &mut Vec::new())
    }

    /// Where the rendering of node `id` currently sits.
    fn position_of(&self, id: usize) -> Position {
        let mut rev: Vec<usize> = Vec::new();
        let mut cur = id;
        while let Some(parent) = self.nodes[cur].parent {
            match &self.nodes[parent].kind {
                Kind::Not => rev.push(0),
                Kind::And | Kind::Or => {
                    let i = self.nodes[parent].children.iter().position(|&c| c == cur).expect("child");
                    rev.push(i);
                }
                Kind::Delta { introduced, .. } | Kind::Branch { introduced, .. } => {
                    if *introduced {
                        rev.push(0);
                    }
                }
                Kind::Gamma { .. } => {
                    let live = self.live_branches(parent);
                    let i = live.iter().position(|&b| b == cur).expect("live branch");
                    rev.extend(fold_path(i, live.len()).into_iter().rev());
                }
                Kind::Atom(_) => unreachable!(),
            }
            cur = parent;
        }
        rev.reverse();
        Position::from_indices(rev)
    }

    fn is_task(&self, id: usize) -> bool {
        matches!(self.nodes[id].kind, Kind::Delta { .. } | Kind::Branch { .. })
    }

    fn is_descendant(&self, mut id: usize, ancestor: usize) -> bool {
        while let Some(p) = self.nodes[id].parent {
            if p == ancestor {
                return true;
            }
            id = p;
        }
        false
    }

    fn nearest_task_ancestor(&self, id: usize) -> Option<usize> {
        let mut cur = self.nodes[id].parent;
        while let Some(p) = cur {
            if self.is_task(p) {
                return Some(p);
            }
            cur = self.nodes[p].parent;
        }
        None
    }

    /// First junction in pre-order, among rendered nodes, with two live branches.
    fn first_mergeable(&self, id: usize) -> Option<usize> {
        let node = &self.nodes[id];
        match &node.kind {
            Kind::Gamma { .. } => {
                let live = self.live_branches(id);
                if live.len() >= 2 {
                    return Some(id);
                }
                live.into_iter().find_map(|b| self.first_mergeable(b))
            }
            _ => node.children.iter().find_map(|&c| self.first_mergeable(c)),
        }
    }
}

struct Recorder {
    derivation: Derivation,
}

impl Recorder {
    fn push(&mut self, app: RuleApplication, expected: &Formula) -> Result<(), BuildError> {
        let step = self.derivation.len() + 1;
        let result = self
            .derivation
            .push(app)
            .map_err(|reason| BuildError::Kernel { step, reason })?;
        if result != expected {
            return Err(BuildError::Diverged { step });
        }
        Ok(())
    }
}

/// Builds a derivation of `a` from the expansion of its outer Skolemized form over
/// `T_n`. The expansion must be a sentential tautology.
pub fn build_derivation(a: &Formula, n: usize) -> Result<Derivation, BuildError> {
    let (f, bindings) = outer_skolemize_with_bindings(a);
    let champ = champ_fini(n, &f);
    if champ.is_empty() && !a.is_quantifier_free() {
        return Err(BuildError::NoPropertyC { order: n });
    }

    let deltas = crate::polarity::classify_quantifiers(a)
        .into_iter()
        .filter(|o| o.class == QuantifierClass::Delta);
    let skolem_at = deltas
        .zip(&bindings)
        .map(|(o, b)| {
            debug_assert_eq!(o.variable, b.variable);
            (o.position, b.symbol.clone())
        })
        .collect();
    let mut builder = Builder {
        terms: champ.terms(),
        skolem_at,
        skeleton: Skeleton { nodes: Vec::new() },
        delta_terms: Vec::new(),
    };
    builder.grow(a, &mut Vec::new(), Parity::Even, None, &mut Vec::new());
    let Builder {
        mut skeleton,
        delta_terms,
        ..
    } = builder;

    // Pseudo-variables `x$1`, `x$2`, … for the Skolem terms, in pre-order.
    let mut names = NameSupply::new();
    names.reserve_formula(a);
    let mut counters: BTreeMap<String, usize> = BTreeMap::new();
    let mut pseudo: BTreeMap<Term, Symbol> = BTreeMap::new();
    for (id, term) in &delta_terms {
        let Kind::Delta { var, pseudo: slot, .. } = &mut skeleton.nodes[*id].kind else {
            unreachable!()
        };
        let base = String::from(strip_counter(var.name()));
        let k = counters.entry(base.clone()).or_insert(0);
        let name = loop {
            *k += 1;
            let candidate = format!("{base}${k}");
            if !names.is_used(&candidate) {
                break candidate;
            }
        };
        names.reserve(&name);
        *slot = Symbol::variable(&name);
        pseudo.insert(term.clone(), slot.clone());
    }
    for node in &mut skeleton.nodes {
        if let Kind::Branch { var, witness, .. } = &mut node.kind {
            *witness = read(witness, &pseudo).ok_or_else(|| BuildError::Unschedulable { variable: var.clone() })?;
            *var = Symbol::variable(&names.fresh(var.name()));
        }
    }

    let start = skeleton.render_root();
    if is_tautology(&start) != Ok(true) {
        return Err(BuildError::NoPropertyC { order: n });
    }
    let mut rec = Recorder {
        derivation: Derivation::new(start),
    };

    // Introductions: inner before outer, and every γ-branch whose witness mentions a
    // pseudo-variable outside its binder's scope before that binder.
    let tasks: Vec<usize> = (0..skeleton.nodes.len()).filter(|&i| skeleton.is_task(i)).collect();
    let mut successors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut indegree: BTreeMap<usize, usize> = tasks.iter().map(|&t| (t, 0)).collect();
    let mut edge = |from: usize, to: usize, indegree: &mut BTreeMap<usize, usize>| {
        successors.entry(from).or_default().push(to);
        *indegree.get_mut(&to).expect("task") += 1;
    };
    for &t in &tasks {
        if let Some(p) = skeleton.nearest_task_ancestor(t) {
            edge(t, p, &mut indegree);
        }
    }
    for &d in &tasks {
        let Kind::Delta { pseudo: v, .. } = &skeleton.nodes[d].kind else {
            continue;
        };
        for &b in &tasks {
            if let Kind::Branch { witness, .. } = &skeleton.nodes[b].kind {
                if witness.contains_var(v) && !skeleton.is_descendant(b, d) {
                    edge(b, d, &mut indegree);
                }
            }
        }
    }
    let mut ready: BTreeSet<usize> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&t, _)| t).collect();
    let mut done = 0;
    while let Some(t) = ready.pop_first() {
        let position = skeleton.position_of(t);
        let rule = match &mut skeleton.nodes[t].kind {
            Kind::Delta {
                quantifier,
                pseudo,
                introduced,
                ..
            } => {
                *introduced = true;
                Rule::UniversaloidQuantification {
                    quantifier: *quantifier,
                    variable: pseudo.clone(),
                }
            }
            Kind::Branch {
                var,
                witness,
                introduced,
                ..
            } => {
                *introduced = true;
                let (var, witness) = (var.clone(), witness.clone());
                let junction = skeleton.nodes[t].parent.expect("branch has a junction");
                let Kind::Gamma { quantifier, .. } = skeleton.nodes[junction].kind else {
                    unreachable!()
                };
                let rendered = skeleton.render_root();
                let Some(Formula::Quantified(_, _, body)) = rendered.subformula_at(&position) else {
                    unreachable!("introduced branch renders as a quantifier")
                };
                Rule::ExistentialoidQuantification {
                    quantifier,
                    variable: var,
                    witness,
                    body: (**body).clone(),
                }
            }
            _ => unreachable!(),
        };
        rec.push(RuleApplication::new(rule, position), &skeleton.render_root())?;
        done += 1;
        for s in successors.get(&t).into_iter().flatten() {
            let d = indegree.get_mut(s).expect("task");
            *d -= 1;
            if *d == 0 {
                ready.insert(*s);
            }
        }
    }
    if done < tasks.len() {
        let blocked = indegree.iter().find(|(_, &d)| d > 0).map(|(&t, _)| t).expect("blocked task");
        let variable = match &skeleton.nodes[blocked].kind {
            Kind::Delta { pseudo, .. } => pseudo.clone(),
            Kind::Branch { var, .. } => var.clone(),
            _ => unreachable!(),
        };
        return Err(BuildError::Unschedulable { variable });
    }

    // Merge the now alpha-equal branches of every junction, outermost first.
    while let Some(j) = skeleton.first_mergeable(0) {
        let live = skeleton.live_branches(j);
        let mut position = skeleton.position_of(j).indices().to_vec();
        position.extend(vec![0; live.len() - 2]);
        let position = Position::from_indices(position);
        let current = rec.derivation.conclusion();
        let renaming = match current.subformula_at(&position) {
            Some(Formula::Or(h, h2) | Formula::And(h, h2)) => h.variant_map(h2),
            _ => None,
        }
        .ok_or(BuildError::Diverged { step: rec.derivation.len() + 1 })?;
        if let Kind::Branch { live, .. } = &mut skeleton.nodes[live[1]].kind {
            *live = false;
        }
        rec.push(
            RuleApplication::new(Rule::GammaSimplification { renaming }, position),
            &skeleton.render_root(),
        )?;
    }

    // Give every binder its name in `A` back.
    let renaming: Renaming = a
        .variant_map(rec.derivation.conclusion())
        .ok_or(BuildError::Diverged { step: rec.derivation.len() })?;
    if !renaming.is_empty() {
        rec.push(RuleApplication::new(Rule::RenameBound { renaming }, Position::root()), a)?;
    }
    Ok(rec.derivation)
}

fn strip_counter(name: &str) -> &str {
    let end = name.find(['#', '$']).filter(|&i| i > 0).unwrap_or(name.len());
    &name[..end]
}
