//! Linear derivations in Herbrand's modus-ponens-free calculus and the kernel that
//! checks them.
//!
//! Derivations run in deduction direction: the first formula is the premise
//! (normally a sentential tautology) and every step produces its conclusion from the
//! previous formula. The checker recomputes every conclusion from the recorded rule
//! application and never trusts the stored result beyond alpha-equivalence.

mod passage;

pub use passage::{
    apply_passage, applicable_passages, is_prenex, normalize_passage, unfold_conjunctions, Direction,
};

use crate::polarity::{class_of, in_quantifier_scope, polarity_at, Parity, QuantifierClass};
use crate::sentential::is_tautology;
use crate::syntax::{Formula, FormulaError, Position, Quantifier, Substitution, Symbol, Term};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

/// Bound-variable renaming, old name to new name.
pub type Renaming = BTreeMap<Symbol, Symbol>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `A[H{x↦t}]` to `A[Qx.H]` with `Qx.` existentialoid and accessible.
    ExistentialoidQuantification {
        quantifier: Quantifier,
        variable: Symbol,
        witness: Term,
        body: Formula,
    },
    /// `A[H]` to `A[Qy.H]` with `Qy.` universaloid and accessible, `y` not free in `A[…]`.
    UniversaloidQuantification { quantifier: Quantifier, variable: Symbol },
    /// `A[H ∘ H']` to `A[H]`; `renaming` maps the binders of `H'` onto those of `H`.
    Simplification { renaming: Renaming },
    /// Simplification where `H` is an existentialoid quantification.
    GammaSimplification { renaming: Renaming },
    ShallowGammaQuantification {
        quantifier: Quantifier,
        variable: Symbol,
        witness: Term,
        body: Formula,
    },
    ShallowDeltaQuantification { quantifier: Quantifier, variable: Symbol },
    /// Rule of passage `index` (1 to 6) in the given direction.
    Passage { index: u8, direction: Direction },
    RenameBound { renaming: Renaming },
}

impl Rule {
    /// Stable external name, used by the derivation file format.
    pub fn name(&self) -> &'static str {
        match self {
            Rule::ExistentialoidQuantification { .. } => "existentialoid-quantification",
            Rule::UniversaloidQuantification { .. } => "universaloid-quantification",
            Rule::Simplification { .. } => "simplification",
            Rule::GammaSimplification { .. } => "gamma-simplification",
            Rule::ShallowGammaQuantification { .. } => "shallow-gamma-quantification",
            Rule::ShallowDeltaQuantification { .. } => "shallow-delta-quantification",
            Rule::Passage {
                direction: Direction::Prenex,
                ..
            } => "passage-lr",
            Rule::Passage {
                direction: Direction::Antiprenex,
                ..
            } => "passage-rl",
            Rule::RenameBound { .. } => "rename-bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: Rule,
    /// The hole of the context `A[…]`.
    pub position: Position,
}

impl RuleApplication {
    pub fn new(rule: Rule, position: Position) -> Self {
        RuleApplication { rule, position }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub application: RuleApplication,
    pub result: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Formula,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn new(start: Formula) -> Self {
        Derivation {
            start,
            steps: Vec::new(),
        }
    }

    /// The last formula of the derivation.
    pub fn conclusion(&self) -> &Formula {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies `app` to the current conclusion and appends the step.
    pub fn push(&mut self, app: RuleApplication) -> Result<&Formula, RuleError> {
        let result = apply(self.conclusion(), &app)?;
        self.steps.push(Step {
            application: app,
            result,
        });
        Ok(self.conclusion())
    }

    /// The formulas of the derivation, start first.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        core::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }
}

/// Why a rule application or derivation was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleError {
    UnresolvablePosition(Position),
    NotAVariable(Symbol),
    NotExistentialoid,
    NotUniversaloid,
    NotAccessible,
    /// A free variable of the witness is bound by a quantifier in `H`.
    CaptureInBody { variable: Symbol },
    /// The premise subformula is not `H{x↦t}` (or not `H`).
    PremiseMismatch,
    /// The introduced variable occurs free in the context.
    Eigenvariable { variable: Symbol },
    /// `∨` required at even polarity, `∧` at odd.
    WrongConnective,
    NotAVariant,
    PatternMismatch,
    /// The quantified variable occurs free in the side formula of a rule of passage.
    FreeInSide { variable: Symbol },
    NotRectified { variable: Symbol },
    NotRoot,
    ConjunctionForbidden,
    BadRenaming,
    /// The stored result is not alpha-equal to the recomputed one.
    ResultMismatch,
    StartNotTautology,
}

impl RuleError {
    /// Machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            RuleError::UnresolvablePosition(_) => "unresolvable-position",
            RuleError::NotAVariable(_) => "not-a-variable",
            RuleError::NotExistentialoid => "not-existentialoid",
            RuleError::NotUniversaloid => "not-universaloid",
            RuleError::NotAccessible => "not-accessible",
            RuleError::CaptureInBody { .. } => "capture-in-body",
            RuleError::PremiseMismatch => "premise-mismatch",
            RuleError::Eigenvariable { .. } => "eigenvariable",
            RuleError::WrongConnective => "wrong-connective",
            RuleError::NotAVariant => "not-a-variant",
            RuleError::PatternMismatch => "pattern-mismatch",
            RuleError::FreeInSide { .. } => "free-in-side",
            RuleError::NotRectified { .. } => "not-rectified",
            RuleError::NotRoot => "not-root",
            RuleError::ConjunctionForbidden => "conjunction-forbidden",
            RuleError::BadRenaming => "bad-renaming",
            RuleError::ResultMismatch => "result-mismatch",
            RuleError::StartNotTautology => "start-not-tautology",
        }
    }
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())?;
        match self {
            RuleError::UnresolvablePosition(p) => write!(f, ": no subformula at {p}"),
            RuleError::NotAVariable(s) => write!(f, ": `{s}` is not a variable"),
            RuleError::CaptureInBody { variable } => {
                write!(f, ": witness variable `{variable}` is bound in the body")
            }
            RuleError::Eigenvariable { variable } => {
                write!(f, ": `{variable}` occurs free in the context")
            }
            RuleError::FreeInSide { variable } => {
                write!(f, ": `{variable}` occurs free in the side formula")
            }
            RuleError::NotRectified { variable } => {
                write!(f, ": `{variable}` would be bound twice or both free and bound")
            }
            _ => Ok(()),
        }
    }
}

impl core::error::Error for RuleError {}

impl From<FormulaError> for RuleError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::UnresolvablePosition(p) => RuleError::UnresolvablePosition(p),
            FormulaError::NotRectified { variable } => RuleError::NotRectified { variable },
            FormulaError::Capture { binder, .. } => RuleError::CaptureInBody { variable: binder },
        }
    }
}

fn subformula<'a>(a: &'a Formula, p: &Position) -> Result<&'a Formula, RuleError> {
    a.subformula_at(p)
        .ok_or_else(|| RuleError::UnresolvablePosition(p.clone()))
}

fn require_variable(v: &Symbol) -> Result<(), RuleError> {
    if v.is_variable() {
        Ok(())
    } else {
        Err(RuleError::NotAVariable(v.clone()))
    }
}

/// `H` obtained by abstracting every occurrence of `t` in `sub` to `x`.
pub fn abstract_witness(sub: &Formula, t: &Term, x: &Symbol) -> Formula {
    let xv = Term::from_var(x.clone());
    sub.map_terms(&mut |s| s.replace_subterm(t, &xv))
}

/// Generalized rule of existentialoid quantification. Without an explicit `body`,
/// every occurrence of `witness` in the premise subformula is abstracted.
pub fn apply_existentialoid_quantification(
    premise: &Formula,
    p: &Position,
    quantifier: Quantifier,
    variable: &Symbol,
    witness: &Term,
    body: Option<&Formula>,
) -> Result<Formula, RuleError> {
    let sub = subformula(premise, p)?;
    require_variable(variable)?;
    if class_of(quantifier, polarity_at(premise, p)?) != QuantifierClass::Gamma {
        return Err(RuleError::NotExistentialoid);
    }
    if in_quantifier_scope(premise, p) {
        return Err(RuleError::NotAccessible);
    }
    let abstracted;
    let body = match body {
        Some(b) => b,
        None => {
            abstracted = abstract_witness(sub, witness, variable);
            &abstracted
        }
    };
    let bound = body.bound_variables();
    if let Some(v) = witness.variables().into_iter().find(|v| bound.contains(v)) {
        return Err(RuleError::CaptureInBody { variable: v });
    }
    let instance = body.substitute(&Substitution::single(variable.clone(), witness.clone()))?;
    if !instance.alpha_equal(sub) {
        return Err(RuleError::PremiseMismatch);
    }
    Ok(premise.replace_at(p, Formula::quantified(quantifier, variable.clone(), body.clone()))?)
}

/// Generalized rule of universaloid quantification.
pub fn apply_universaloid_quantification(
    premise: &Formula,
    p: &Position,
    quantifier: Quantifier,
    variable: &Symbol,
) -> Result<Formula, RuleError> {
    let sub = subformula(premise, p)?;
    require_variable(variable)?;
    if class_of(quantifier, polarity_at(premise, p)?) != QuantifierClass::Delta {
        return Err(RuleError::NotUniversaloid);
    }
    if in_quantifier_scope(premise, p) {
        return Err(RuleError::NotAccessible);
    }
    if context_has_free(premise, p, variable)? {
        return Err(RuleError::Eigenvariable {
            variable: variable.clone(),
        });
    }
    Ok(premise.replace_at(p, Formula::quantified(quantifier, variable.clone(), sub.clone()))?)
}

/// Whether `v` occurs free in the context `A[…]` around `p`.
fn context_has_free(a: &Formula, p: &Position, v: &Symbol) -> Result<bool, RuleError> {
    let hole = Formula::prop("[]");
    Ok(a.replace_at_unchecked(p, hole)?.has_free_variable(v))
}

/// Generalized rule of simplification; with `gamma` set, the generalized rule of
/// γ-simplification.
pub fn apply_simplification(
    premise: &Formula,
    p: &Position,
    renaming: &Renaming,
    gamma: bool,
) -> Result<Formula, RuleError> {
    let sub = subformula(premise, p)?;
    let parity = polarity_at(premise, p)?;
    let (h, h_prime) = match (sub, parity) {
        (Formula::Or(h, h2), Parity::Even) | (Formula::And(h, h2), Parity::Odd) => (h, h2),
        _ => return Err(RuleError::WrongConnective),
    };
    if renaming.values().any(|v| !v.is_variable()) || h_prime.rename_bound(renaming) != **h {
        return Err(RuleError::NotAVariant);
    }
    if gamma {
        match &**h {
            Formula::Quantified(q, _, _) if class_of(*q, parity) == QuantifierClass::Gamma => {}
            _ => return Err(RuleError::NotExistentialoid),
        }
    }
    Ok(premise.replace_at(p, (**h).clone())?)
}

/// Renames bound variables inside the subformula at `p`.
pub fn apply_rename_bound(premise: &Formula, p: &Position, renaming: &Renaming) -> Result<Formula, RuleError> {
    let sub = subformula(premise, p)?;
    let binders = sub.bound_variables();
    if renaming
        .iter()
        .any(|(old, new)| !new.is_variable() || !binders.contains(old))
    {
        return Err(RuleError::BadRenaming);
    }
    let result = premise.replace_at(p, sub.rename_bound(renaming))?;
    if !result.alpha_equal(premise) {
        return Err(RuleError::BadRenaming);
    }
    Ok(result)
}

/// Applies one rule application to `premise`, validating all side conditions.
pub fn apply(premise: &Formula, app: &RuleApplication) -> Result<Formula, RuleError> {
    let p = &app.position;
    match &app.rule {
        Rule::ExistentialoidQuantification {
            quantifier,
            variable,
            witness,
            body,
        } => apply_existentialoid_quantification(premise, p, *quantifier, variable, witness, Some(body)),
        Rule::UniversaloidQuantification { quantifier, variable } => {
            apply_universaloid_quantification(premise, p, *quantifier, variable)
        }
        Rule::Simplification { renaming } => apply_simplification(premise, p, renaming, false),
        Rule::GammaSimplification { renaming } => apply_simplification(premise, p, renaming, true),
        Rule::ShallowGammaQuantification {
            quantifier,
            variable,
            witness,
            body,
        } => {
            if !p.is_root() {
                return Err(RuleError::NotRoot);
            }
            apply_existentialoid_quantification(premise, p, *quantifier, variable, witness, Some(body))
        }
        Rule::ShallowDeltaQuantification { quantifier, variable } => {
            if !p.is_root() {
                return Err(RuleError::NotRoot);
            }
            apply_universaloid_quantification(premise, p, *quantifier, variable)
        }
        Rule::Passage { index, direction } => apply_passage(premise, p, *index, *direction),
        Rule::RenameBound { renaming } => apply_rename_bound(premise, p, renaming),
    }
}

/// Shallow γ-quantification: introduces `Qx.` at the root, abstracting every
/// occurrence of `witness` unless `body` is given.
pub fn apply_shallow_gamma(
    premise: &Formula,
    quantifier: Quantifier,
    variable: &Symbol,
    witness: &Term,
    body: Option<&Formula>,
) -> Result<Formula, RuleError> {
    apply_existentialoid_quantification(premise, &Position::root(), quantifier, variable, witness, body)
}

pub fn apply_shallow_delta(premise: &Formula, quantifier: Quantifier, variable: &Symbol) -> Result<Formula, RuleError> {
    apply_universaloid_quantification(premise, &Position::root(), quantifier, variable)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Reject derivations whose first formula is not a quantifier-free sentential tautology.
    pub require_tautological_start: bool,
    /// Historic mode: reject any formula containing `∧`.
    pub forbid_conjunction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `step` is 1-based; 0 refers to the start formula.
    Rejected { step: usize, reason: RuleError },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

pub fn check(d: &Derivation) -> Verdict {
    check_with(d, &CheckOptions::default())
}

pub fn check_with(d: &Derivation, opts: &CheckOptions) -> Verdict {
    let reject = |step, reason| Verdict::Rejected { step, reason };
    let admissible = |f: &Formula| -> Result<(), RuleError> {
        f.check_rectified()?;
        if opts.forbid_conjunction && f.contains_conjunction() {
            return Err(RuleError::ConjunctionForbidden);
        }
        Ok(())
    };
    if let Err(e) = admissible(&d.start) {
        return reject(0, e);
    }
    if opts.require_tautological_start && is_tautology(&d.start) != Ok(true) {
        return reject(0, RuleError::StartNotTautology);
    }
    let mut current = &d.start;
    for (i, step) in d.steps.iter().enumerate() {
        let recomputed = match apply(current, &step.application) {
            Ok(f) => f,
            Err(e) => return reject(i + 1, e),
        };
        if !recomputed.alpha_equal(&step.result) {
            return reject(i + 1, RuleError::ResultMismatch);
        }
        if let Err(e) = admissible(&step.result) {
            return reject(i + 1, e);
        }
        current = &step.result;
    }
    Verdict::Accepted
}
