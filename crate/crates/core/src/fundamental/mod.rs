//! Property C, the semi-decision loop, and the two directions of the Fundamental
//! Theorem: a derivation built from a successful Property C check, and an order
//! bound read off a derivation.

mod build;

pub use build::{build_derivation, BuildError};

use crate::calculus::{check_with, CheckOptions, Derivation, Rule, RuleError, Verdict};
use crate::sentential::{abstract_atoms, is_tautology};
use crate::skolem::outer_skolemize;
use crate::syntax::Formula;
use crate::universe::{champ_fini_bounded, expand, expansion_atom_count, height, ChampFini, UniverseError};
use alloc::vec::Vec;
use core::fmt;

/// Default limit on the atom occurrences of one expansion.
pub const DEFAULT_ATOM_BUDGET: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCReport {
    pub formula: Formula,
    pub order: usize,
    /// The outer Skolemized form `F`.
    pub skolemized: Formula,
    pub champ: ChampFini,
    /// `F^{T_n(F)}`; `None` at order 1 when `F` still has quantifiers.
    pub expansion: Option<Formula>,
    pub verdict: bool,
    /// Distinct atoms of the expansion.
    pub atom_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FundamentalError {
    /// The expansion at `order` would have more than `budget` atom occurrences.
    AtomBudgetExceeded { order: usize, budget: usize },
    Build(BuildError),
}

impl fmt::Display for FundamentalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FundamentalError::AtomBudgetExceeded { order, budget } => {
                write!(f, "expansion at order {order} exceeds the atom budget of {budget}")
            }
            FundamentalError::Build(e) => write!(f, "derivation builder failed: {e}"),
        }
    }
}

impl core::error::Error for FundamentalError {}

impl From<BuildError> for FundamentalError {
    fn from(e: BuildError) -> Self {
        FundamentalError::Build(e)
    }
}

/// Decides Property C of order `n` without a resource limit.
pub fn check_property_c(a: &Formula, n: usize) -> PropertyCReport {
    check_property_c_with_budget(a, n, usize::MAX).expect("unbounded check")
}

pub fn check_property_c_with_budget(a: &Formula, n: usize, budget: usize) -> Result<PropertyCReport, FundamentalError> {
    assert!(n >= 1, "order must be positive");
    let f = outer_skolemize(a);
    let over = || FundamentalError::AtomBudgetExceeded { order: n, budget };
    let champ = champ_fini_bounded(n, &f, budget).map_err(|_| over())?;
    let width = champ.len();
    if expansion_atom_count(&f, width).is_none_or(|c| c > budget) {
        return Err(over());
    }
    let expansion = match expand(&f, champ.terms()) {
        Ok(e) => Some(e),
        Err(UniverseError::EmptyTermSet) => None,
        Err(UniverseError::TooManyTerms { .. }) => return Err(over()),
    };
    let (verdict, atom_count) = match &expansion {
        Some(e) => {
            let (_, table) = abstract_atoms(e).expect("expansions are quantifier-free");
            (is_tautology(e) == Ok(true), table.len())
        }
        None => (false, 0),
    };
    Ok(PropertyCReport {
        formula: a.clone(),
        order: n,
        skolemized: f,
        champ,
        expansion,
        verdict,
        atom_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveOutcome {
    /// `order` is the least order with Property C; `derivation` is kernel-checked.
    Found {
        order: usize,
        derivation: Derivation,
        reports: Vec<PropertyCReport>,
    },
    ExhaustedBudget {
        max_order: usize,
        reports: Vec<PropertyCReport>,
    },
}

pub fn prove(a: &Formula, max_order: usize) -> Result<ProveOutcome, FundamentalError> {
    prove_with_budget(a, max_order, DEFAULT_ATOM_BUDGET)
}

/// Tries orders `1, 2, …, max_order` in turn.
pub fn prove_with_budget(a: &Formula, max_order: usize, budget: usize) -> Result<ProveOutcome, FundamentalError> {
    assert!(max_order >= 1, "max_order must be positive");
    let mut reports = Vec::new();
    for n in 1..=max_order {
        let report = check_property_c_with_budget(a, n, budget)?;
        let found = report.verdict;
        reports.push(report);
        if found {
            let derivation = build_derivation(a, n)?;
            let strict = CheckOptions {
                require_tautological_start: true,
                ..CheckOptions::default()
            };
            if let Verdict::Rejected { step, reason } = check_with(&derivation, &strict) {
                return Err(BuildError::Kernel { step, reason }.into());
            }
            return Ok(ProveOutcome::Found {
                order: n,
                derivation,
                reports,
            });
        }
    }
    Ok(ProveOutcome::ExhaustedBudget { max_order, reports })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundError {
    /// Rules of passage and the shallow rules are outside the generalized calculus.
    ForeignRule { step: usize, rule: &'static str },
    Rejected { step: usize, reason: RuleError },
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::ForeignRule { step, rule } => {
                write!(f, "step {step} uses `{rule}`, which has no order bound")
            }
            BoundError::Rejected { step, reason } => write!(f, "derivation rejected at step {step}: {reason}"),
        }
    }
}

impl core::error::Error for BoundError {}

/// `1 + Σ |t_i|` over the witnesses of all existentialoid quantification steps.
/// The derivation must check with a tautological start.
pub fn lemma4_bound(d: &Derivation) -> Result<usize, BoundError> {
    for (i, step) in d.steps.iter().enumerate() {
        let rule = &step.application.rule;
        if matches!(
            rule,
            Rule::Passage { .. } | Rule::ShallowGammaQuantification { .. } | Rule::ShallowDeltaQuantification { .. }
        ) {
            return Err(BoundError::ForeignRule {
                step: i + 1,
                rule: rule.name(),
            });
        }
    }
    let strict = CheckOptions {
        require_tautological_start: true,
        ..CheckOptions::default()
    };
    if let Verdict::Rejected { step, reason } = check_with(d, &strict) {
        return Err(BoundError::Rejected { step, reason });
    }
    Ok(1 + d
        .steps
        .iter()
        .filter_map(|s| match &s.application.rule {
            Rule::ExistentialoidQuantification { witness, .. } => Some(height(witness)),
            _ => None,
        })
        .sum::<usize>())
}
