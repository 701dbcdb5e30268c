//! Herbrand's Fundamental Theorem, constructively.
//!
//! Property C of order `n` is decided by expanding the outer Skolemized form of a
//! formula over the champ fini of order `n` and testing the expansion for sentential
//! validity. A successful check is turned into a linear derivation in Herbrand's
//! modus-ponens-free calculus, which an independent kernel re-checks; a checked
//! derivation yields an order bound in turn.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod fundamental;
pub mod polarity;
pub mod sentential;
pub mod skolem;
pub mod syntax;
pub mod universe;

pub use calculus::{check, CheckOptions, Derivation, Rule, RuleApplication, RuleError, Step, Verdict};
pub use fundamental::{
    build_derivation, check_property_c, lemma4_bound, prove, ProveOutcome, PropertyCReport,
};
pub use syntax::{parse, print, Formula, Position, Quantifier, Substitution, Symbol, Term};
