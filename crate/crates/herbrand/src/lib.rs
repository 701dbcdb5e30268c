//! File formats and corpus for the `herbrand` command-line tool.

pub mod corpus;
pub mod derivation_file;
pub mod report;
pub mod sexp;

pub use derivation_file::{read_derivation, write_derivation, FileError};
