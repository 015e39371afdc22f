//! Hardness gadgets as instance generators, the textbook fixtures, exact
//! solvers for the source problems, and equivalence checks.

pub mod corpus;
pub mod fixtures;
pub mod gadgets;
pub mod source;
pub mod verify;

pub use gadgets::{generate, witness, Family, Generated};
pub use source::{solve_source, ReductionSource, SourceAnswer};
pub use verify::{verify_reduction, VerifyReport, VERIFY_ORACLE_BOUND};
