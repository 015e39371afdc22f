//! Stability checking and solving for group activity selection on graphs.
//!
//! Players sit on an undirected communication graph and rank alternatives
//! `(activity, group size)`. An assignment is feasible when every group is
//! connected. The crate provides certifying checkers for individual
//! rationality, Nash stability and core stability, a brute-force oracle,
//! polynomial algorithms for forests with copyable activities, parameterized
//! algorithms for paths, stars and graphs with small components, and
//! generators for the classical hardness gadgets.

pub mod bench;
pub mod error;
pub mod fpt;
pub mod model;
pub mod oracle;
pub mod outcome;
pub mod reductions;
pub mod sampler;
pub mod solve;
pub mod stability;
pub mod tree;

pub use error::{Error, Result};
pub use model::{
    classify_topology, Alternative, Assignment, Coalition, Instance, InstanceBuilder, Slot,
    Topology, TopologyKind,
};
pub use outcome::{Concept, Method, SolveOutcome, Verdict};
