//! Parameterized algorithms for single-copy instances: paths, stars and
//! graphs with small connected components.

mod components;
pub mod hash_family;
mod path;
mod star;

pub use components::{solve_core_components, solve_ns_components, DEFAULT_COMPONENT_BOUND};
pub use path::solve_ns_path;
pub use star::{randomized_trials, solve_ns_star, StarMode, DEFAULT_DELTA};
