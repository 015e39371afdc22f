//! Picks a solver for an instance and a solution concept.

use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fpt::{self, StarMode};
use crate::model::{classify_topology, Assignment, Instance, TopologyKind};
use crate::oracle;
use crate::outcome::{Concept, Method, SolveOutcome, Verdict};
use crate::tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Fixed(Method),
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "oracle" => MethodChoice::Fixed(Method::Oracle),
            "path" => MethodChoice::Fixed(Method::Path),
            "star" => MethodChoice::Fixed(Method::Star),
            "components" => MethodChoice::Fixed(Method::Components),
            "forest-copyable" => MethodChoice::Fixed(Method::ForestCopyable),
            other => {
                return Err(format!(
                    "unknown method `{other}` (expected auto, oracle, path, star, components or forest-copyable)"
                ))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub max_oracle_n: usize,
    pub max_component_size: usize,
    pub star_mode: StarMode,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_oracle_n: oracle::default_oracle_bound(),
            max_component_size: fpt::DEFAULT_COMPONENT_BOUND,
            star_mode: StarMode::Derandomized,
        }
    }
}

/// The method `Auto` resolves to.
pub fn auto_method(inst: &Instance, concept: Concept) -> Method {
    let topo = classify_topology(inst);
    if concept == Concept::IndividualRationality {
        return Method::Oracle;
    }
    if topo.is_forest && inst.all_copyable() && inst.num_classes() > 0 {
        return Method::ForestCopyable;
    }
    if !inst.all_single_copy() {
        return Method::Oracle;
    }
    match (concept, topo.kind) {
        (Concept::Nash, TopologyKind::Path) => Method::Path,
        (Concept::Nash, TopologyKind::Star) => Method::Star,
        (_, TopologyKind::SmallComponents { .. }) => Method::Components,
        _ => Method::Oracle,
    }
}

pub fn solve(
    inst: &Instance,
    concept: Concept,
    choice: MethodChoice,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    let method = match choice {
        MethodChoice::Auto => auto_method(inst, concept),
        MethodChoice::Fixed(m) => m,
    };
    if concept == Concept::IndividualRationality {
        // staying alone is always individually rational
        let start = Instant::now();
        if method != Method::Oracle {
            return Err(Error::Inapplicable(format!(
                "method {method} does not target individual rationality"
            )));
        }
        return Ok(SolveOutcome {
            verdict: Verdict::Found(Assignment::all_void(inst.n())),
            method,
            elapsed: start.elapsed(),
        });
    }
    let wrong_concept = || {
        Err(Error::Inapplicable(format!(
            "method {method} does not decide {concept} stability"
        )))
    };
    match (method, concept) {
        (Method::Oracle, _) => oracle::oracle_find_stable_with(inst, concept, opts.max_oracle_n),
        (Method::Path, Concept::Nash) => fpt::solve_ns_path(inst),
        (Method::Star, Concept::Nash) => fpt::solve_ns_star(inst, opts.star_mode),
        (Method::Components, Concept::Nash) => {
            fpt::solve_ns_components(inst, opts.max_component_size)
        }
        (Method::Components, Concept::Core) => {
            fpt::solve_core_components(inst, opts.max_component_size)
        }
        (Method::ForestCopyable, Concept::Nash) => tree::solve_ns_copyable_forest(inst),
        (Method::ForestCopyable, Concept::Core) => tree::solve_core_copyable_forest(inst),
        _ => wrong_concept(),
    }
}
