//! Checks that a generated instance has a stable outcome exactly when the
//! source is a yes-instance.

use serde::Serialize;

use super::gadgets::{generate, witness, Family};
use super::source::{solve_source, ReductionSource, SourceAnswer};
use crate::error::{Error, Result};
use crate::fpt::{self, StarMode};
use crate::oracle::oracle_find_stable_with;
use crate::outcome::{Concept, Method};
use crate::stability::is_stable;

/// Oracle bound used when deciding generated instances.
pub const VERIFY_ORACLE_BOUND: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub family: Family,
    pub players: usize,
    pub answer: SourceAnswer,
    pub source_yes: bool,
    /// Whether a stable outcome exists, when a solver decided it.
    pub stable_exists: Option<bool>,
    pub method: Option<Method>,
    /// Whether the constructed outcome is stable (yes-instances only).
    pub witness_stable: Option<bool>,
}

impl VerifyReport {
    pub fn agrees(&self) -> bool {
        self.stable_exists.is_none_or(|s| s == self.source_yes)
            && self.witness_stable.unwrap_or(true)
    }
}

/// Decides the generated instance with an exact solver and compares with
/// the brute-force answer on the source. Formula gadgets are too large for
/// the oracle, so only the forward direction is checked: a no-instance
/// yields [`Error::Inapplicable`].
pub fn verify_reduction(
    src: &ReductionSource,
    concept: Concept,
    max_oracle_n: usize,
) -> Result<VerifyReport> {
    let gen = generate(src, concept)?;
    let answer = solve_source(src)?;
    let source_yes = answer.is_yes(src);
    let inst = &gen.instance;
    let witness_stable = match witness(src, &gen)? {
        Some(pi) => Some(is_stable(inst, &pi, concept)?),
        None => None,
    };
    if witness_stable.is_some() != source_yes {
        return Err(Error::Internal(
            "witness availability disagrees with the source answer".into(),
        ));
    }
    let (stable_exists, method) = match gen.family {
        Family::NsPathRainbow => (
            Some(fpt::solve_ns_path(inst)?.is_found()),
            Some(Method::Path),
        ),
        Family::NsStarMmm => {
            let star = fpt::solve_ns_star(inst, StarMode::Derandomized)?.is_found();
            let oracle = oracle_find_stable_with(inst, concept, max_oracle_n)?.is_found();
            if star != oracle {
                return Err(Error::Internal(
                    "star solver disagrees with the oracle".into(),
                ));
            }
            (Some(star), Some(Method::Star))
        }
        Family::CorePathRainbow | Family::CoreStarMmm => (
            Some(oracle_find_stable_with(inst, concept, max_oracle_n)?.is_found()),
            Some(Method::Oracle),
        ),
        Family::NsComponents3sat | Family::CoreComponents3sat => {
            if !source_yes {
                return Err(Error::Inapplicable(
                    "unsatisfiable formulas are not checked: the generated instance is too large to decide exactly"
                        .into(),
                ));
            }
            (None, None)
        }
    };
    Ok(VerifyReport {
        family: gen.family,
        players: inst.n(),
        answer,
        source_yes,
        stable_exists,
        method,
        witness_stable,
    })
}
