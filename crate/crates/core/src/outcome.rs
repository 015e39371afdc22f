use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::model::Assignment;

/// Solution concept a solver or checker targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Concept {
    Nash,
    Core,
    #[serde(rename = "ir")]
    IndividualRationality,
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Concept::Nash => "nash",
            Concept::Core => "core",
            Concept::IndividualRationality => "ir",
        })
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nash" | "ns" => Ok(Concept::Nash),
            "core" => Ok(Concept::Core),
            "ir" => Ok(Concept::IndividualRationality),
            other => Err(format!(
                "unknown concept `{other}` (expected nash, core or ir)"
            )),
        }
    }
}

/// Which algorithm produced an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    Path,
    Star,
    Components,
    ForestCopyable,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Path => "path",
            Method::Star => "star",
            Method::Components => "components",
            Method::ForestCopyable => "forest-copyable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Found(Assignment),
    NoneExists,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub method: Method,
    pub elapsed: Duration,
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self.verdict, Verdict::Found(_))
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match &self.verdict {
            Verdict::Found(pi) => Some(pi),
            Verdict::NoneExists => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.verdict {
            Verdict::Found(_) => "FOUND",
            Verdict::NoneExists => "NONE_EXISTS",
        }
    }
}
