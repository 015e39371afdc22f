//! The two textbook instances without stable outcomes.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// Three players on a path whose every individually rational assignment
    /// is strongly blocked.
    EmptyCore,
    /// Two adjacent players: the first wants to be alone, the second wants
    /// to be with the first. No Nash stable outcome.
    Stalker,
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "empty_core" => Ok(Fixture::EmptyCore),
            "stalker" => Ok(Fixture::Stalker),
            _ => Err(Error::UnknownFixture(s.to_string())),
        }
    }
}

pub fn fixture(f: Fixture) -> Instance {
    match f {
        Fixture::EmptyCore => empty_core(),
        Fixture::Stalker => stalker(1),
    }
}

/// Players 0-1-2 on a path, classes `a` and `b`:
///
/// ```text
/// 0: (b,2) > (a,3) > void
/// 1: (a,2) > (b,2) > (a,3) > void
/// 2: (a,3) > (b,1) > (a,2) > void
/// ```
///
/// Note that besides the four assignments usually listed as individually
/// rational, the all-void assignment is individually rational too (and is
/// blocked by `{0,1,2}` with `a`).
pub fn empty_core() -> Instance {
    InstanceBuilder::new(3)
        .class("a", 1)
        .class("b", 1)
        .edge(0, 1)
        .edge(1, 2)
        .rank(0, "b", 2, 2)
        .rank(0, "a", 3, 1)
        .rank(1, "a", 2, 3)
        .rank(1, "b", 2, 2)
        .rank(1, "a", 3, 1)
        .rank(2, "a", 3, 3)
        .rank(2, "b", 1, 2)
        .rank(2, "a", 2, 1)
        .build()
        .expect("fixture is valid")
}

/// Two players joined by an edge and one class `a` with `copies` copies.
/// Player 0 approves only `(a,1)`, player 1 approves only `(a,2)`.
pub fn stalker(copies: usize) -> Instance {
    InstanceBuilder::new(2)
        .class("a", copies)
        .edge(0, 1)
        .rank(0, "a", 1, 1)
        .rank(1, "a", 2, 1)
        .build()
        .expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_topology, TopologyKind};

    #[test]
    fn fixture_shapes() {
        let ex = fixture("empty_core".parse().unwrap());
        assert_eq!(ex.n(), 3);
        assert_eq!(ex.num_classes(), 2);
        assert_eq!(classify_topology(&ex).kind, TopologyKind::Path);

        let st = fixture(Fixture::Stalker);
        assert_eq!(st.n(), 2);
        assert_eq!(st.num_classes(), 1);
        assert!(!st.all_copyable());
        assert!(stalker(2).all_copyable());
        assert!("nope".parse::<Fixture>().is_err());
    }
}
