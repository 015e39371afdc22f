//! Instances, preferences, assignments and graph structure.

mod alternative;
mod assignment;
pub mod graph;
mod instance;
mod io;
mod topology;

pub use alternative::{Alternative, ClassId, Player, Preference};
pub use assignment::{Assignment, Slot};
pub use instance::{ActivityClass, Instance, InstanceBuilder, UNLISTED_RANK, VOID_RANK};
pub use io::{AssignmentEntry, AssignmentFile, InstanceFile, PrefEntry};
pub use topology::{classify_topology, path_order, star_center, Topology, TopologyKind};

use crate::error::{Error, Result};

/// A non-empty set of players, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Coalition(Vec<Player>);

impl Coalition {
    pub fn new(mut players: Vec<Player>) -> Result<Self> {
        players.sort_unstable();
        players.dedup();
        if players.is_empty() {
            return Err(Error::InvalidCoalition("coalition is empty".into()));
        }
        Ok(Coalition(players))
    }

    pub fn players(&self) -> &[Player] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: Player) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

/// Whether `s` induces a connected subgraph of the communication graph.
pub fn is_feasible_coalition(inst: &Instance, s: &Coalition) -> Result<bool> {
    if let Some(&bad) = s.players().iter().find(|&&i| i >= inst.n()) {
        return Err(Error::InvalidCoalition(format!(
            "player {bad} outside 0..{}",
            inst.n()
        )));
    }
    Ok(graph::is_connected_set(inst, s.players()))
}
