//! JSON file formats for instances and assignments. Players are 0-based.

use serde::{Deserialize, Serialize};

use super::alternative::Player;
use super::assignment::{Assignment, Slot};
use super::instance::{ActivityClass, Instance, InstanceBuilder};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrefEntry {
    pub activity: String,
    pub size: usize,
    pub rank: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub players: usize,
    #[serde(default)]
    pub edges: Vec<[Player; 2]>,
    #[serde(default)]
    pub activities: Vec<ActivityClass>,
    #[serde(default)]
    pub prefs: Vec<Vec<PrefEntry>>,
    /// Free-form record of how a generated instance was produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl InstanceFile {
    pub fn build(&self) -> Result<Instance> {
        if self.prefs.len() > self.players {
            return Err(Error::InvalidInstance(format!(
                "{} preference lists for {} players",
                self.prefs.len(),
                self.players
            )));
        }
        let mut b = InstanceBuilder::new(self.players);
        for a in &self.activities {
            b.add_class(a.id.clone(), a.copies);
        }
        for &[u, v] in &self.edges {
            b.add_edge(u, v);
        }
        for (i, list) in self.prefs.iter().enumerate() {
            for e in list {
                b.add_rank(i, e.activity.clone(), e.size, e.rank);
            }
        }
        b.build()
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            players: inst.n(),
            edges: inst.edges().iter().map(|&(u, v)| [u, v]).collect(),
            activities: inst.classes().to_vec(),
            prefs: (0..inst.n())
                .map(|i| {
                    inst.listed(i)
                        .into_iter()
                        .map(|(c, size, rank)| PrefEntry {
                            activity: inst.class(c).id.clone(),
                            size,
                            rank,
                        })
                        .collect()
                })
                .collect(),
            provenance: None,
        }
    }
}

impl Instance {
    pub fn from_json_str(s: &str) -> Result<Instance> {
        let file: InstanceFile = serde_json::from_str(s)?;
        file.build()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentEntry {
    pub player: Player,
    /// `None` is the void activity.
    pub activity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    pub assignment: Vec<AssignmentEntry>,
}

impl AssignmentFile {
    pub fn resolve(&self, inst: &Instance) -> Result<Assignment> {
        let mut slots: Vec<Option<Option<Slot>>> = vec![None; inst.n()];
        for e in &self.assignment {
            if e.player >= inst.n() {
                return Err(Error::InvalidAssignment(format!(
                    "player {} outside 0..{}",
                    e.player,
                    inst.n()
                )));
            }
            let slot = match &e.activity {
                None => None,
                Some(id) => {
                    let class = inst.class_id(id).ok_or_else(|| {
                        Error::InvalidAssignment(format!("unknown activity `{id}`"))
                    })?;
                    Some(Slot::new(class, e.copy.unwrap_or(0)))
                }
            };
            if slots[e.player].replace(slot).is_some() {
                return Err(Error::InvalidAssignment(format!(
                    "player {} listed twice",
                    e.player
                )));
            }
        }
        let slots = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::InvalidAssignment(format!("player {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let pi = Assignment::from_slots(slots);
        pi.validate(inst)?;
        Ok(pi)
    }

    pub fn from_assignment(inst: &Instance, pi: &Assignment) -> Self {
        AssignmentFile {
            assignment: pi
                .slots()
                .iter()
                .enumerate()
                .map(|(player, s)| AssignmentEntry {
                    player,
                    activity: s.map(|s| inst.class(s.class).id.clone()),
                    copy: s.map(|s| s.copy),
                })
                .collect(),
        }
    }
}

impl Assignment {
    pub fn from_json_str(inst: &Instance, s: &str) -> Result<Assignment> {
        let file: AssignmentFile = serde_json::from_str(s)?;
        file.resolve(inst)
    }

    pub fn to_json_string(&self, inst: &Instance) -> String {
        serde_json::to_string_pretty(&AssignmentFile::from_assignment(inst, self))
            .expect("assignment serializes")
    }
}
