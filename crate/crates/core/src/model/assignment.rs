use std::collections::BTreeMap;

use super::alternative::{Alternative, ClassId, Player};
use super::instance::Instance;
use crate::error::{Error, Result};

/// One concrete copy of an activity class. Players sharing a slot form a
/// group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Slot {
    pub class: ClassId,
    pub copy: usize,
}

impl Slot {
    pub fn new(class: ClassId, copy: usize) -> Self {
        Slot { class, copy }
    }
}

/// Maps every player to a slot or to the void activity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    slots: Vec<Option<Slot>>,
}

impl Assignment {
    pub fn all_void(n: usize) -> Self {
        Assignment {
            slots: vec![None; n],
        }
    }

    pub fn from_slots(slots: Vec<Option<Slot>>) -> Self {
        Assignment { slots }
    }

    /// Shorthand for tests and fixtures: `Some(class)` means copy 0.
    pub fn from_classes(classes: &[Option<ClassId>]) -> Self {
        Assignment {
            slots: classes.iter().map(|c| c.map(|c| Slot::new(c, 0))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, i: Player) -> Option<Slot> {
        self.slots[i]
    }

    pub fn set(&mut self, i: Player, slot: Option<Slot>) {
        self.slots[i] = slot;
    }

    pub fn slots(&self) -> &[Option<Slot>] {
        &self.slots
    }

    /// Non-empty groups keyed by slot; members sorted ascending.
    pub fn groups(&self) -> BTreeMap<Slot, Vec<Player>> {
        let mut groups: BTreeMap<Slot, Vec<Player>> = BTreeMap::new();
        for (i, s) in self.slots.iter().enumerate() {
            if let Some(s) = s {
                groups.entry(*s).or_default().push(i);
            }
        }
        groups
    }

    /// Size of the group of every player (1 for void players).
    pub fn group_sizes(&self) -> Vec<usize> {
        let groups = self.groups();
        self.slots
            .iter()
            .map(|s| s.map_or(1, |s| groups[&s].len()))
            .collect()
    }

    /// The alternative every player currently enjoys.
    pub fn alternatives(&self) -> Vec<Alternative> {
        let sizes = self.group_sizes();
        self.slots
            .iter()
            .zip(sizes)
            .map(|(s, k)| match s {
                None => Alternative::Void,
                Some(s) => Alternative::new(s.class, k),
            })
            .collect()
    }

    /// Classes with at least one non-empty group.
    pub fn used_classes(&self) -> Vec<ClassId> {
        let mut used: Vec<_> = self.slots.iter().flatten().map(|s| s.class).collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    /// Checks shape against `inst`: one entry per player, known classes and
    /// copy indices within range.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.slots.len() != inst.n() {
            return Err(Error::InvalidAssignment(format!(
                "assignment covers {} players, instance has {}",
                self.slots.len(),
                inst.n()
            )));
        }
        for (i, s) in self.slots.iter().enumerate() {
            if let Some(s) = s {
                if s.class >= inst.num_classes() {
                    return Err(Error::InvalidAssignment(format!(
                        "player {i} assigned to unknown class #{}",
                        s.class
                    )));
                }
                if s.copy >= inst.copies(s.class) {
                    return Err(Error::InvalidAssignment(format!(
                        "player {i} assigned to copy {} of `{}`, which has {} copies",
                        s.copy,
                        inst.class(s.class).id,
                        inst.copies(s.class)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Relabels copies so that, within each class, groups take copy indices
    /// `0, 1, ...` in the order of their smallest member.
    pub fn canonical(&self) -> Assignment {
        let mut next: BTreeMap<ClassId, usize> = BTreeMap::new();
        let mut relabel: BTreeMap<Slot, usize> = BTreeMap::new();
        let slots = self
            .slots
            .iter()
            .map(|s| {
                s.map(|s| {
                    let copy = *relabel.entry(s).or_insert_with(|| {
                        let c = next.entry(s.class).or_insert(0);
                        *c += 1;
                        *c - 1
                    });
                    Slot::new(s.class, copy)
                })
            })
            .collect();
        Assignment { slots }
    }
}
