use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::alternative::{Alternative, ClassId, Player, Preference};
use crate::error::{Error, Result};

/// Rank of the void alternative. Listed alternatives are compared against it.
pub const VOID_RANK: i64 = 0;

/// Rank of every non-void alternative a player does not list.
pub const UNLISTED_RANK: i64 = -1;

/// A non-void activity together with the number of interchangeable copies
/// available. A class with at least `n` copies is copyable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityClass {
    pub id: String,
    pub copies: usize,
}

/// A validated instance: players on an undirected communication graph with
/// rank-encoded weak orders over `(activity, size)` alternatives.
///
/// Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    classes: Vec<ActivityClass>,
    edges: Vec<(Player, Player)>,
    adj: Vec<Vec<Player>>,
    // ranks[(i * p + class) * n + (size - 1)]
    ranks: Vec<i64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of activity classes (the canonical `A*`, copies not expanded).
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ActivityClass] {
        &self.classes
    }

    pub fn class(&self, c: ClassId) -> &ActivityClass {
        &self.classes[c]
    }

    pub fn class_id(&self, id: &str) -> Option<ClassId> {
        self.classes.iter().position(|c| c.id == id)
    }

    pub fn copies(&self, c: ClassId) -> usize {
        self.classes[c].copies
    }

    pub fn is_copyable(&self, c: ClassId) -> bool {
        self.classes[c].copies >= self.n
    }

    pub fn all_copyable(&self) -> bool {
        (0..self.num_classes()).all(|c| self.is_copyable(c))
    }

    pub fn all_single_copy(&self) -> bool {
        self.classes.iter().all(|c| c.copies == 1)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Player, Player)] {
        &self.edges
    }

    /// Sorted neighbour list of `i`.
    pub fn neighbors(&self, i: Player) -> &[Player] {
        &self.adj[i]
    }

    pub fn has_edge(&self, u: Player, v: Player) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, i: Player) -> usize {
        self.adj[i].len()
    }

    /// Rank of `alt` for player `i`; larger is better.
    pub fn rank(&self, i: Player, alt: Alternative) -> i64 {
        match alt {
            Alternative::Void => VOID_RANK,
            Alternative::Activity { class, size } => self.rank_of(i, class, size),
        }
    }

    /// Rank of `(class, size)`, or `i64::MIN` when no group of that size can
    /// exist (`size == 0` or `size > n`). Joining such a group is never an
    /// available move, so the floor makes every comparison against it hold.
    pub fn rank_of(&self, i: Player, class: ClassId, size: usize) -> i64 {
        if size == 0 || size > self.n {
            return i64::MIN;
        }
        self.ranks[(i * self.classes.len() + class) * self.n + size - 1]
    }

    pub fn prefers(&self, i: Player, x: Alternative, y: Alternative) -> Preference {
        self.rank(i, x).cmp(&self.rank(i, y)).into()
    }

    pub fn strictly_prefers(&self, i: Player, x: Alternative, y: Alternative) -> bool {
        self.rank(i, x) > self.rank(i, y)
    }

    pub fn weakly_prefers(&self, i: Player, x: Alternative, y: Alternative) -> bool {
        self.rank(i, x) >= self.rank(i, y)
    }

    /// `i` approves `alt` iff it is strictly better than staying alone.
    pub fn approves(&self, i: Player, alt: Alternative) -> bool {
        self.rank(i, alt) > VOID_RANK
    }

    /// Every alternative that exists for this instance, void first.
    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> + '_ {
        std::iter::once(Alternative::Void).chain(
            (0..self.num_classes())
                .flat_map(move |c| (1..=self.n).map(move |k| Alternative::new(c, k))),
        )
    }

    /// Explicit rank entries for player `i`: every non-void alternative whose
    /// rank differs from the unlisted default.
    pub fn listed(&self, i: Player) -> Vec<(ClassId, usize, i64)> {
        let mut out = Vec::new();
        for c in 0..self.num_classes() {
            for k in 1..=self.n {
                let r = self.rank_of(i, c, k);
                if r != UNLISTED_RANK {
                    out.push((c, k, r));
                }
            }
        }
        out
    }

    /// Same instance with every class given `copies` copies.
    pub fn with_uniform_copies(&self, copies: usize) -> Result<Instance> {
        if copies == 0 {
            return Err(Error::InvalidInstance("copies must be at least 1".into()));
        }
        let mut out = self.clone();
        for c in &mut out.classes {
            c.copies = copies;
        }
        Ok(out)
    }

    /// Same instance with the copy count of class `c` replaced.
    pub fn with_copies(&self, c: ClassId, copies: usize) -> Result<Instance> {
        if copies == 0 {
            return Err(Error::InvalidInstance("copies must be at least 1".into()));
        }
        let mut out = self.clone();
        out.classes[c].copies = copies;
        Ok(out)
    }
}

/// Collects a raw instance description and validates it into an [`Instance`].
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    n: usize,
    classes: Vec<ActivityClass>,
    edges: Vec<(Player, Player)>,
    entries: Vec<RankEntry>,
}

#[derive(Clone, Debug)]
struct RankEntry {
    player: Player,
    class: String,
    size: usize,
    rank: i64,
}

impl InstanceBuilder {
    pub fn new(n: usize) -> Self {
        InstanceBuilder {
            n,
            ..Default::default()
        }
    }

    pub fn class(mut self, id: impl Into<String>, copies: usize) -> Self {
        self.add_class(id, copies);
        self
    }

    pub fn edge(mut self, u: Player, v: Player) -> Self {
        self.add_edge(u, v);
        self
    }

    pub fn rank(
        mut self,
        player: Player,
        class: impl Into<String>,
        size: usize,
        rank: i64,
    ) -> Self {
        self.add_rank(player, class, size, rank);
        self
    }

    pub fn add_class(&mut self, id: impl Into<String>, copies: usize) -> &mut Self {
        self.classes.push(ActivityClass {
            id: id.into(),
            copies,
        });
        self
    }

    pub fn add_edge(&mut self, u: Player, v: Player) -> &mut Self {
        self.edges.push((u, v));
        self
    }

    pub fn add_rank(
        &mut self,
        player: Player,
        class: impl Into<String>,
        size: usize,
        rank: i64,
    ) -> &mut Self {
        self.entries.push(RankEntry {
            player,
            class: class.into(),
            size,
            rank,
        });
        self
    }

    pub fn build(self) -> Result<Instance> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidInstance(
                "an instance needs at least one player".into(),
            ));
        }

        let mut seen = HashSet::new();
        for c in &self.classes {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate activity id `{}`",
                    c.id
                )));
            }
            if c.copies < 1 {
                return Err(Error::InvalidInstance(format!(
                    "activity `{}` has {} copies, need at least 1",
                    c.id, c.copies
                )));
            }
        }

        let mut edge_set = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop on player {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) references a player outside 0..{n}"
                )));
            }
            edge_set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = edge_set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let p = self.classes.len();
        let mut ranks = vec![UNLISTED_RANK; n * p * n];
        let mut listed = HashSet::new();
        for e in &self.entries {
            if e.player >= n {
                return Err(Error::InvalidInstance(format!(
                    "preference for player {} outside 0..{n}",
                    e.player
                )));
            }
            let class = self
                .classes
                .iter()
                .position(|c| c.id == e.class)
                .ok_or_else(|| {
                    Error::InvalidInstance(format!(
                        "preference names unknown activity `{}`",
                        e.class
                    ))
                })?;
            if e.size == 0 || e.size > n {
                return Err(Error::InvalidInstance(format!(
                    "player {} ranks ({}, {}) but sizes must lie in 1..={n}",
                    e.player, e.class, e.size
                )));
            }
            if !listed.insert((e.player, class, e.size)) {
                return Err(Error::InvalidInstance(format!(
                    "player {} ranks ({}, {}) twice",
                    e.player, e.class, e.size
                )));
            }
            ranks[(e.player * p + class) * n + e.size - 1] = e.rank;
        }

        Ok(Instance {
            n,
            classes: self.classes,
            edges,
            adj,
            ranks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> Instance {
        InstanceBuilder::new(3)
            .class("a", 1)
            .class("b", 1)
            .edge(0, 1)
            .edge(1, 2)
            .rank(0, "b", 2, 2)
            .rank(0, "a", 3, 1)
            .rank(1, "a", 2, 4)
            .rank(1, "b", 2, 3)
            .rank(1, "a", 3, 1)
            .rank(2, "a", 3, 3)
            .rank(2, "b", 1, 2)
            .rank(2, "a", 2, 1)
            .build()
            .unwrap()
    }

    #[test]
    fn builds_example_one() {
        let inst = example_one();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.num_classes(), 2);
        assert_eq!(inst.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn trivial_instance_is_valid() {
        let inst = InstanceBuilder::new(1).build().unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.num_classes(), 0);
        assert!(inst.edges().is_empty());
    }

    #[test]
    fn rejects_self_loop() {
        let err = InstanceBuilder::new(3).edge(1, 1).build().unwrap_err();
        assert!(err.to_string().contains("self-loop"), "{err}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(InstanceBuilder::new(2).edge(0, 2).build().is_err());
        assert!(InstanceBuilder::new(2)
            .class("a", 1)
            .class("a", 2)
            .build()
            .is_err());
        assert!(InstanceBuilder::new(2).class("a", 0).build().is_err());
        assert!(InstanceBuilder::new(2)
            .class("a", 1)
            .rank(0, "a", 3, 1)
            .build()
            .is_err());
        assert!(InstanceBuilder::new(2)
            .class("a", 1)
            .rank(0, "b", 1, 1)
            .build()
            .is_err());
        assert!(InstanceBuilder::new(2)
            .class("a", 1)
            .rank(0, "a", 1, 1)
            .rank(0, "a", 1, 2)
            .build()
            .is_err());
        assert!(InstanceBuilder::new(0).build().is_err());
    }

    #[test]
    fn example_one_preferences() {
        let inst = example_one();
        let (a, b) = (0, 1);
        // player 2 (0-based 1): (a,2) over (b,2)
        assert_eq!(
            inst.prefers(1, Alternative::new(a, 2), Alternative::new(b, 2)),
            Preference::Strict
        );
        assert_eq!(
            inst.prefers(2, Alternative::Void, Alternative::Void),
            Preference::Indifferent
        );
        // (a,2) is unlisted for player 1 and falls below the void alternative
        assert_eq!(
            inst.prefers(0, Alternative::new(a, 2), Alternative::Void),
            Preference::Worse
        );
        assert!(inst.approves(2, Alternative::new(b, 1)));
        assert!(!inst.approves(0, Alternative::new(b, 1)));
    }

    #[test]
    fn copyable_flag_follows_copy_count() {
        let inst = example_one();
        assert!(!inst.all_copyable());
        let copyable = inst.with_uniform_copies(3).unwrap();
        assert!(copyable.all_copyable());
        assert!(copyable.is_copyable(0));
        assert!(!inst.with_copies(0, 2).unwrap().is_copyable(0));
    }

    #[test]
    fn preference_order_is_a_weak_order() {
        let inst = example_one();
        let alts: Vec<_> = inst.alternatives().collect();
        for i in 0..inst.n() {
            for &x in &alts {
                assert_eq!(inst.prefers(i, x, x), Preference::Indifferent);
                for &y in &alts {
                    for &z in &alts {
                        let xy = inst.prefers(i, x, y);
                        let yz = inst.prefers(i, y, z);
                        if xy == Preference::Strict && yz != Preference::Worse {
                            assert_eq!(inst.prefers(i, x, z), Preference::Strict);
                        }
                    }
                }
            }
        }
    }
}
