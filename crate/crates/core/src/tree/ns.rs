//! Nash stability on forests with copyable activities.
//!
//! Every tree is rooted at its smallest vertex. For a vertex `i` and an
//! alternative `x = (a,k)` the table entry `f_i[x][t]` says: the subtree of
//! `i` can be partitioned into connected groups so that the group of `i` has
//! `t` members inside the subtree, is destined to become `x`, and every
//! group fully inside the subtree is sealed (nobody in it wants to leave or
//! to cross into a neighbouring group). Children are merged one at a time,
//! either fusing with `i`'s group or closing their own group behind a
//! border that neither side wants to cross.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{graph, Alternative, Assignment, ClassId, Instance, Player, Slot};
use crate::outcome::{Method, SolveOutcome, Verdict};
use crate::stability;

use super::{require_copyable_forest, RootedTree};

// Alternatives of one component, indexed 0 = void, then (a, k) for
// k in 1..=m.
struct Alts {
    p: usize,
    m: usize,
}

impl Alts {
    fn len(&self) -> usize {
        1 + self.p * self.m
    }

    fn get(&self, x: usize) -> Alternative {
        if x == 0 {
            Alternative::Void
        } else {
            Alternative::new((x - 1) / self.m, (x - 1) % self.m + 1)
        }
    }

    fn size(&self, x: usize) -> usize {
        if x == 0 {
            1
        } else {
            (x - 1) % self.m + 1
        }
    }
}

// Table for one vertex after merging some children: bits[x * (m+1) + t].
#[derive(Clone)]
struct Table {
    bits: Vec<bool>,
    stride: usize,
}

impl Table {
    fn new(alts: &Alts) -> Self {
        Table {
            bits: vec![false; alts.len() * (alts.m + 1)],
            stride: alts.m + 1,
        }
    }

    fn get(&self, x: usize, t: usize) -> bool {
        self.bits[x * self.stride + t]
    }

    fn set(&mut self, x: usize, t: usize) {
        self.bits[x * self.stride + t] = true;
    }
}

struct Dp<'a> {
    inst: &'a Instance,
    alts: Alts,
    tree: RootedTree,
    // history[v][j]: table of v after merging its first j children
    history: Vec<Vec<Table>>,
}

impl<'a> Dp<'a> {
    fn rank(&self, i: Player, x: usize) -> i64 {
        self.inst.rank(i, self.alts.get(x))
    }

    // Rank of joining the group of `x` once it has grown by one.
    fn rank_grown(&self, i: Player, x: usize) -> i64 {
        match self.alts.get(x) {
            Alternative::Void => i64::MIN,
            Alternative::Activity { class, size } => self.inst.rank_of(i, class, size + 1),
        }
    }

    // `i` in a group of `x` and child `j` in a sealed group of `y`: neither
    // wants to join the other.
    fn border_ok(&self, i: Player, x: usize, j: Player, y: usize) -> bool {
        self.rank(i, x) >= self.rank_grown(i, y) && self.rank(j, y) >= self.rank_grown(j, x)
    }

    fn final_table(&self, v: Player) -> &Table {
        self.history[v]
            .last()
            .expect("history starts with the initial table")
    }

    fn sealed_witness(&self, i: Player, x: usize, j: Player) -> Option<usize> {
        let fj = self.final_table(j);
        (0..self.alts.len()).find(|&y| fj.get(y, self.alts.size(y)) && self.border_ok(i, x, j, y))
    }

    fn run(&mut self) {
        let n = self.inst.n();
        let best_single: Vec<i64> = (0..n)
            .map(|i| {
                (0..self.inst.num_classes())
                    .map(|c| self.inst.rank_of(i, c, 1))
                    .fold(0, i64::max)
            })
            .collect();
        let order: Vec<Player> = self.tree.order.iter().rev().copied().collect();
        for v in order {
            let mut init = Table::new(&self.alts);
            for x in 0..self.alts.len() {
                if self.rank(v, x) >= best_single[v] {
                    init.set(x, 1);
                }
            }
            let mut hist = vec![init];
            for &c in &self.tree.children[v] {
                let prev = hist.last().unwrap();
                let fc = self.final_table(c);
                let mut next = Table::new(&self.alts);
                for x in 0..self.alts.len() {
                    let k = self.alts.size(x);
                    let sealed = self.sealed_witness(v, x, c).is_some();
                    for t in 1..=k {
                        let fused = (1..t).any(|s| prev.get(x, s) && fc.get(x, t - s));
                        if fused || (sealed && prev.get(x, t)) {
                            next.set(x, t);
                        }
                    }
                }
                hist.push(next);
            }
            self.history[v] = hist;
        }
    }

    // Reconstructs groups below `v`, whose group is `x` with `t` members in
    // the subtree. Appends `v`'s group members to `group` and closed groups
    // to `closed`.
    fn trace(
        &self,
        v: Player,
        x: usize,
        mut t: usize,
        group: &mut Vec<Player>,
        closed: &mut Vec<(usize, Vec<Player>)>,
    ) {
        group.push(v);
        for idx in (0..self.tree.children[v].len()).rev() {
            let c = self.tree.children[v][idx];
            let prev = &self.history[v][idx];
            if prev.get(x, t) {
                if let Some(y) = self.sealed_witness(v, x, c) {
                    let mut sub = Vec::new();
                    self.trace(c, y, self.alts.size(y), &mut sub, closed);
                    closed.push((y, sub));
                    continue;
                }
            }
            let fc = self.final_table(c);
            let s = (1..t)
                .find(|&s| prev.get(x, s) && fc.get(x, t - s))
                .expect("table entry has a derivation");
            self.trace(c, x, t - s, group, closed);
            t = s;
        }
        debug_assert_eq!(t, 1);
    }
}

/// Decides Nash stability for a forest whose classes are all copyable and
/// returns a stable assignment when one exists.
pub fn solve_ns_copyable_forest(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    require_copyable_forest(inst)?;
    let mut slots: Vec<Option<Slot>> = vec![None; inst.n()];
    let mut next_copy: Vec<usize> = vec![0; inst.num_classes()];

    for comp in graph::components(inst) {
        let alts = Alts {
            p: inst.num_classes(),
            m: comp.len(),
        };
        let tree = RootedTree::new(inst, &comp);
        let root = tree.root;
        let mut dp = Dp {
            inst,
            alts,
            tree,
            history: vec![Vec::new(); inst.n()],
        };
        dp.run();
        let fr = dp.final_table(root);
        let Some(x) = (0..dp.alts.len()).find(|&x| fr.get(x, dp.alts.size(x))) else {
            return Ok(SolveOutcome {
                verdict: Verdict::NoneExists,
                method: Method::ForestCopyable,
                elapsed: start.elapsed(),
            });
        };
        let mut group = Vec::new();
        let mut closed = Vec::new();
        dp.trace(root, x, dp.alts.size(x), &mut group, &mut closed);
        closed.push((x, group));
        for (y, members) in closed {
            debug_assert_eq!(members.len(), dp.alts.size(y));
            let slot = dp.alts.get(y).class().map(|c: ClassId| {
                let s = Slot::new(c, next_copy[c]);
                next_copy[c] += 1;
                s
            });
            for m in members {
                slots[m] = slot;
            }
        }
    }

    let pi = Assignment::from_slots(slots);
    if !stability::is_nash_stable(inst, &pi)? {
        return Err(Error::Internal(
            "forest NS dynamic program produced an unstable assignment".into(),
        ));
    }
    Ok(SolveOutcome {
        verdict: Verdict::Found(pi),
        method: Method::ForestCopyable,
        elapsed: start.elapsed(),
    })
}
