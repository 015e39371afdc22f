//! Core stable outcomes on forests with copyable activities.
//!
//! Bottom-up, every vertex `v` gets a guarantee `u[v]`: the best rank it can
//! secure as the top member of a group inside its own subtree, given that
//! every other member `w` must reach at least `u[w]`. Top-down, the root
//! forms the group realizing its guarantee and the subtrees hanging off that
//! group repeat the process. A coalition that blocks the result would have a
//! top vertex whose guarantee it beats, which the bottom-up pass rules out.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{graph, Alternative, Assignment, Instance, Player, Slot};
use crate::outcome::{Method, SolveOutcome, Verdict};
use crate::stability;

use super::{require_copyable_forest, RootedTree};

struct Guarantees<'a> {
    inst: &'a Instance,
    tree: RootedTree,
    u: Vec<i64>,
    choice: Vec<Alternative>,
}

impl Guarantees<'_> {
    // Members of the subtree of `top` reachable from `top` through players
    // `w` with rank(w, alt) >= u[w], in BFS order.
    fn reach(&self, top: Player, alt: Alternative) -> Vec<Player> {
        let mut out = vec![top];
        let mut i = 0;
        while i < out.len() {
            for &c in &self.tree.children[out[i]] {
                if self.inst.rank(c, alt) >= self.u[c] {
                    out.push(c);
                }
            }
            i += 1;
        }
        out
    }

    fn compute(&mut self) {
        let order: Vec<Player> = self.tree.order.iter().rev().copied().collect();
        for v in order {
            let subtree = self.tree.subtree(v).len();
            let mut best = (0, Alternative::Void);
            for class in 0..self.inst.num_classes() {
                for k in 1..=subtree {
                    let alt = Alternative::new(class, k);
                    let r = self.inst.rank(v, alt);
                    if r > best.0 && self.reach(v, alt).len() >= k {
                        best = (r, alt);
                    }
                }
            }
            self.u[v] = best.0;
            self.choice[v] = best.1;
        }
    }
}

/// Builds a core stable assignment for a forest whose classes are all
/// copyable. Such an assignment always exists.
pub fn solve_core_copyable_forest(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    require_copyable_forest(inst)?;
    let mut slots: Vec<Option<Slot>> = vec![None; inst.n()];
    let mut next_copy = vec![0; inst.num_classes()];

    for comp in graph::components(inst) {
        let tree = RootedTree::new(inst, &comp);
        let mut g = Guarantees {
            inst,
            u: vec![0; inst.n()],
            choice: vec![Alternative::Void; inst.n()],
            tree,
        };
        g.compute();

        let mut tops = vec![g.tree.root];
        while let Some(top) = tops.pop() {
            let alt = g.choice[top];
            let group: Vec<Player> = match alt {
                Alternative::Void => vec![top],
                Alternative::Activity { class, size } => {
                    // a BFS prefix of a rooted subtree is connected
                    let mut members = g.reach(top, alt);
                    members.truncate(size);
                    let slot = Slot::new(class, next_copy[class]);
                    next_copy[class] += 1;
                    for &m in &members {
                        slots[m] = Some(slot);
                    }
                    members
                }
            };
            for &m in &group {
                for &c in &g.tree.children[m] {
                    if !group.contains(&c) {
                        tops.push(c);
                    }
                }
            }
        }
    }

    let pi = Assignment::from_slots(slots);
    if !stability::is_core_stable(inst, &pi)? {
        return Err(Error::Internal(
            "forest core construction produced a blocked assignment".into(),
        ));
    }
    Ok(SolveOutcome {
        verdict: Verdict::Found(pi),
        method: Method::ForestCopyable,
        elapsed: start.elapsed(),
    })
}
