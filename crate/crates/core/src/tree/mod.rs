//! Polynomial algorithms for forests whose activities are all copyable.

mod core;
mod ns;

pub use self::core::solve_core_copyable_forest;
pub use self::ns::solve_ns_copyable_forest;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{graph, Instance, Player};

pub(crate) fn require_copyable_forest(inst: &Instance) -> Result<()> {
    if !graph::is_forest(inst) {
        return Err(Error::Inapplicable(
            "the communication graph is not a forest".into(),
        ));
    }
    if !inst.all_copyable() {
        return Err(Error::Inapplicable(
            "every activity needs at least n copies".into(),
        ));
    }
    Ok(())
}

/// One tree of a forest, rooted at its smallest vertex. Vectors are indexed
/// by global player id; entries outside the component stay empty.
pub(crate) struct RootedTree {
    pub root: Player,
    /// BFS order from the root.
    pub order: Vec<Player>,
    pub children: Vec<Vec<Player>>,
}

impl RootedTree {
    pub fn new(inst: &Instance, component: &[Player]) -> Self {
        let root = *component.iter().min().expect("non-empty component");
        let mut children = vec![Vec::new(); inst.n()];
        let mut seen = vec![false; inst.n()];
        let mut order = Vec::with_capacity(component.len());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in inst.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    children[v].push(w);
                    queue.push_back(w);
                }
            }
        }
        RootedTree {
            root,
            order,
            children,
        }
    }

    /// The subtree of `v` in BFS order.
    pub fn subtree(&self, v: Player) -> Vec<Player> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }
}
