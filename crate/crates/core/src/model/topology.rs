use serde::Serialize;

use super::alternative::Player;
use super::graph;
use super::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyKind {
    Path,
    Star,
    /// A connected tree that is neither a path nor a star.
    Forest,
    /// Any disconnected graph; `c` is the largest component size.
    SmallComponents {
        c: usize,
    },
    General,
}

/// Structural classification used to route instances to solvers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    pub kind: TopologyKind,
    pub components: Vec<Vec<Player>>,
    /// Largest component size.
    pub c: usize,
    /// Number of components.
    pub k: usize,
    pub is_forest: bool,
}

pub fn classify_topology(inst: &Instance) -> Topology {
    let components = graph::components(inst);
    let c = components.iter().map(Vec::len).max().unwrap_or(0);
    let k = components.len();
    let is_forest = inst.edges().len() + k == inst.n();
    let n = inst.n();
    let max_degree = (0..n).map(|i| inst.degree(i)).max().unwrap_or(0);

    let kind = if k > 1 {
        TopologyKind::SmallComponents { c }
    } else if !is_forest {
        TopologyKind::General
    } else if max_degree <= 2 {
        TopologyKind::Path
    } else if max_degree == n - 1 {
        TopologyKind::Star
    } else {
        TopologyKind::Forest
    };

    Topology {
        kind,
        components,
        c,
        k,
        is_forest,
    }
}

/// Players in path order, starting from the smaller endpoint, when the graph
/// is a single path (a lone player counts).
pub fn path_order(inst: &Instance) -> Option<Vec<Player>> {
    let n = inst.n();
    if inst.edges().len() + 1 != n || (0..n).any(|i| inst.degree(i) > 2) {
        return None;
    }
    let start = (0..n).find(|&i| inst.degree(i) <= 1)?;
    let mut order = Vec::with_capacity(n);
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        match inst.neighbors(cur).iter().find(|&&w| w != prev) {
            Some(&next) if order.len() < n => {
                prev = cur;
                cur = next;
            }
            _ => break,
        }
    }
    (order.len() == n).then_some(order)
}

/// The centre of a star-shaped graph: a vertex adjacent to all others, in a
/// graph with exactly `n - 1` edges. Two- and three-vertex paths are stars
/// too; a lone player is its own centre. Ties go to the smallest index.
pub fn star_center(inst: &Instance) -> Option<Player> {
    let n = inst.n();
    if inst.edges().len() + 1 != n {
        return None;
    }
    (0..n).find(|&i| inst.degree(i) == n - 1)
}
