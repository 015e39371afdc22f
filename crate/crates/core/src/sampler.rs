//! Random instances for tests and benchmarks. Deterministic given the RNG.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, InstanceBuilder, Player};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Path,
    Star,
    /// A random tree.
    Tree,
    /// Random trees with each non-root vertex cut off with probability
    /// `cut`.
    Forest {
        cut: f64,
    },
    /// `min(k, n)` components of random sizes in `1..=c` summing to `n`,
    /// each a random tree plus extra edges with probability `extra`.
    /// Players beyond `c * k` stay isolated.
    Components {
        c: usize,
        k: usize,
        extra: f64,
    },
    /// Connected graph: a random tree plus extra edges with probability
    /// `extra`.
    Connected {
        extra: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PrefModel {
    /// Every `(class, size)` gets an independent rank in `lo..=hi`.
    Uniform { lo: i64, hi: i64 },
    /// For each player, class and size bucket `{1}`, `{2..=ceil(n/2)}`,
    /// `{> ceil(n/2)}`, the bucket is approved with probability
    /// `q_approve`; approved sizes get ranks in `1..=3`, the rest stay
    /// unlisted.
    Bucketed { q_approve: f64 },
}

impl Default for PrefModel {
    fn default() -> Self {
        PrefModel::Bucketed { q_approve: 0.3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub p: usize,
    pub copies: usize,
    pub shape: Shape,
    pub prefs: PrefModel,
}

fn random_tree_edges<R: Rng>(rng: &mut R, vertices: &[Player]) -> Vec<(Player, Player)> {
    (1..vertices.len())
        .map(|i| (vertices[rng.gen_range(0..i)], vertices[i]))
        .collect()
}

fn extra_edges<R: Rng>(
    rng: &mut R,
    vertices: &[Player],
    prob: f64,
    edges: &mut Vec<(Player, Player)>,
) {
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            let (a, b) = (u.min(v), u.max(v));
            if !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)) && rng.gen_bool(prob) {
                edges.push((a, b));
            }
        }
    }
}

/// Edges of a random graph of the given shape on `n` players with random
/// labels.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, shape: Shape) -> Vec<(Player, Player)> {
    let mut labels: Vec<Player> = (0..n).collect();
    labels.shuffle(rng);
    match shape {
        Shape::Path => labels.windows(2).map(|w| (w[0], w[1])).collect(),
        Shape::Star => labels.iter().skip(1).map(|&v| (labels[0], v)).collect(),
        Shape::Tree => random_tree_edges(rng, &labels),
        Shape::Forest { cut } => random_tree_edges(rng, &labels)
            .into_iter()
            .filter(|_| !rng.gen_bool(cut))
            .collect(),
        Shape::Components { c, k, extra } => {
            let parts = k.min(n);
            let mut sizes = vec![1; parts];
            let mut open: Vec<usize> = (0..parts).filter(|_| c > 1).collect();
            for _ in parts..n.min(c * k) {
                let j = rng.gen_range(0..open.len());
                sizes[open[j]] += 1;
                if sizes[open[j]] == c {
                    open.swap_remove(j);
                }
            }
            let mut edges = Vec::new();
            let mut next = 0;
            for size in sizes {
                let verts = &labels[next..next + size];
                edges.extend(random_tree_edges(rng, verts));
                extra_edges(rng, verts, extra, &mut edges);
                next += size;
            }
            edges
        }
        Shape::Connected { extra } => {
            let mut edges = random_tree_edges(rng, &labels);
            extra_edges(rng, &labels, extra, &mut edges);
            edges
        }
    }
}

/// A player count that a components shape with parameters `c`, `k` can
/// hold exactly: uniform in `k..=c * k`.
pub fn components_player_count<R: Rng>(rng: &mut R, c: usize, k: usize) -> usize {
    rng.gen_range(k..=c * k)
}

pub fn random_instance<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Instance {
    let n = cfg.n;
    let mut b = InstanceBuilder::new(n);
    let names: Vec<String> = (0..cfg.p).map(|c| format!("a{c}")).collect();
    for name in &names {
        b.add_class(name.clone(), cfg.copies);
    }
    for (u, v) in random_edges(rng, n, cfg.shape) {
        b.add_edge(u, v);
    }
    let half = n.div_ceil(2);
    for i in 0..n {
        for name in &names {
            match cfg.prefs {
                PrefModel::Uniform { lo, hi } => {
                    for k in 1..=n {
                        let r = rng.gen_range(lo..=hi);
                        if r != -1 {
                            b.add_rank(i, name.clone(), k, r);
                        }
                    }
                }
                PrefModel::Bucketed { q_approve } => {
                    let buckets = [(1, 1), (2, half), (half + 1, n)];
                    for (lo, hi) in buckets {
                        if lo > hi || lo > n || !rng.gen_bool(q_approve) {
                            continue;
                        }
                        for k in lo.max(1)..=hi.min(n) {
                            b.add_rank(i, name.clone(), k, rng.gen_range(1..=3));
                        }
                    }
                }
            }
        }
    }
    b.build().expect("sampled instances are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_topology, graph, TopologyKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(n: usize, shape: Shape) -> SamplerConfig {
        SamplerConfig {
            n,
            p: 2,
            copies: 1,
            shape,
            prefs: PrefModel::Uniform { lo: -2, hi: 3 },
        }
    }

    #[test]
    fn shapes_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 4..9 {
            let p = random_instance(&mut rng, &cfg(n, Shape::Path));
            assert_eq!(classify_topology(&p).kind, TopologyKind::Path);
            let s = random_instance(&mut rng, &cfg(n, Shape::Star));
            assert_eq!(classify_topology(&s).kind, TopologyKind::Star);
            let t = random_instance(&mut rng, &cfg(n, Shape::Tree));
            assert!(graph::is_forest(&t) && classify_topology(&t).k == 1);
            let f = random_instance(&mut rng, &cfg(n, Shape::Forest { cut: 0.3 }));
            assert!(graph::is_forest(&f));
            let c = random_instance(
                &mut rng,
                &cfg(
                    n,
                    Shape::Components {
                        c: 3,
                        k: 2,
                        extra: 0.5,
                    },
                ),
            );
            let t = classify_topology(&c);
            assert!(t.c <= 3 && t.k == 2 + n.saturating_sub(6), "{t:?}");
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let c = SamplerConfig {
            n: 12,
            p: 3,
            copies: 1,
            shape: Shape::Tree,
            prefs: PrefModel::default(),
        };
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(1), &c);
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(1), &c);
        assert_eq!(a, b);
    }
}
