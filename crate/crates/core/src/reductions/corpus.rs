//! Source pools for reduction checks.

use rand::Rng;

use super::source::ReductionSource;

fn rainbow(colors_of_edges: &[usize], k: usize) -> ReductionSource {
    let m = colors_of_edges.len();
    let q = colors_of_edges.iter().max().map_or(0, |c| c + 1);
    let vertices: Vec<String> = (0..=m).map(|i| format!("v{}", i + 1)).collect();
    let colors: Vec<String> = (0..q).map(|c| format!("c{}", c + 1)).collect();
    let edges = (0..m)
        .map(|j| {
            [
                vertices[j].clone(),
                vertices[j + 1].clone(),
                colors[colors_of_edges[j]].clone(),
            ]
        })
        .collect();
    ReductionSource::RainbowPath {
        vertices,
        colors,
        edges,
        k,
    }
}

/// Every properly colored path with `1..=max_edges` edges, colors named in
/// order of first appearance, and every `k` in `1..=q`.
pub fn rainbow_sources(max_edges: usize) -> Vec<ReductionSource> {
    fn grow(coloring: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if coloring.len() == m {
            out.push(coloring.clone());
            return;
        }
        let next = coloring.iter().max().map_or(0, |c| c + 1);
        for c in 0..=next {
            if coloring.last() != Some(&c) {
                coloring.push(c);
                grow(coloring, m, out);
                coloring.pop();
            }
        }
    }
    let mut out = Vec::new();
    for m in 1..=max_edges {
        let mut colorings = Vec::new();
        grow(&mut Vec::new(), m, &mut colorings);
        for c in colorings {
            let q = c.iter().max().unwrap() + 1;
            out.extend((1..=q).map(|k| rainbow(&c, k)));
        }
    }
    out
}

/// A random bipartite graph with sides of size `1..=max_side`, at least one
/// edge, and `k` uniform in `1..=|E|`.
pub fn random_mmm_source<R: Rng>(rng: &mut R, max_side: usize) -> ReductionSource {
    let nu = rng.gen_range(1..=max_side);
    let nv = rng.gen_range(1..=max_side);
    let u: Vec<String> = (0..nu).map(|i| format!("u{}", i + 1)).collect();
    let v: Vec<String> = (0..nv).map(|i| format!("v{}", i + 1)).collect();
    let mut edges = Vec::new();
    while edges.is_empty() {
        for a in &u {
            for b in &v {
                if rng.gen_bool(0.5) {
                    edges.push([a.clone(), b.clone()]);
                }
            }
        }
    }
    let k = rng.gen_range(1..=edges.len());
    ReductionSource::Mmm { u, v, edges, k }
}

/// Formulas over `x, y, z` with four clauses, each containing every
/// variable once, and each variable positive in exactly two clauses: all
/// 216 of them.
pub fn sat3b2_pool() -> Vec<ReductionSource> {
    let vars = ["x", "y", "z"];
    let pairs: Vec<[bool; 4]> = (0u8..16)
        .filter(|m| m.count_ones() == 2)
        .map(|m| [0, 1, 2, 3].map(|c| m >> c & 1 == 1))
        .collect();
    let mut out = Vec::new();
    for px in &pairs {
        for py in &pairs {
            for pz in &pairs {
                let clauses = (0..4)
                    .map(|c| {
                        [px, py, pz]
                            .iter()
                            .zip(vars)
                            .map(|(p, x)| if p[c] { x.to_string() } else { format!("-{x}") })
                            .collect()
                    })
                    .collect();
                out.push(ReductionSource::Sat3b2 {
                    variables: vars.map(String::from).to_vec(),
                    clauses,
                });
            }
        }
    }
    out
}
