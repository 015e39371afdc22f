//! Connectivity helpers over the communication graph.
//!
//! The exhaustive routines work on `u64` player masks and therefore require
//! `n <= 64`; callers gate on that before reaching them.

use std::collections::VecDeque;

use super::alternative::Player;
use super::instance::Instance;

pub type Mask = u64;

pub const MAX_MASK_PLAYERS: usize = 64;

pub fn bit(i: Player) -> Mask {
    1u64 << i
}

pub fn mask_of(players: &[Player]) -> Mask {
    players.iter().fold(0, |m, &i| m | bit(i))
}

pub fn players_of(mut mask: Mask) -> Vec<Player> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// True iff `members` is non-empty and induces a connected subgraph.
pub fn is_connected_set(inst: &Instance, members: &[Player]) -> bool {
    let Some(&start) = members.first() else {
        return false;
    };
    let mut inside = vec![false; inst.n()];
    for &m in members {
        inside[m] = true;
    }
    let mut seen = vec![false; inst.n()];
    seen[start] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in inst.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    let distinct = inside.iter().filter(|&&b| b).count();
    reached == distinct
}

/// Connected components of the subgraph induced by `allowed`, each sorted,
/// ordered by smallest member.
pub fn components_within(inst: &Instance, allowed: &[bool]) -> Vec<Vec<Player>> {
    let mut comp = vec![usize::MAX; inst.n()];
    let mut out = Vec::new();
    for s in 0..inst.n() {
        if !allowed[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in inst.neighbors(u) {
                if allowed[w] && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn components(inst: &Instance) -> Vec<Vec<Player>> {
    components_within(inst, &vec![true; inst.n()])
}

/// True iff the graph has no cycle.
pub fn is_forest(inst: &Instance) -> bool {
    inst.edges().len() + components(inst).len() == inst.n()
}

/// Neighbourhood masks; requires `n <= 64`.
pub fn neighbor_masks(inst: &Instance) -> Vec<Mask> {
    assert!(inst.n() <= MAX_MASK_PLAYERS, "mask routines need n <= 64");
    (0..inst.n()).map(|i| mask_of(inst.neighbors(i))).collect()
}

pub fn is_connected_mask(nbr: &[Mask], set: Mask) -> bool {
    if set == 0 {
        return false;
    }
    let mut reached = set & set.wrapping_neg();
    let mut frontier = reached;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = nbr[u] & set & !reached;
        reached |= fresh;
        frontier |= fresh;
    }
    reached == set
}

fn closed_neighborhood(nbr: &[Mask], set: Mask) -> Mask {
    players_of(set).into_iter().fold(set, |m, i| m | nbr[i])
}

// ESU-style extension: every connected set reachable from `sub` by adding
// vertices of `allowed` is produced exactly once.
fn extend<F>(
    nbr: &[Mask],
    allowed: Mask,
    sub: Mask,
    mut ext: Mask,
    closed: Mask,
    max_size: usize,
    f: &mut F,
) -> bool
where
    F: FnMut(Mask) -> bool,
{
    if !f(sub) {
        return false;
    }
    if sub.count_ones() as usize >= max_size {
        return true;
    }
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let next_ext = ext | (nbr[w] & allowed & !closed);
        if !extend(
            nbr,
            allowed,
            sub | bit(w),
            next_ext,
            closed | nbr[w],
            max_size,
            f,
        ) {
            return false;
        }
    }
    true
}

/// Calls `f` on every connected subset of `allowed` with at most `max_size`
/// members whose smallest member is `root`. Stops early when `f` returns
/// false; the return value reports whether enumeration ran to completion.
pub fn connected_subsets_rooted<F>(
    nbr: &[Mask],
    allowed: Mask,
    root: Player,
    max_size: usize,
    f: &mut F,
) -> bool
where
    F: FnMut(Mask) -> bool,
{
    if allowed & bit(root) == 0 || max_size == 0 {
        return true;
    }
    let above = !((bit(root) << 1).wrapping_sub(1));
    let allowed = allowed & (above | bit(root));
    let closed = bit(root) | nbr[root];
    extend(
        nbr,
        allowed,
        bit(root),
        nbr[root] & allowed,
        closed,
        max_size,
        f,
    )
}

/// Every connected subset of `allowed` with at most `max_size` members.
pub fn connected_subsets<F>(nbr: &[Mask], allowed: Mask, max_size: usize, f: &mut F) -> bool
where
    F: FnMut(Mask) -> bool,
{
    for root in players_of(allowed) {
        if !connected_subsets_rooted(nbr, allowed, root, max_size, f) {
            return false;
        }
    }
    true
}

/// Every connected superset of the connected set `seed` inside
/// `allowed | seed` with at most `max_size` members, `seed` included.
pub fn connected_supersets<F>(
    nbr: &[Mask],
    allowed: Mask,
    seed: Mask,
    max_size: usize,
    f: &mut F,
) -> bool
where
    F: FnMut(Mask) -> bool,
{
    if seed == 0 || seed.count_ones() as usize > max_size {
        return true;
    }
    let allowed = allowed | seed;
    let closed = closed_neighborhood(nbr, seed);
    extend(
        nbr,
        allowed,
        seed,
        closed & allowed & !seed,
        closed,
        max_size,
        f,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceBuilder;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Instance {
        let mut b = InstanceBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build().unwrap()
    }

    fn brute_connected(nbr: &[Mask], allowed: Mask, max_size: usize) -> Vec<Mask> {
        let n = nbr.len();
        (1..(1u64 << n))
            .filter(|&s| s & !allowed == 0 && s.count_ones() as usize <= max_size)
            .filter(|&s| is_connected_mask(nbr, s))
            .collect()
    }

    #[test]
    fn path_connectivity() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert!(is_connected_set(&g, &[0, 1]));
        assert!(!is_connected_set(&g, &[0, 2]));
        assert!(!is_connected_set(&g, &[]));
        assert!(is_forest(&g));
    }

    #[test]
    fn enumeration_matches_brute_force_on_cycle_with_chord() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]);
        assert!(!is_forest(&g));
        let nbr = neighbor_masks(&g);
        for allowed in [0b111111u64, 0b101101, 0b011110] {
            for max_size in 1..=6 {
                let mut got = Vec::new();
                connected_subsets(&nbr, allowed, max_size, &mut |s| {
                    got.push(s);
                    true
                });
                let mut sorted = got.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), got.len(), "duplicates emitted");
                assert_eq!(sorted, brute_connected(&nbr, allowed, max_size));
            }
        }
    }

    #[test]
    fn supersets_match_brute_force() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]);
        let nbr = neighbor_masks(&g);
        let seed = bit(2) | bit(3);
        let mut got = Vec::new();
        connected_supersets(&nbr, 0b111111, seed, 6, &mut |s| {
            got.push(s);
            true
        });
        got.sort_unstable();
        let want: Vec<_> = brute_connected(&nbr, 0b111111, 6)
            .into_iter()
            .filter(|s| s & seed == seed)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn components_are_sorted() {
        let g = graph(5, &[(3, 4), (0, 2)]);
        assert_eq!(components(&g), vec![vec![0, 2], vec![1], vec![3, 4]]);
    }
}
