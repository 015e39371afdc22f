//! Certifying checkers for feasibility, individual rationality, Nash
//! stability and core stability.
//!
//! Every negative verdict carries a witness that can be re-verified
//! independently with [`verify_deviation`] and [`verify_block`].

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::graph::{self, Mask};
use crate::model::{Alternative, Assignment, ClassId, Coalition, Instance, Player, Slot};
use crate::outcome::Concept;

/// Exhaustive block search refuses instances above this size unless the
/// caller passes a larger bound.
pub const DEFAULT_BLOCK_BOUND: usize = 20;

/// A single player who strictly gains by joining `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub player: Player,
    pub target: Slot,
}

/// A connected coalition that, together with `target`, strongly blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingCertificate {
    pub coalition: Coalition,
    pub target: Slot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub concept: Concept,
    pub stable: bool,
    pub feasible: bool,
    pub ir_violations: Vec<Player>,
    pub ns_witness: Option<Deviation>,
    pub core_witness: Option<BlockingCertificate>,
}

impl StabilityReport {
    /// JSON with activity ids in place of class indices.
    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        let name = |s: &Slot| inst.class(s.class).id.clone();
        json!({
            "concept": self.concept,
            "stable": self.stable,
            "feasible": self.feasible,
            "ir_violations": self.ir_violations,
            "ns_witness": self.ns_witness.as_ref().map(|d| json!({
                "player": d.player,
                "activity": name(&d.target),
                "copy": d.target.copy,
            })),
            "core_witness": self.core_witness.as_ref().map(|b| json!({
                "coalition": b.coalition.players(),
                "activity": name(&b.target),
                "copy": b.target.copy,
            })),
        })
    }
}

/// True iff every non-empty group is connected. Rejects malformed
/// assignments (unknown class, copy index out of range).
pub fn check_assignment_feasible(inst: &Instance, pi: &Assignment) -> Result<bool> {
    pi.validate(inst)?;
    Ok(pi
        .groups()
        .values()
        .all(|members| graph::is_connected_set(inst, members)))
}

/// Players whose current alternative is strictly worse than staying alone.
pub fn check_individually_rational(inst: &Instance, pi: &Assignment) -> Vec<Player> {
    pi.alternatives()
        .into_iter()
        .enumerate()
        .filter(|&(i, alt)| !alt.is_void() && inst.strictly_prefers(i, Alternative::Void, alt))
        .map(|(i, _)| i)
        .collect()
}

// Slots of `class` a deviator or blocker may target: every used copy plus
// the first unused one (unused copies are interchangeable).
fn candidate_slots(
    inst: &Instance,
    groups: &BTreeMap<Slot, Vec<Player>>,
    class: ClassId,
) -> Vec<Slot> {
    let used: Vec<usize> = groups
        .range(Slot::new(class, 0)..=Slot::new(class, usize::MAX))
        .map(|(s, _)| s.copy)
        .collect();
    let mut out: Vec<Slot> = used.iter().map(|&j| Slot::new(class, j)).collect();
    if used.len() < inst.copies(class) {
        let free = (0..).find(|j| used.binary_search(j).is_err()).unwrap();
        out.push(Slot::new(class, free));
        out.sort();
    }
    out
}

/// First player (ascending), class, copy such that the player strictly
/// prefers joining that group and the enlarged group stays connected.
/// Assumes `pi` is feasible and individually rational.
pub fn find_ns_deviation(inst: &Instance, pi: &Assignment) -> Option<Deviation> {
    let groups = pi.groups();
    let current = pi.alternatives();
    for (i, &here) in current.iter().enumerate() {
        for class in 0..inst.num_classes() {
            for slot in candidate_slots(inst, &groups, class) {
                if pi.get(i) == Some(slot) {
                    continue;
                }
                let members = groups.get(&slot).map_or(&[][..], Vec::as_slice);
                let reachable = members.is_empty() || members.iter().any(|&m| inst.has_edge(i, m));
                if reachable
                    && inst.strictly_prefers(i, Alternative::new(class, members.len() + 1), here)
                {
                    return Some(Deviation {
                        player: i,
                        target: slot,
                    });
                }
            }
        }
    }
    None
}

/// Re-checks a deviation from scratch.
pub fn verify_deviation(inst: &Instance, pi: &Assignment, d: &Deviation) -> bool {
    if d.player >= inst.n() || pi.get(d.player) == Some(d.target) {
        return false;
    }
    if d.target.class >= inst.num_classes() || d.target.copy >= inst.copies(d.target.class) {
        return false;
    }
    let mut joined: Vec<Player> = (0..inst.n())
        .filter(|&j| pi.get(j) == Some(d.target))
        .collect();
    joined.push(d.player);
    joined.sort_unstable();
    let current = pi.alternatives()[d.player];
    graph::is_connected_set(inst, &joined)
        && inst.strictly_prefers(
            d.player,
            Alternative::new(d.target.class, joined.len()),
            current,
        )
}

/// Re-checks a blocking certificate from scratch: connected coalition,
/// contains the target group, every member strictly better off.
pub fn verify_block(inst: &Instance, pi: &Assignment, b: &BlockingCertificate) -> bool {
    let s = b.coalition.players();
    if s.iter().any(|&i| i >= inst.n()) || !graph::is_connected_set(inst, s) {
        return false;
    }
    if b.target.class >= inst.num_classes() || b.target.copy >= inst.copies(b.target.class) {
        return false;
    }
    let contains_group = (0..inst.n())
        .filter(|&j| pi.get(j) == Some(b.target))
        .all(|j| b.coalition.contains(j));
    let current = pi.alternatives();
    let alt = Alternative::new(b.target.class, s.len());
    contains_group && s.iter().all(|&i| inst.strictly_prefers(i, alt, current[i]))
}

fn lex_key(mask: Mask) -> Vec<Player> {
    graph::players_of(mask)
}

/// Exhaustive search for a strongly blocking coalition, gated to
/// `n <= DEFAULT_BLOCK_BOUND`. Returns the lexicographically smallest
/// coalition, then smallest class, then smallest copy.
pub fn find_strong_block(inst: &Instance, pi: &Assignment) -> Result<Option<BlockingCertificate>> {
    find_strong_block_bounded(inst, pi, DEFAULT_BLOCK_BOUND)
}

pub fn find_strong_block_bounded(
    inst: &Instance,
    pi: &Assignment,
    max_n: usize,
) -> Result<Option<BlockingCertificate>> {
    let bound = max_n.min(graph::MAX_MASK_PLAYERS);
    if inst.n() > bound {
        return Err(Error::BoundExceeded {
            what: "strong-block search",
            size: inst.n(),
            bound,
        });
    }
    let n = inst.n();
    let nbr = graph::neighbor_masks(inst);
    let groups = pi.groups();
    let current = pi.alternatives();
    let cur_rank: Vec<i64> = (0..n).map(|i| inst.rank(i, current[i])).collect();

    let mut best: Option<(Vec<Player>, Slot)> = None;
    for class in 0..inst.num_classes() {
        // players who strictly prefer (class, k) for some size k
        let hopeful: Mask = (0..n)
            .filter(|&i| (1..=n).any(|k| inst.rank_of(i, class, k) > cur_rank[i]))
            .fold(0, |m, i| m | graph::bit(i));
        for slot in candidate_slots(inst, &groups, class) {
            let seed = groups.get(&slot).map_or(0, |g| graph::mask_of(g));
            if seed & !hopeful != 0 {
                continue;
            }
            let mut consider = |s: Mask| {
                let k = s.count_ones() as usize;
                let blocks = graph::players_of(s)
                    .into_iter()
                    .all(|i| inst.rank_of(i, class, k) > cur_rank[i]);
                if blocks {
                    let key = lex_key(s);
                    let better = match &best {
                        None => true,
                        Some((b, bs)) => (&key, slot) < (b, *bs),
                    };
                    if better {
                        best = Some((key, slot));
                    }
                }
                true
            };
            if seed == 0 {
                graph::connected_subsets(&nbr, hopeful, n, &mut consider);
            } else {
                graph::connected_supersets(&nbr, hopeful, seed, n, &mut consider);
            }
        }
    }
    Ok(best.map(|(players, target)| BlockingCertificate {
        coalition: Coalition::new(players).expect("non-empty"),
        target,
    }))
}

/// Polynomial core check for forests: for every alternative `(a, k)`, look
/// for a component of at least `k` strict preferrers that can host a
/// size-`k` coalition containing some group of `a` (or any coalition when a
/// copy of `a` is unused).
pub fn check_core_forest(inst: &Instance, pi: &Assignment) -> Result<Option<BlockingCertificate>> {
    if !graph::is_forest(inst) {
        return Err(Error::Inapplicable(
            "polynomial core check needs an acyclic graph".into(),
        ));
    }
    let n = inst.n();
    let groups = pi.groups();
    let current = pi.alternatives();
    for class in 0..inst.num_classes() {
        let class_groups: Vec<(Slot, &Vec<Player>)> = groups
            .range(Slot::new(class, 0)..=Slot::new(class, usize::MAX))
            .map(|(s, g)| (*s, g))
            .collect();
        let spare = candidate_slots(inst, &groups, class)
            .into_iter()
            .find(|s| !groups.contains_key(s));
        for k in 1..=n {
            let alt = Alternative::new(class, k);
            let wants: Vec<bool> = (0..n)
                .map(|i| inst.strictly_prefers(i, alt, current[i]))
                .collect();
            if !wants.iter().any(|&w| w) {
                continue;
            }
            for comp in graph::components_within(inst, &wants) {
                if comp.len() < k {
                    continue;
                }
                let (target, keep) = if let Some(s) = spare {
                    (s, &[][..])
                } else if let Some((s, g)) = class_groups.iter().find(|(_, g)| {
                    g.len() <= k && comp.binary_search(&g[0]).is_ok() && g.iter().all(|&m| wants[m])
                }) {
                    (*s, g.as_slice())
                } else {
                    continue;
                };
                let coalition = prune_to_size(inst, comp, keep, k);
                return Ok(Some(BlockingCertificate {
                    coalition: Coalition::new(coalition).expect("non-empty"),
                    target,
                }));
            }
        }
    }
    Ok(None)
}

// Shrinks a subtree to `k` vertices by removing leaves outside `keep`,
// largest index first. `keep` must be a connected subset of `tree`.
fn prune_to_size(inst: &Instance, mut tree: Vec<Player>, keep: &[Player], k: usize) -> Vec<Player> {
    while tree.len() > k {
        let pos = tree
            .iter()
            .rposition(|&v| {
                keep.binary_search(&v).is_err()
                    && inst
                        .neighbors(v)
                        .iter()
                        .filter(|w| tree.binary_search(w).is_ok())
                        .count()
                        <= 1
            })
            .expect("a tree larger than a connected subset has a removable leaf");
        tree.remove(pos);
    }
    tree
}

/// Feasible, individually rational and free of NS-deviations.
pub fn is_nash_stable(inst: &Instance, pi: &Assignment) -> Result<bool> {
    Ok(check_assignment_feasible(inst, pi)?
        && check_individually_rational(inst, pi).is_empty()
        && find_ns_deviation(inst, pi).is_none())
}

/// Blocking search used by the core checkers: polynomial on forests,
/// exhaustive (bounded) otherwise.
pub fn find_block(
    inst: &Instance,
    pi: &Assignment,
    max_n: usize,
) -> Result<Option<BlockingCertificate>> {
    if graph::is_forest(inst) {
        check_core_forest(inst, pi)
    } else {
        find_strong_block_bounded(inst, pi, max_n)
    }
}

/// Feasible, individually rational and not strongly blocked.
pub fn is_core_stable(inst: &Instance, pi: &Assignment) -> Result<bool> {
    Ok(check_assignment_feasible(inst, pi)?
        && check_individually_rational(inst, pi).is_empty()
        && find_block(inst, pi, DEFAULT_BLOCK_BOUND)?.is_none())
}

/// [`is_core_stable`] with an explicit bound for the exhaustive search.
pub fn is_core_stable_bounded(inst: &Instance, pi: &Assignment, max_n: usize) -> Result<bool> {
    Ok(check_assignment_feasible(inst, pi)?
        && check_individually_rational(inst, pi).is_empty()
        && find_block(inst, pi, max_n)?.is_none())
}

pub fn is_stable(inst: &Instance, pi: &Assignment, concept: Concept) -> Result<bool> {
    Ok(report(inst, pi, concept, DEFAULT_BLOCK_BOUND)?.stable)
}

/// Full report for `concept`. Witness searches run only when the
/// assignment is feasible and individually rational.
pub fn report(
    inst: &Instance,
    pi: &Assignment,
    concept: Concept,
    block_bound: usize,
) -> Result<StabilityReport> {
    let feasible = check_assignment_feasible(inst, pi)?;
    let mut rep = StabilityReport {
        concept,
        stable: false,
        feasible,
        ir_violations: Vec::new(),
        ns_witness: None,
        core_witness: None,
    };
    if !feasible {
        return Ok(rep);
    }
    rep.ir_violations = check_individually_rational(inst, pi);
    if !rep.ir_violations.is_empty() {
        return Ok(rep);
    }
    match concept {
        Concept::IndividualRationality => {}
        Concept::Nash => rep.ns_witness = find_ns_deviation(inst, pi),
        Concept::Core => rep.core_witness = find_block(inst, pi, block_bound)?,
    }
    rep.stable = rep.ns_witness.is_none() && rep.core_witness.is_none();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::fixtures::{empty_core, stalker};

    const A: usize = 0;
    const B: usize = 1;

    fn pi(classes: &[Option<usize>]) -> Assignment {
        Assignment::from_classes(classes)
    }

    #[test]
    fn feasibility() {
        let ex = empty_core();
        assert!(check_assignment_feasible(&ex, &pi(&[Some(B), Some(B), None])).unwrap());
        assert!(check_assignment_feasible(&ex, &pi(&[None, None, None])).unwrap());
        assert!(!check_assignment_feasible(&ex, &pi(&[Some(A), None, Some(A)])).unwrap());
        let bad = Assignment::from_slots(vec![Some(Slot::new(A, 1)), None, None]);
        assert!(check_assignment_feasible(&ex, &bad).is_err());
    }

    #[test]
    fn individual_rationality() {
        let ex = empty_core();
        assert!(check_individually_rational(&ex, &pi(&[Some(A), Some(A), Some(A)])).is_empty());
        assert!(check_individually_rational(&ex, &pi(&[None, None, None])).is_empty());
        let st = stalker(1);
        // (a,2) is unlisted for the first player
        assert_eq!(
            check_individually_rational(&st, &pi(&[Some(A), Some(A)])),
            vec![0]
        );
    }

    #[test]
    fn nash_deviations() {
        let st = stalker(1);
        assert_eq!(
            find_ns_deviation(&st, &pi(&[Some(A), None])),
            Some(Deviation {
                player: 1,
                target: Slot::new(A, 0)
            })
        );
        assert_eq!(
            find_ns_deviation(&st, &pi(&[None, None])),
            Some(Deviation {
                player: 0,
                target: Slot::new(A, 0)
            })
        );
        assert_eq!(
            find_ns_deviation(&empty_core(), &pi(&[Some(B), Some(B), None])),
            None
        );
    }

    #[test]
    fn strong_blocks_of_example_one() {
        let ex = empty_core();
        let cert = find_strong_block(&ex, &pi(&[Some(B), Some(B), None]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.coalition.players(), &[1, 2]);
        assert_eq!(cert.target.class, A);

        let cert = find_strong_block(&ex, &pi(&[Some(A), Some(A), Some(A)]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.coalition.players(), &[0, 1]);
        assert_eq!(cert.target.class, B);

        assert_eq!(
            find_strong_block(&stalker(1), &pi(&[Some(A), None])).unwrap(),
            None
        );
    }

    #[test]
    fn example_one_ir_assignments_are_all_blocked() {
        let ex = empty_core();
        let listed = [
            pi(&[Some(B), Some(B), None]),
            pi(&[None, Some(A), Some(A)]),
            pi(&[None, None, Some(B)]),
            pi(&[Some(A), Some(A), Some(A)]),
            // the all-void assignment is IR as well
            pi(&[None, None, None]),
        ];
        for p in &listed {
            assert!(check_individually_rational(&ex, p).is_empty());
            let forest = check_core_forest(&ex, p).unwrap().expect("blocked");
            assert!(verify_block(&ex, p, &forest));
            let exhaustive = find_strong_block(&ex, p).unwrap().expect("blocked");
            assert!(verify_block(&ex, p, &exhaustive));
        }
    }

    #[test]
    fn core_forest_agrees_on_small_cases() {
        let st = stalker(1);
        assert_eq!(check_core_forest(&st, &pi(&[Some(A), None])).unwrap(), None);

        let single = crate::model::InstanceBuilder::new(1)
            .class("a", 1)
            .class("b", 1)
            .rank(0, "a", 1, 2)
            .rank(0, "b", 1, 1)
            .build()
            .unwrap();
        assert_eq!(check_core_forest(&single, &pi(&[Some(A)])).unwrap(), None);
        assert!(check_core_forest(&single, &pi(&[Some(B)]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn core_forest_rejects_cycles() {
        let tri = crate::model::InstanceBuilder::new(3)
            .edge(0, 1)
            .edge(1, 2)
            .edge(0, 2)
            .build()
            .unwrap();
        assert!(check_core_forest(&tri, &Assignment::all_void(3)).is_err());
    }

    #[test]
    fn block_search_is_gated() {
        let big = crate::model::InstanceBuilder::new(21).build().unwrap();
        assert!(matches!(
            find_strong_block(&big, &Assignment::all_void(21)),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(find_strong_block_bounded(&big, &Assignment::all_void(21), 21).is_ok());
    }

    #[test]
    fn reports() {
        let ex = empty_core();
        let p = pi(&[Some(B), Some(B), None]);
        let nash = report(&ex, &p, Concept::Nash, DEFAULT_BLOCK_BOUND).unwrap();
        assert!(nash.stable);
        let core = report(&ex, &p, Concept::Core, DEFAULT_BLOCK_BOUND).unwrap();
        assert!(!core.stable);
        let w = core.core_witness.unwrap();
        assert_eq!(w.coalition.players(), &[1, 2]);
        assert_eq!(w.target.class, A);

        let infeasible = report(&ex, &pi(&[Some(A), None, Some(A)]), Concept::Nash, 20).unwrap();
        assert!(!infeasible.feasible && !infeasible.stable);
    }
}
