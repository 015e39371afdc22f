//! Nash stability on a star with one copy per activity, by color coding.
//!
//! Fix the center's alternative `(a,k)` and the set `B` of activities used
//! by leaves on their own. Leaves are non-adjacent, so a leaf either joins
//! the center's group, does its own activity from `B` alone, or stays void,
//! and its only possible deviations are joining the center or starting an
//! unused activity. Coloring the leaves with `|B|` colors, each color class
//! must supply the single leaf doing its activity; the remaining leaves of
//! the class contribute any count between "those that must join the center"
//! and "those that may". A knapsack over the colors then asks for exactly
//! `k-1` joiners.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hash_family::ColoringFamily;
use crate::error::{Error, Result};
use crate::model::{star_center, Alternative, Assignment, ClassId, Instance, Player, Slot};
use crate::outcome::{Method, SolveOutcome, Verdict};
use crate::stability;

/// How colorings are produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StarMode {
    /// A deterministic perfect family: exact.
    Derandomized,
    /// Uniformly random colorings from a seeded generator. `trials` per
    /// `(center alternative, B)` pair; `None` means
    /// `ceil(|B|^|B| * ln(1/0.01))`. May miss solutions, never invents one.
    Randomized { seed: u64, trials: Option<u64> },
}

/// Failure probability used for the default trial count.
pub const DEFAULT_DELTA: f64 = 0.01;

/// `ceil(b^b * ln(1/delta))`.
pub fn randomized_trials(b: usize, delta: f64) -> u64 {
    ((b as f64).powi(b as i32) * (1.0 / delta).ln())
        .ceil()
        .max(1.0) as u64
}

// What a leaf may do under a fixed center alternative and B.
struct LeafCaps {
    to_center: bool,
    void: bool,
    // own[j]: may do the j-th activity of B alone
    own: Vec<bool>,
}

// For one color class: the feasible joiner counts, with the chosen leaf.
fn class_counts(caps: &[LeafCaps], members: &[usize], color: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; members.len() + 1];
    for (pos, &l) in members.iter().enumerate() {
        if !caps[l].own[color] {
            continue;
        }
        let mut lo = 0;
        let mut hi = 0;
        let mut ok = true;
        for (q, &o) in members.iter().enumerate() {
            if q == pos {
                continue;
            }
            match (caps[o].to_center, caps[o].void) {
                (true, true) => hi += 1,
                (true, false) => {
                    lo += 1;
                    hi += 1
                }
                (false, true) => {}
                (false, false) => ok = false,
            }
        }
        if ok {
            for slot in &mut out[lo..=hi] {
                slot.get_or_insert(l);
            }
        }
    }
    out
}

// Tries one coloring; on success returns, per leaf, None (void),
// Some(None) (joins center) or Some(Some(j)) (activity j of B alone).
fn try_coloring(
    caps: &[LeafCaps],
    coloring: &[u8],
    nb: usize,
    need: usize,
) -> Option<Vec<Option<Option<usize>>>> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (l, &c) in coloring.iter().enumerate() {
        members[c as usize].push(l);
    }
    let counts: Vec<Vec<Option<usize>>> = (0..nb)
        .map(|j| class_counts(caps, &members[j], j))
        .collect();
    // reach[j][s]: colors 0..j can supply s joiners; value = count from color j-1
    let mut reach = vec![vec![None; need + 1]; nb + 1];
    reach[0][0] = Some(0);
    for j in 0..nb {
        for s in 0..=need {
            if reach[j][s].is_none() {
                continue;
            }
            for (c, leaf) in counts[j].iter().enumerate() {
                if leaf.is_some() && s + c <= need && reach[j + 1][s + c].is_none() {
                    reach[j + 1][s + c] = Some(c);
                }
            }
        }
    }
    reach[nb][need]?;
    let mut plan = vec![None; caps.len()];
    let mut s = need;
    for j in (0..nb).rev() {
        let c = reach[j + 1][s].unwrap();
        let chosen = counts[j][c].unwrap();
        plan[chosen] = Some(Some(j));
        let mut want = c;
        // forced joiners first, then optional ones
        let rest: Vec<usize> = members[j]
            .iter()
            .copied()
            .filter(|&l| l != chosen)
            .collect();
        for &l in &rest {
            if caps[l].to_center && !caps[l].void {
                plan[l] = Some(None);
                want -= 1;
            }
        }
        for &l in &rest {
            if plan[l].is_none() && want > 0 && caps[l].to_center {
                plan[l] = Some(None);
                want -= 1;
            }
        }
        s -= c;
    }
    Some(plan)
}

fn single_class_plan(caps: &[LeafCaps], need: usize) -> Option<Vec<Option<Option<usize>>>> {
    let mut lo = 0;
    let mut hi = 0;
    for c in caps {
        match (c.to_center, c.void) {
            (true, true) => hi += 1,
            (true, false) => {
                lo += 1;
                hi += 1
            }
            (false, true) => {}
            (false, false) => return None,
        }
    }
    if need < lo || need > hi {
        return None;
    }
    let mut want = need;
    let mut plan = vec![None; caps.len()];
    for (l, c) in caps.iter().enumerate() {
        if c.to_center && !c.void {
            plan[l] = Some(None);
            want -= 1;
        }
    }
    for (l, c) in caps.iter().enumerate() {
        if plan[l].is_none() && want > 0 && c.to_center {
            plan[l] = Some(None);
            want -= 1;
        }
    }
    Some(plan)
}

/// Decides Nash stability on a star with single-copy activities.
pub fn solve_ns_star(inst: &Instance, mode: StarMode) -> Result<SolveOutcome> {
    let start = Instant::now();
    let center = star_center(inst)
        .ok_or_else(|| Error::Inapplicable("the communication graph is not a star".into()))?;
    if !inst.all_single_copy() {
        return Err(Error::Inapplicable(
            "the star algorithm needs one copy per activity".into(),
        ));
    }
    let p = inst.num_classes();
    if p > 20 {
        return Err(Error::BoundExceeded {
            what: "star color coding (activities)",
            size: p,
            bound: 20,
        });
    }
    let leaves: Vec<Player> = (0..inst.n()).filter(|&i| i != center).collect();
    let m = leaves.len();
    let mut rng = match mode {
        StarMode::Randomized { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        StarMode::Derandomized => None,
    };

    let center_alts = std::iter::once(Alternative::Void)
        .chain((0..p).flat_map(|c| (1..=m + 1).map(move |k| Alternative::new(c, k))));
    for alt in center_alts {
        let a = alt.class();
        let k = alt.size();
        let rc = inst.rank(center, alt);
        if rc < 0 {
            continue;
        }
        let others: Vec<ClassId> = (0..p).filter(|&c| Some(c) != a).collect();
        for bits in 0..(1u64 << others.len()) {
            let bset: Vec<ClassId> = (0..others.len())
                .filter(|&j| bits & (1 << j) != 0)
                .map(|j| others[j])
                .collect();
            if bset.len() + k - 1 > m {
                continue;
            }
            let in_b = |c: ClassId| bset.contains(&c);
            let center_ok = (0..p).filter(|&c| Some(c) != a).all(|c| {
                let size = if in_b(c) { 2 } else { 1 };
                rc >= inst.rank_of(center, c, size)
            });
            if !center_ok {
                continue;
            }
            let caps: Vec<LeafCaps> = leaves
                .iter()
                .map(|&i| {
                    let outside = others
                        .iter()
                        .filter(|&&c| !in_b(c))
                        .map(|&c| inst.rank_of(i, c, 1))
                        .fold(0, i64::max);
                    let join = a.map_or(i64::MIN, |c| inst.rank_of(i, c, k + 1));
                    LeafCaps {
                        to_center: a.is_some() && inst.rank(i, alt) >= outside,
                        void: outside == 0 && join <= 0,
                        own: bset
                            .iter()
                            .map(|&b| {
                                let r = inst.rank_of(i, b, 1);
                                r >= outside && r >= join
                            })
                            .collect(),
                    }
                })
                .collect();

            let plan = match bset.len() {
                0 => single_class_plan(&caps, k - 1),
                1 => try_coloring(&caps, &vec![0; m], 1, k - 1),
                nb => match (mode, rng.as_mut()) {
                    (StarMode::Randomized { trials, .. }, Some(rng)) => {
                        let t = trials.unwrap_or_else(|| randomized_trials(nb, DEFAULT_DELTA));
                        (0..t).find_map(|_| {
                            let col: Vec<u8> = (0..m).map(|_| rng.gen_range(0..nb) as u8).collect();
                            try_coloring(&caps, &col, nb, k - 1)
                        })
                    }
                    _ => ColoringFamily::new(m, nb)?
                        .iter()
                        .find_map(|col| try_coloring(&caps, &col, nb, k - 1)),
                },
            };
            let Some(plan) = plan else { continue };

            let mut slots: Vec<Option<Slot>> = vec![None; inst.n()];
            slots[center] = a.map(|c| Slot::new(c, 0));
            for (l, choice) in plan.into_iter().enumerate() {
                slots[leaves[l]] = match choice {
                    None => None,
                    Some(None) => a.map(|c| Slot::new(c, 0)),
                    Some(Some(j)) => Some(Slot::new(bset[j], 0)),
                };
            }
            let pi = Assignment::from_slots(slots);
            if !stability::is_nash_stable(inst, &pi)? {
                return Err(Error::Internal(
                    "star color coding produced an unstable assignment".into(),
                ));
            }
            return Ok(SolveOutcome {
                verdict: Verdict::Found(pi),
                method: Method::Star,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SolveOutcome {
        verdict: Verdict::NoneExists,
        method: Method::Star,
        elapsed: start.elapsed(),
    })
}
