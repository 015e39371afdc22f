//! Nash stability on a path with one copy per activity.
//!
//! Guess the set `B` of activities in use. Walking the path left to right,
//! `h[e][B'][x]` records that positions `0..=e` can be split into groups
//! using exactly the activities `B' ⊆ B`, the last group ends at `e` with
//! alternative `x`, and every closed group is stable: its members weakly
//! prefer it to every activity outside `B` taken alone, and neighbouring
//! groups do not want to absorb each other's border players.
//!
//! A group `(a,k)` ending at `e` starts at `s = e-k+1`; the run condition is
//! a prefix-count lookup and the border with the group ending at `s-1` is a
//! two-dimensional dominance query over that group's candidates.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{path_order, Assignment, ClassId, Instance, Player, Slot};
use crate::outcome::{Method, SolveOutcome, Verdict};
use crate::stability;

// Candidates for the group ending just before a boundary, ordered by
// `x` (how much the left border player likes its own group) descending,
// with running minima of `y` (how much the right border player would like
// to join it). A new group is compatible if some candidate has
// x >= need_x and y <= allow_y.
#[derive(Default)]
struct Dominance {
    xs: Vec<i64>,
    min_y: Vec<(i64, usize)>,
}

impl Dominance {
    fn build(mut pts: Vec<(i64, i64, usize)>) -> Self {
        pts.sort_by(|a, b| b.0.cmp(&a.0).then(a.2.cmp(&b.2)));
        let mut min_y = Vec::with_capacity(pts.len());
        let mut cur = (i64::MAX, usize::MAX);
        for &(_, y, w) in &pts {
            if y < cur.0 {
                cur = (y, w);
            }
            min_y.push(cur);
        }
        Dominance {
            xs: pts.iter().map(|p| p.0).collect(),
            min_y,
        }
    }

    fn query(&self, need_x: i64, allow_y: i64) -> Option<usize> {
        let cnt = self.xs.partition_point(|&x| x >= need_x);
        if cnt == 0 {
            return None;
        }
        let (y, w) = self.min_y[cnt - 1];
        (y <= allow_y).then_some(w)
    }
}

struct PathDp<'a> {
    inst: &'a Instance,
    ord: Vec<Player>,
    n: usize,
    // classes in B, by position
    cls: Vec<ClassId>,
}

impl PathDp<'_> {
    // alternative index: 0 = void, 1 + ai*n + (k-1)
    fn nalts(&self) -> usize {
        1 + self.cls.len() * self.n
    }

    fn alt(&self, x: usize) -> (Option<usize>, usize) {
        if x == 0 {
            (None, 1)
        } else {
            (Some((x - 1) / self.n), (x - 1) % self.n + 1)
        }
    }

    fn rank(&self, pos: usize, x: usize) -> i64 {
        match self.alt(x) {
            (None, _) => 0,
            (Some(ai), k) => self.inst.rank_of(self.ord[pos], self.cls[ai], k),
        }
    }

    fn rank_grown(&self, pos: usize, x: usize) -> i64 {
        match self.alt(x) {
            (None, _) => i64::MIN,
            (Some(ai), k) => self.inst.rank_of(self.ord[pos], self.cls[ai], k + 1),
        }
    }

    // Runs the table for the class set `b` (bit mask over all classes).
    // Returns the groups of a stable assignment, if any.
    fn solve(&self, b: u64) -> Option<Vec<(usize, usize, usize)>> {
        let n = self.n;
        let nb = self.cls.len();
        let nsub = 1usize << nb;
        let nalts = self.nalts();

        // best rank of an activity outside B taken alone (void included)
        let outside: Vec<i64> = (0..n)
            .map(|pos| {
                (0..self.inst.num_classes())
                    .filter(|&c| b & (1 << c) == 0)
                    .map(|c| self.inst.rank_of(self.ord[pos], c, 1))
                    .fold(0, i64::max)
            })
            .collect();
        // okc[x][pos]: number of positions < pos content with x
        let okc: Vec<Vec<u32>> = (0..nalts)
            .map(|x| {
                let mut c = vec![0u32; n + 1];
                for pos in 0..n {
                    c[pos + 1] = c[pos] + (self.rank(pos, x) >= outside[pos]) as u32;
                }
                c
            })
            .collect();

        let idx = |e: usize, sub: usize, x: usize| (e * nsub + sub) * nalts + x;
        let mut h = vec![false; n * nsub * nalts];
        let mut dom: Vec<Dominance> = Vec::with_capacity(n * nsub);

        for e in 0..n {
            for sub in 0..nsub {
                for x in 0..nalts {
                    let (ai, k) = self.alt(x);
                    if k > e + 1 {
                        continue;
                    }
                    let rest = match ai {
                        None => sub,
                        Some(ai) if sub & (1 << ai) != 0 => sub & !(1 << ai),
                        Some(_) => continue,
                    };
                    let s = e + 1 - k;
                    if okc[x][e + 1] - okc[x][s] != k as u32 {
                        continue;
                    }
                    h[idx(e, sub, x)] = if s == 0 {
                        rest == 0
                    } else {
                        dom[(s - 1) * nsub + rest]
                            .query(self.rank_grown(s - 1, x), self.rank(s, x))
                            .is_some()
                    };
                }
            }
            if e + 1 < n {
                for sub in 0..nsub {
                    let pts = (0..nalts)
                        .filter(|&y| h[idx(e, sub, y)])
                        .map(|y| (self.rank(e, y), self.rank_grown(e + 1, y), y))
                        .collect();
                    dom.push(Dominance::build(pts));
                }
            }
        }

        let full = nsub - 1;
        let mut x = (0..nalts).find(|&x| h[idx(n - 1, full, x)])?;
        let mut groups = Vec::new();
        let mut e = n - 1;
        let mut sub = full;
        loop {
            let (ai, k) = self.alt(x);
            let s = e + 1 - k;
            groups.push((s, e, x));
            if let Some(ai) = ai {
                sub &= !(1 << ai);
            }
            if s == 0 {
                break;
            }
            x = dom[(s - 1) * nsub + sub]
                .query(self.rank_grown(s - 1, x), self.rank(s, x))
                .expect("accepted entry has a predecessor");
            e = s - 1;
        }
        Some(groups)
    }
}

/// Decides Nash stability on a path with single-copy activities.
pub fn solve_ns_path(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    let ord = path_order(inst)
        .ok_or_else(|| Error::Inapplicable("the communication graph is not a path".into()))?;
    if !inst.all_single_copy() {
        return Err(Error::Inapplicable(
            "the path algorithm needs one copy per activity".into(),
        ));
    }
    let p = inst.num_classes();
    if p > 20 {
        return Err(Error::BoundExceeded {
            what: "path dynamic program (activities)",
            size: p,
            bound: 20,
        });
    }
    let n = inst.n();
    for b in 0..(1u64 << p) {
        let cls: Vec<ClassId> = (0..p).filter(|&c| b & (1 << c) != 0).collect();
        if cls.len() > n {
            continue;
        }
        let dp = PathDp {
            inst,
            ord: ord.clone(),
            n,
            cls,
        };
        if let Some(groups) = dp.solve(b) {
            let mut slots = vec![None; n];
            for (s, e, x) in groups {
                let slot = dp.alt(x).0.map(|ai| Slot::new(dp.cls[ai], 0));
                for pos in s..=e {
                    slots[ord[pos]] = slot;
                }
            }
            let pi = Assignment::from_slots(slots);
            if !stability::is_nash_stable(inst, &pi)? {
                return Err(Error::Internal(
                    "path dynamic program produced an unstable assignment".into(),
                ));
            }
            return Ok(SolveOutcome {
                verdict: Verdict::Found(pi),
                method: Method::Path,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SolveOutcome {
        verdict: Verdict::NoneExists,
        method: Method::Path,
        elapsed: start.elapsed(),
    })
}
