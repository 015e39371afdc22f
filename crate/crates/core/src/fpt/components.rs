//! Nash and core stability when every connected component is small and
//! every activity has one copy.
//!
//! Each component is solved in isolation for every way of using a set `Q`
//! of activities inside it. A local outcome is summarized by `Q` and the set
//! `D` of unused activities some local player (or, for the core, some local
//! connected coalition) would start alone. A local outcome fits a global
//! choice `B` of used activities iff `Q ⊆ B` and `D ⊆ B`, since activities
//! used in other components are unreachable. A subset dynamic program over
//! the components then looks for disjoint `Q`s covering `B` exactly.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::graph::{self, Mask};
use crate::model::{Alternative, Assignment, ClassId, Instance, Player, Slot};
use crate::outcome::{Concept, Method, SolveOutcome, Verdict};

/// Largest component size accepted by default.
pub const DEFAULT_COMPONENT_BOUND: usize = 6;

#[derive(Clone, Debug)]
struct LocalOption {
    q: u64,
    d: u64,
    // class per component member (same order as the component)
    classes: Vec<Option<ClassId>>,
}

struct Local<'a> {
    inst: &'a Instance,
    nbr: Vec<Mask>,
    comp: Vec<Player>,
    concept: Concept,
    current: Vec<Option<ClassId>>,
    options: HashMap<(u64, u64), LocalOption>,
    order: Vec<(u64, u64)>,
}

impl Local<'_> {
    fn pos(&self, i: Player) -> usize {
        self.comp
            .binary_search(&i)
            .expect("member of the component")
    }

    fn alt_of(&self, i: Player) -> Alternative {
        match self.current[self.pos(i)] {
            None => Alternative::Void,
            Some(c) => {
                let size = self.current.iter().filter(|&&x| x == Some(c)).count();
                Alternative::new(c, size)
            }
        }
    }

    fn walk(&mut self, unassigned: Mask, used: u64) {
        if unassigned == 0 {
            self.evaluate(used);
            return;
        }
        let v = unassigned.trailing_zeros() as usize;
        self.walk(unassigned & !graph::bit(v), used);
        let mut groups = Vec::new();
        graph::connected_subsets_rooted(&self.nbr, unassigned, v, self.comp.len(), &mut |s| {
            groups.push(s);
            true
        });
        for s in groups {
            let members = graph::players_of(s);
            for c in 0..self.inst.num_classes() {
                if used & (1 << c) != 0 {
                    continue;
                }
                let alt = Alternative::new(c, members.len());
                if members.iter().any(|&i| self.inst.rank(i, alt) < 0) {
                    continue;
                }
                for &i in &members {
                    let p = self.pos(i);
                    self.current[p] = Some(c);
                }
                self.walk(unassigned & !s, used | (1 << c));
                for &i in &members {
                    let p = self.pos(i);
                    self.current[p] = None;
                }
            }
        }
    }

    fn evaluate(&mut self, q: u64) {
        let p = self.inst.num_classes();
        let cur: Vec<i64> = self
            .comp
            .iter()
            .map(|&i| self.inst.rank(i, self.alt_of(i)))
            .collect();
        let mut d = 0u64;
        match self.concept {
            Concept::Nash => {
                for (pi, &i) in self.comp.iter().enumerate() {
                    for c in 0..p {
                        if q & (1 << c) != 0 {
                            if self.current[pi] == Some(c) {
                                continue;
                            }
                            let group: Vec<Player> = self
                                .comp
                                .iter()
                                .zip(&self.current)
                                .filter(|(_, &x)| x == Some(c))
                                .map(|(&j, _)| j)
                                .collect();
                            let adjacent = group.iter().any(|&j| self.inst.has_edge(i, j));
                            if adjacent && self.inst.rank_of(i, c, group.len() + 1) > cur[pi] {
                                return;
                            }
                        } else if self.inst.rank_of(i, c, 1) > cur[pi] {
                            d |= 1 << c;
                        }
                    }
                }
            }
            Concept::Core => {
                let all = graph::mask_of(&self.comp);
                let mut subsets = Vec::new();
                graph::connected_subsets(&self.nbr, all, self.comp.len(), &mut |s| {
                    subsets.push(s);
                    true
                });
                for s in subsets {
                    let members = graph::players_of(s);
                    for c in 0..p {
                        let alt = Alternative::new(c, members.len());
                        let blocks = members
                            .iter()
                            .all(|&i| self.inst.rank(i, alt) > cur[self.pos(i)]);
                        if !blocks {
                            continue;
                        }
                        if q & (1 << c) != 0 {
                            let contains = self
                                .comp
                                .iter()
                                .zip(&self.current)
                                .filter(|(_, &x)| x == Some(c))
                                .all(|(&j, _)| s & graph::bit(j) != 0);
                            if contains {
                                return;
                            }
                        } else {
                            d |= 1 << c;
                        }
                    }
                }
            }
            Concept::IndividualRationality => {}
        }
        let key = (q, d);
        if !self.options.contains_key(&key) {
            self.order.push(key);
            self.options.insert(
                key,
                LocalOption {
                    q,
                    d,
                    classes: self.current.clone(),
                },
            );
        }
    }
}

fn local_options(
    inst: &Instance,
    nbr: &[Mask],
    comp: &[Player],
    concept: Concept,
) -> Vec<LocalOption> {
    let mut local = Local {
        inst,
        nbr: nbr.to_vec(),
        comp: comp.to_vec(),
        concept,
        current: vec![None; comp.len()],
        options: HashMap::new(),
        order: Vec::new(),
    };
    local.walk(graph::mask_of(comp), 0);
    let Local { options, order, .. } = local;
    let mut options = options;
    order
        .into_iter()
        .map(|k| options.remove(&k).unwrap())
        .collect()
}

fn solve(inst: &Instance, concept: Concept, max_c: usize) -> Result<SolveOutcome> {
    let start = Instant::now();
    if !inst.all_single_copy() {
        return Err(Error::Inapplicable(
            "the components algorithm needs one copy per activity".into(),
        ));
    }
    if inst.n() > graph::MAX_MASK_PLAYERS {
        return Err(Error::BoundExceeded {
            what: "components dynamic program (players)",
            size: inst.n(),
            bound: graph::MAX_MASK_PLAYERS,
        });
    }
    let p = inst.num_classes();
    if p > 16 {
        return Err(Error::BoundExceeded {
            what: "components dynamic program (activities)",
            size: p,
            bound: 16,
        });
    }
    let comps = graph::components(inst);
    let c = comps.iter().map(Vec::len).max().unwrap_or(0);
    if c > max_c {
        return Err(Error::BoundExceeded {
            what: "components dynamic program (component size)",
            size: c,
            bound: max_c,
        });
    }
    let nbr = graph::neighbor_masks(inst);
    let options: Vec<Vec<LocalOption>> = comps
        .iter()
        .map(|comp| local_options(inst, &nbr, comp, concept))
        .collect();

    let nsets = 1usize << p;
    for b in 0..nsets as u64 {
        // reach[level][set] = (previous set, option index)
        let mut reach: Vec<Vec<Option<(u64, usize)>>> = vec![vec![None; nsets]; comps.len() + 1];
        reach[0][0] = Some((0, usize::MAX));
        for (lvl, opts) in options.iter().enumerate() {
            for prev in 0..nsets as u64 {
                if reach[lvl][prev as usize].is_none() {
                    continue;
                }
                for (oi, o) in opts.iter().enumerate() {
                    if o.q & !b != 0 || o.d & !b != 0 || o.q & prev != 0 {
                        continue;
                    }
                    let next = (prev | o.q) as usize;
                    if reach[lvl + 1][next].is_none() {
                        reach[lvl + 1][next] = Some((prev, oi));
                    }
                }
            }
        }
        if reach[comps.len()][b as usize].is_none() {
            continue;
        }
        let mut slots: Vec<Option<Slot>> = vec![None; inst.n()];
        let mut set = b;
        for lvl in (1..=comps.len()).rev() {
            let (prev, oi) = reach[lvl][set as usize].unwrap();
            let o = &options[lvl - 1][oi];
            for (&i, cls) in comps[lvl - 1].iter().zip(&o.classes) {
                slots[i] = cls.map(|c| Slot::new(c, 0));
            }
            set = prev;
        }
        let pi = Assignment::from_slots(slots);
        let ok = match concept {
            Concept::Core => {
                crate::stability::is_core_stable_bounded(inst, &pi, graph::MAX_MASK_PLAYERS)?
            }
            _ => crate::stability::is_stable(inst, &pi, concept)?,
        };
        if !ok {
            return Err(Error::Internal(
                "components dynamic program produced an unstable assignment".into(),
            ));
        }
        return Ok(SolveOutcome {
            verdict: Verdict::Found(pi),
            method: Method::Components,
            elapsed: start.elapsed(),
        });
    }
    Ok(SolveOutcome {
        verdict: Verdict::NoneExists,
        method: Method::Components,
        elapsed: start.elapsed(),
    })
}

/// Nash stability for graphs whose components have at most `max_c` players.
pub fn solve_ns_components(inst: &Instance, max_c: usize) -> Result<SolveOutcome> {
    solve(inst, Concept::Nash, max_c)
}

/// Core stability for graphs whose components have at most `max_c` players.
pub fn solve_core_components(inst: &Instance, max_c: usize) -> Result<SolveOutcome> {
    solve(inst, Concept::Core, max_c)
}
