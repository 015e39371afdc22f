//! Exhaustive ground truth for desk-scale instances.
//!
//! Assignments are generated group by group: the smallest unassigned player
//! either stays void or founds a connected group among the unassigned
//! players (with itself as smallest member) for some class that still has a
//! copy left. Copies are numbered in order of first use, so every feasible
//! assignment appears exactly once up to copy relabelling.

use std::ops::ControlFlow;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::graph::{self, Mask};
use crate::model::{Alternative, Assignment, Instance, Slot};
use crate::outcome::{Concept, Method, SolveOutcome, Verdict};
use crate::stability;

/// Default player bound for enumeration.
pub const DEFAULT_ORACLE_BOUND: usize = 10;

/// Environment variable that overrides [`DEFAULT_ORACLE_BOUND`].
pub const ORACLE_BOUND_ENV: &str = "GGASP_MAX_ORACLE_N";

/// The enumeration bound in effect: `GGASP_MAX_ORACLE_N` when set to a
/// number, otherwise [`DEFAULT_ORACLE_BOUND`].
pub fn default_oracle_bound() -> usize {
    std::env::var(ORACLE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_n: usize,
    /// Skip groups in which some member prefers staying alone.
    pub ir_only: bool,
    /// With `ir_only`, also skip partial assignments that already contain
    /// a deviation (Nash) or a blocking coalition (core) no completion can
    /// remove.
    pub prune: Option<Concept>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_n: default_oracle_bound(),
            ir_only: false,
            prune: None,
        }
    }
}

impl OracleOptions {
    pub fn with_bound(max_n: usize) -> Self {
        OracleOptions {
            max_n,
            ..Default::default()
        }
    }

    /// Settings used by the stable-outcome searches.
    pub fn stable_search(max_n: usize, concept: Concept) -> Self {
        OracleOptions {
            max_n,
            ir_only: true,
            prune: (concept != Concept::IndividualRationality).then_some(concept),
        }
    }
}

struct Walker<'a, F> {
    inst: &'a Instance,
    nbr: Vec<Mask>,
    ir_only: bool,
    prune: Option<Concept>,
    slots: Vec<Option<Slot>>,
    groups: Vec<(Mask, usize)>,
    used: Vec<usize>,
    visit: F,
}

impl<F> Walker<'_, F>
where
    F: FnMut(&Assignment) -> ControlFlow<()>,
{
    fn run(&mut self, unassigned: Mask) -> ControlFlow<()> {
        if self.doomed(unassigned) {
            return ControlFlow::Continue(());
        }
        if unassigned == 0 {
            return (self.visit)(&Assignment::from_slots(self.slots.clone()));
        }
        let v = unassigned.trailing_zeros() as usize;
        self.run(unassigned & !graph::bit(v))?;

        let mut groups = Vec::new();
        graph::connected_subsets_rooted(&self.nbr, unassigned, v, self.inst.n(), &mut |s| {
            groups.push(s);
            true
        });
        for s in groups {
            let members = graph::players_of(s);
            for class in 0..self.inst.num_classes() {
                if self.used[class] >= self.inst.copies(class) {
                    continue;
                }
                let alt = Alternative::new(class, members.len());
                if self.ir_only && members.iter().any(|&i| self.inst.rank(i, alt) < 0) {
                    continue;
                }
                let slot = Slot::new(class, self.used[class]);
                for &i in &members {
                    self.slots[i] = Some(slot);
                }
                self.used[class] += 1;
                self.groups.push((s, class));
                let flow = self.run(unassigned & !s);
                self.groups.pop();
                self.used[class] -= 1;
                for &i in &members {
                    self.slots[i] = None;
                }
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

impl<F> Walker<'_, F> {
    // Some copy of `class` stays empty in every IR completion.
    fn spare_forever(&self, class: usize, unassigned: Mask) -> bool {
        let inst = self.inst;
        let used = self.used[class];
        if used >= inst.copies(class) {
            return false;
        }
        used + (unassigned.count_ones() as usize) < inst.copies(class)
            || graph::players_of(unassigned)
                .into_iter()
                .all(|u| (1..=inst.n()).all(|k| inst.rank_of(u, class, k) < 0))
    }

    fn current_rank(&self, i: usize) -> i64 {
        let size = |slot| self.slots.iter().filter(|&&s| s == Some(slot)).count();
        match self.slots[i] {
            None => 0,
            Some(slot) => self.inst.rank_of(i, slot.class, size(slot)),
        }
    }

    // Groups are created whole, so every placed group and every decided
    // player is final.
    fn doomed(&self, unassigned: Mask) -> bool {
        let Some(concept) = self.prune.filter(|_| self.ir_only) else {
            return false;
        };
        let inst = self.inst;
        let n = inst.n();
        let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let assigned = all & !unassigned;
        if assigned == 0 {
            return false;
        }
        let cur: Vec<i64> = (0..n)
            .map(|i| {
                if assigned & graph::bit(i) != 0 {
                    self.current_rank(i)
                } else {
                    0
                }
            })
            .collect();
        let spare: Vec<bool> = (0..inst.num_classes())
            .map(|c| self.spare_forever(c, unassigned))
            .collect();
        match concept {
            Concept::IndividualRationality => false,
            Concept::Nash => graph::players_of(assigned).into_iter().any(|i| {
                let joins = self.groups.iter().any(|&(g, class)| {
                    g & graph::bit(i) == 0
                        && self.nbr[i] & g != 0
                        && inst.rank_of(i, class, g.count_ones() as usize + 1) > cur[i]
                });
                let alone =
                    (0..inst.num_classes()).any(|c| spare[c] && inst.rank_of(i, c, 1) > cur[i]);
                joins || alone
            }),
            Concept::Core => (0..inst.num_classes()).any(|class| {
                let hopeful: Mask = graph::players_of(assigned)
                    .into_iter()
                    .filter(|&i| (1..=n).any(|k| inst.rank_of(i, class, k) > cur[i]))
                    .fold(0, |m, i| m | graph::bit(i));
                if hopeful == 0 {
                    return false;
                }
                // returns false (stop) on a blocking coalition
                let mut check = |s: Mask| {
                    let k = s.count_ones() as usize;
                    !graph::players_of(s)
                        .into_iter()
                        .all(|i| inst.rank_of(i, class, k) > cur[i])
                };
                if spare[class] {
                    !graph::connected_subsets(&self.nbr, hopeful, n, &mut check)
                } else {
                    self.groups.iter().any(|&(g, c)| {
                        c == class
                            && g & !hopeful == 0
                            && !graph::connected_supersets(&self.nbr, hopeful, g, n, &mut check)
                    })
                }
            }),
        }
    }
}

fn check_bound(inst: &Instance, max_n: usize) -> Result<()> {
    let bound = max_n.min(graph::MAX_MASK_PLAYERS);
    if inst.n() > bound {
        return Err(Error::BoundExceeded {
            what: "oracle enumeration",
            size: inst.n(),
            bound,
        });
    }
    Ok(())
}

/// Streams every feasible assignment (canonical copy indices) to `visit`
/// until it breaks.
pub fn for_each_feasible_assignment<F>(inst: &Instance, opts: OracleOptions, visit: F) -> Result<()>
where
    F: FnMut(&Assignment) -> ControlFlow<()>,
{
    check_bound(inst, opts.max_n)?;
    let mut w = Walker {
        inst,
        nbr: graph::neighbor_masks(inst),
        ir_only: opts.ir_only,
        prune: opts.prune,
        slots: vec![None; inst.n()],
        groups: Vec::new(),
        used: vec![0; inst.num_classes()],
        visit,
    };
    let all = if inst.n() == 64 {
        !0
    } else {
        (1u64 << inst.n()) - 1
    };
    let _ = w.run(all);
    Ok(())
}

/// Every feasible assignment, collected. Gated by the default bound.
pub fn enumerate_feasible_assignments(inst: &Instance) -> Result<Vec<Assignment>> {
    enumerate_feasible_assignments_with(inst, OracleOptions::default())
}

pub fn enumerate_feasible_assignments_with(
    inst: &Instance,
    opts: OracleOptions,
) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for_each_feasible_assignment(inst, opts, |pi| {
        out.push(pi.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

// Stability of an assignment already known to be feasible and IR.
fn stable_given_ir(inst: &Instance, pi: &Assignment, concept: Concept) -> Result<bool> {
    Ok(match concept {
        Concept::IndividualRationality => true,
        Concept::Nash => stability::find_ns_deviation(inst, pi).is_none(),
        Concept::Core => stability::find_block(inst, pi, graph::MAX_MASK_PLAYERS)?.is_none(),
    })
}

/// First stable assignment in enumeration order, or `NoneExists`.
pub fn oracle_find_stable(inst: &Instance, concept: Concept) -> Result<SolveOutcome> {
    oracle_find_stable_with(inst, concept, default_oracle_bound())
}

pub fn oracle_find_stable_with(
    inst: &Instance,
    concept: Concept,
    max_n: usize,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    let mut found = None;
    let mut err = None;
    let opts = OracleOptions::stable_search(max_n, concept);
    for_each_feasible_assignment(inst, opts, |pi| match stable_given_ir(inst, pi, concept) {
        Ok(true) => {
            found = Some(pi.clone());
            ControlFlow::Break(())
        }
        Ok(false) => ControlFlow::Continue(()),
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(())
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(SolveOutcome {
        verdict: found.map_or(Verdict::NoneExists, Verdict::Found),
        method: Method::Oracle,
        elapsed: start.elapsed(),
    })
}

/// Number of stable assignments up to copy relabelling.
pub fn oracle_count_stable(inst: &Instance, concept: Concept) -> Result<u64> {
    oracle_count_stable_with(inst, concept, default_oracle_bound())
}

pub fn oracle_count_stable_with(inst: &Instance, concept: Concept, max_n: usize) -> Result<u64> {
    let mut count = 0;
    let mut err = None;
    let opts = OracleOptions::stable_search(max_n, concept);
    for_each_feasible_assignment(inst, opts, |pi| match stable_given_ir(inst, pi, concept) {
        Ok(stable) => {
            count += stable as u64;
            ControlFlow::Continue(())
        }
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(())
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceBuilder;
    use crate::reductions::fixtures::{empty_core, stalker};

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_feasible_assignments(&stalker(1)).unwrap().len(),
            4
        );
        let single = InstanceBuilder::new(1).class("a", 1).build().unwrap();
        assert_eq!(enumerate_feasible_assignments(&single).unwrap().len(), 2);
        let path = InstanceBuilder::new(3)
            .class("a", 1)
            .edge(0, 1)
            .edge(1, 2)
            .build()
            .unwrap();
        assert_eq!(enumerate_feasible_assignments(&path).unwrap().len(), 7);
    }

    #[test]
    fn copies_are_canonical() {
        // two isolated players, two copies: {void,void}, {a0,void}, {void,a0}, {a0,a1}
        let inst = InstanceBuilder::new(2).class("a", 2).build().unwrap();
        let all = enumerate_feasible_assignments(&inst).unwrap();
        assert_eq!(all.len(), 4);
        for pi in &all {
            assert_eq!(&pi.canonical(), pi);
        }
    }

    #[test]
    fn bound_is_enforced() {
        let big = InstanceBuilder::new(11).build().unwrap();
        assert!(matches!(
            enumerate_feasible_assignments_with(&big, OracleOptions::with_bound(10)),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(enumerate_feasible_assignments_with(&big, OracleOptions::with_bound(11)).is_ok());
    }

    #[test]
    fn fixtures() {
        assert_eq!(
            oracle_count_stable(&empty_core(), Concept::Core).unwrap(),
            0
        );
        assert_eq!(oracle_count_stable(&stalker(1), Concept::Nash).unwrap(), 0);
        let found = oracle_find_stable(&empty_core(), Concept::Nash).unwrap();
        let pi = found.assignment().unwrap();
        assert!(stability::is_nash_stable(&empty_core(), pi).unwrap());
        let one = InstanceBuilder::new(1)
            .class("a", 1)
            .rank(0, "a", 1, 1)
            .build()
            .unwrap();
        assert_eq!(oracle_count_stable(&one, Concept::Nash).unwrap(), 1);
    }

    #[test]
    fn ir_count_includes_all_void() {
        // five IR assignments: the four usually listed plus all-void
        assert_eq!(
            oracle_count_stable(&empty_core(), Concept::IndividualRationality).unwrap(),
            5
        );
    }

    #[test]
    fn pruning_keeps_every_stable_assignment() {
        use crate::sampler::{random_instance, PrefModel, SamplerConfig, Shape};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for round in 0..150 {
            let shape = [Shape::Path, Shape::Star, Shape::Connected { extra: 0.3 }][round % 3];
            let copies = if round % 4 == 0 { 2 } else { 1 };
            let cfg = SamplerConfig {
                n: 3 + round % 4,
                p: 1 + round % 3,
                copies,
                shape,
                prefs: PrefModel::Uniform { lo: -1, hi: 2 },
            };
            let inst = random_instance(&mut rng, &cfg);
            for concept in [Concept::Nash, Concept::Core] {
                let all = enumerate_feasible_assignments(&inst).unwrap();
                let brute = all
                    .iter()
                    .filter(|pi| stability::is_stable(&inst, pi, concept).unwrap())
                    .count() as u64;
                assert_eq!(oracle_count_stable(&inst, concept).unwrap(), brute);
            }
        }
    }
}
