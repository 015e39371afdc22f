//! Runtime scaling harness over random instances.

use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fpt::{self, StarMode};
use crate::model::{classify_topology, Instance};
use crate::outcome::SolveOutcome;
use crate::sampler::{random_instance, PrefModel, SamplerConfig, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Paths,
    Stars,
    Components,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paths" => Ok(Suite::Paths),
            "stars" => Ok(Suite::Stars),
            "components" => Ok(Suite::Components),
            other => Err(format!(
                "unknown suite `{other}` (expected paths, stars or components)"
            )),
        }
    }
}

/// Component size used by the components suite.
pub const BENCH_COMPONENT_SIZE: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub suite: Suite,
    pub ps: Vec<usize>,
    pub ns: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    pub prefs: PrefModel,
    /// Worker threads; 1 runs inline.
    pub workers: usize,
}

impl BenchConfig {
    pub fn new(
        suite: Suite,
        ps: Vec<usize>,
        ns: Vec<usize>,
        repetitions: usize,
        seed: u64,
    ) -> Self {
        BenchConfig {
            suite,
            ps,
            ns,
            repetitions,
            seed,
            prefs: PrefModel::default(),
            workers: 1,
        }
    }

    /// Instance ids in order: `(n, p, repetition)`, repetition fastest.
    fn jobs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &p in &self.ps {
                for rep in 0..self.repetitions {
                    out.push((n, p, rep));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: usize,
    pub method: String,
    pub n: usize,
    pub p: usize,
    pub c: usize,
    pub elapsed_secs: f64,
    pub verdict: String,
}

/// The instance with the given id; depends only on the seed and the id.
pub fn bench_instance(cfg: &BenchConfig, id: usize, n: usize, p: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(id as u64);
    let shape = match cfg.suite {
        Suite::Paths => Shape::Path,
        Suite::Stars => Shape::Star,
        Suite::Components => Shape::Components {
            c: BENCH_COMPONENT_SIZE.min(n),
            k: n.div_ceil(BENCH_COMPONENT_SIZE),
            extra: 0.3,
        },
    };
    let sampler = SamplerConfig {
        n,
        p,
        copies: 1,
        shape,
        prefs: cfg.prefs,
    };
    random_instance(&mut rng, &sampler)
}

fn record(id: usize, method: &str, inst: &Instance, p: usize, out: SolveOutcome) -> BenchRecord {
    BenchRecord {
        instance: id,
        method: method.to_string(),
        n: inst.n(),
        p,
        c: classify_topology(inst).c,
        elapsed_secs: out.elapsed.as_secs_f64(),
        verdict: out.status().to_string(),
    }
}

fn run_job(cfg: &BenchConfig, id: usize, n: usize, p: usize) -> Result<Vec<BenchRecord>> {
    let inst = bench_instance(cfg, id, n, p);
    Ok(match cfg.suite {
        Suite::Paths => vec![record(id, "path", &inst, p, fpt::solve_ns_path(&inst)?)],
        Suite::Stars => {
            let det = fpt::solve_ns_star(&inst, StarMode::Derandomized)?;
            let rand_mode = StarMode::Randomized {
                seed: cfg.seed ^ id as u64,
                trials: None,
            };
            let rnd = fpt::solve_ns_star(&inst, rand_mode)?;
            vec![
                record(id, "star-derandomized", &inst, p, det),
                record(id, "star-randomized", &inst, p, rnd),
            ]
        }
        Suite::Components => vec![record(
            id,
            "components",
            &inst,
            p,
            fpt::solve_ns_components(&inst, BENCH_COMPONENT_SIZE)?,
        )],
    })
}

/// Runs every job, sorted by `(instance, method)`. Everything but
/// `elapsed_secs` is a function of the config.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let jobs = cfg.jobs();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let work = || -> Result<()> {
        loop {
            let id = next.fetch_add(1, Ordering::Relaxed);
            let Some(&(n, p, _)) = jobs.get(id) else {
                return Ok(());
            };
            let recs = run_job(cfg, id, n, p)?;
            results.lock().expect("bench results lock").extend(recs);
        }
    };
    if cfg.workers <= 1 {
        work()?;
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..cfg.workers).map(|_| s.spawn(work)).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench worker panicked"))
                .collect::<Result<Vec<()>>>()
        })?;
    }
    let mut out = results.into_inner().expect("bench results lock");
    out.sort_by(|a, b| (a.instance, &a.method).cmp(&(b.instance, &b.method)));
    Ok(out)
}

/// Median of the elapsed times of the records matching `keep`.
pub fn median_secs(records: &[BenchRecord], keep: impl Fn(&BenchRecord) -> bool) -> Option<f64> {
    let mut xs: Vec<f64> = records
        .iter()
        .filter(|r| keep(r))
        .map(|r| r.elapsed_secs)
        .collect();
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let mut cfg = BenchConfig::new(Suite::Paths, vec![1, 2], vec![8, 12], 3, 9);
        let a = run_bench(&cfg).unwrap();
        assert_eq!(a.len(), 12);
        cfg.workers = 4;
        let b = run_bench(&cfg).unwrap();
        let strip = |r: &[BenchRecord]| {
            r.iter()
                .map(|r| {
                    (
                        r.instance,
                        r.method.clone(),
                        r.n,
                        r.p,
                        r.c,
                        r.verdict.clone(),
                    )
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(
            bench_instance(&cfg, 5, 12, 2),
            bench_instance(&cfg, 5, 12, 2)
        );
    }

    #[test]
    fn stars_record_both_modes() {
        let cfg = BenchConfig::new(Suite::Stars, vec![2], vec![6], 2, 1);
        let recs = run_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 4);
        let comps =
            run_bench(&BenchConfig::new(Suite::Components, vec![2], vec![9], 2, 1)).unwrap();
        assert!(comps.iter().all(|r| r.c <= BENCH_COMPONENT_SIZE));
    }

    #[test]
    fn median() {
        let r = |t| BenchRecord {
            instance: 0,
            method: "path".into(),
            n: 1,
            p: 1,
            c: 1,
            elapsed_secs: t,
            verdict: "FOUND".into(),
        };
        assert_eq!(median_secs(&[r(3.0), r(1.0), r(2.0)], |_| true), Some(2.0));
        assert_eq!(median_secs(&[r(4.0), r(1.0)], |_| true), Some(2.5));
    }
}
