use ggasp::fpt::{self, StarMode};
use ggasp::oracle::oracle_find_stable;
use ggasp::sampler::{random_instance, PrefModel, SamplerConfig, Shape};
use ggasp::stability::{is_core_stable, is_nash_stable};
use ggasp::tree;
use ggasp::{Concept, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(rng: &mut ChaCha8Rng, n: usize, p: usize, copies: usize, shape: Shape) -> Instance {
    let cfg = SamplerConfig {
        n,
        p,
        copies,
        shape,
        prefs: PrefModel::Uniform { lo: -2, hi: 3 },
    };
    random_instance(rng, &cfg)
}

fn expect(inst: &Instance, concept: Concept) -> bool {
    oracle_find_stable(inst, concept).unwrap().is_found()
}

#[test]
fn path_dp_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0..=3);
        let inst = sample(&mut rng, n, p, 1, Shape::Path);
        let got = fpt::solve_ns_path(&inst).unwrap();
        assert_eq!(
            got.is_found(),
            expect(&inst, Concept::Nash),
            "{}",
            inst.to_json_string()
        );
        if let Some(pi) = got.assignment() {
            assert!(is_nash_stable(&inst, pi).unwrap());
        }
    }
}

#[test]
fn star_color_coding_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0..=3);
        let inst = sample(&mut rng, n, p, 1, Shape::Star);
        let got = fpt::solve_ns_star(&inst, StarMode::Derandomized).unwrap();
        assert_eq!(
            got.is_found(),
            expect(&inst, Concept::Nash),
            "{}",
            inst.to_json_string()
        );
    }
}

#[test]
fn components_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=3);
        let n = c * k;
        let p = rng.gen_range(0..=3);
        let inst = sample(&mut rng, n, p, 1, Shape::Components { c, k, extra: 0.5 });
        let ns = fpt::solve_ns_components(&inst, 6).unwrap();
        assert_eq!(
            ns.is_found(),
            expect(&inst, Concept::Nash),
            "{}",
            inst.to_json_string()
        );
        let core = fpt::solve_core_components(&inst, 6).unwrap();
        assert_eq!(
            core.is_found(),
            expect(&inst, Concept::Core),
            "{}",
            inst.to_json_string()
        );
    }
}

#[test]
fn copyable_forests_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(1..=2);
        let inst = sample(&mut rng, n, p, n, Shape::Forest { cut: 0.3 });
        let ns = tree::solve_ns_copyable_forest(&inst).unwrap();
        assert_eq!(
            ns.is_found(),
            expect(&inst, Concept::Nash),
            "{}",
            inst.to_json_string()
        );
        let core = tree::solve_core_copyable_forest(&inst).unwrap();
        assert!(is_core_stable(&inst, core.assignment().unwrap()).unwrap());
    }
}
