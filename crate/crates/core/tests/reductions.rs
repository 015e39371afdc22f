use std::ops::ControlFlow;

use ggasp::oracle::{for_each_feasible_assignment, OracleOptions};
use ggasp::reductions::source::{max_rainbow_matching, min_maximal_matching};
use ggasp::reductions::{
    corpus, generate, solve_source, verify_reduction, witness, Family, ReductionSource,
    SourceAnswer,
};
use ggasp::stability::is_stable;
use ggasp::{classify_topology, Concept, Error, TopologyKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_edge_path() -> ReductionSource {
    ReductionSource::from_json_str(
        r#"{"type":"rainbow_path","vertices":["v1","v2","v3"],"colors":["c1","c2"],
            "edges":[["v1","v2","c1"],["v2","v3","c2"]],"k":1}"#,
    )
    .unwrap()
}

fn mmm(u: &[&str], v: &[&str], edges: &[[&str; 2]], k: usize) -> ReductionSource {
    ReductionSource::Mmm {
        u: u.iter().map(|s| s.to_string()).collect(),
        v: v.iter().map(|s| s.to_string()).collect(),
        edges: edges.iter().map(|e| e.map(String::from)).collect(),
        k,
    }
}

#[test]
fn gadget_sizes() {
    let src = two_edge_path();
    let ns = generate(&src, Concept::Nash).unwrap();
    assert_eq!((ns.instance.n(), ns.instance.num_classes()), (10, 2));
    assert_eq!(classify_topology(&ns.instance).kind, TopologyKind::Path);
    let core = generate(&src, Concept::Core).unwrap();
    assert_eq!((core.instance.n(), core.instance.num_classes()), (12, 4));
    assert_eq!(classify_topology(&core.instance).kind, TopologyKind::Path);

    let m = mmm(&["u1", "u2"], &["v1"], &[["u1", "v1"], ["u2", "v1"]], 1);
    let ns = generate(&m, Concept::Nash).unwrap();
    assert_eq!((ns.instance.n(), ns.instance.num_classes()), (3, 4));
    let a = ns.instance.class_id("a").unwrap();
    assert_eq!(ns.instance.rank_of(ns.player("v:v1"), a, 1), 1);
    let core = generate(&mmm(&["u1"], &["v1"], &[["u1", "v1"]], 1), Concept::Core).unwrap();
    assert_eq!((core.instance.n(), core.instance.num_classes()), (4, 4));
    assert_eq!(classify_topology(&core.instance).kind, TopologyKind::Star);

    let f = &corpus::sat3b2_pool()[0];
    let ns = generate(f, Concept::Nash).unwrap();
    assert_eq!((ns.instance.n(), ns.instance.num_classes()), (28, 25));
    assert_eq!(
        classify_topology(&ns.instance).kind,
        TopologyKind::SmallComponents { c: 4 }
    );
    let core = generate(f, Concept::Core).unwrap();
    assert_eq!((core.instance.n(), core.instance.num_classes()), (30, 27));
    assert_eq!(
        classify_topology(&core.instance).kind,
        TopologyKind::SmallComponents { c: 3 }
    );
}

#[test]
fn closed_form_counts_over_pools() {
    for src in corpus::rainbow_sources(5) {
        let ReductionSource::RainbowPath {
            vertices,
            colors,
            edges,
            k,
        } = &src
        else {
            unreachable!()
        };
        let (v, e, q) = (vertices.len(), edges.len(), colors.len());
        let ns = generate(&src, Concept::Nash).unwrap().instance;
        assert_eq!((ns.n(), ns.num_classes()), (v + e + q - k + 2 * q, q));
        let core = generate(&src, Concept::Core).unwrap().instance;
        assert_eq!(
            (core.n(), core.num_classes()),
            (v + e + q - k + 3 * q, 2 * q)
        );
        assert_eq!(classify_topology(&core).c, core.n());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let src = corpus::random_mmm_source(&mut rng, 4);
        let ReductionSource::Mmm { u, v, .. } = &src else {
            unreachable!()
        };
        let ns = generate(&src, Concept::Nash).unwrap().instance;
        assert_eq!((ns.n(), ns.num_classes()), (v.len() + 2, u.len() + 2));
        let core = generate(&src, Concept::Core).unwrap().instance;
        assert_eq!((core.n(), core.num_classes()), (v.len() + 3, u.len() + 3));
        assert!(matches!(
            classify_topology(&core).kind,
            TopologyKind::Star | TopologyKind::Path
        ));
    }
}

#[test]
fn source_solvers() {
    let src = two_edge_path();
    assert_eq!(
        solve_source(&src).unwrap(),
        SourceAnswer::MaxRainbowMatching(1)
    );
    assert_eq!(max_rainbow_matching(&src.rainbow().unwrap()).unwrap(), 1);
    let m = mmm(&["u1", "u2"], &["v1"], &[["u1", "v1"], ["u2", "v1"]], 1);
    assert_eq!(min_maximal_matching(&m.bipartite().unwrap()).unwrap().0, 1);
    // u1-v1-u2-v2-u3: {u2v1} is not maximal, {u2v1, u3v2} is
    let m = mmm(
        &["u1", "u2", "u3"],
        &["v1", "v2"],
        &[["u1", "v1"], ["u2", "v1"], ["u2", "v2"], ["u3", "v2"]],
        1,
    );
    assert_eq!(
        solve_source(&m).unwrap(),
        SourceAnswer::MinMaximalMatching(2)
    );
    assert!(!solve_source(&m).unwrap().is_yes(&m));
    for f in corpus::sat3b2_pool().iter().take(5) {
        assert_eq!(solve_source(f).unwrap(), SourceAnswer::Satisfiable(true));
    }
}

#[test]
fn invalid_sources_are_rejected() {
    let two_vars = ReductionSource::from_json_str(
        r#"{"type":"sat3b2","variables":["x","y"],"clauses":[["x","y","-x"],["-x","-y","x"]]}"#,
    );
    assert!(matches!(two_vars, Err(Error::InvalidSource(_))));
    let improper = ReductionSource::from_json_str(
        r#"{"type":"rainbow_path","vertices":["a","b","c"],"colors":["r"],
            "edges":[["a","b","r"],["b","c","r"]],"k":1}"#,
    );
    assert!(matches!(improper, Err(Error::InvalidSource(_))));
    let not_bipartite = mmm(&["u1"], &["u1"], &[["u1", "u1"]], 1);
    assert!(generate(&not_bipartite, Concept::Nash).is_err());
}

#[test]
fn rainbow_nash_equivalence_is_exhaustive() {
    let pool = corpus::rainbow_sources(6);
    assert!(pool.len() >= 200);
    for src in &pool {
        let r = verify_reduction(src, Concept::Nash, 64).unwrap();
        assert!(r.agrees(), "{src:?}");
    }
}

#[test]
fn rainbow_core_equivalence_small_paths() {
    for src in corpus::rainbow_sources(4) {
        let r = verify_reduction(&src, Concept::Core, 64).unwrap();
        assert!(r.agrees(), "{src:?}");
    }
}

#[test]
fn mmm_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let src = corpus::random_mmm_source(&mut rng, 4);
        for concept in [Concept::Nash, Concept::Core] {
            let r = verify_reduction(&src, concept, 64).unwrap();
            assert!(r.agrees(), "{src:?} {concept}");
        }
    }
}

#[test]
fn formula_witnesses_are_stable() {
    for src in corpus::sat3b2_pool() {
        for concept in [Concept::Nash, Concept::Core] {
            let r = verify_reduction(&src, concept, 64).unwrap();
            assert_eq!(r.witness_stable, Some(true), "{src:?} {concept}");
        }
    }
}

#[test]
fn stalker_pairs_never_get_a_color() {
    for src in corpus::rainbow_sources(3) {
        let gen = generate(&src, Concept::Nash).unwrap();
        let inst = &gen.instance;
        let stalkers: Vec<usize> = (0..inst.n())
            .filter(|&i| gen.labels[i].starts_with("s1:") || gen.labels[i].starts_with("s2:"))
            .collect();
        let mut seen = 0;
        for_each_feasible_assignment(
            inst,
            OracleOptions::stable_search(64, Concept::Nash),
            |pi| {
                if is_stable(inst, pi, Concept::Nash).unwrap() {
                    seen += 1;
                    assert!(stalkers.iter().all(|&s| pi.get(s).is_none()));
                }
                ControlFlow::Continue(())
            },
        )
        .unwrap();
        let yes = solve_source(&src).unwrap().is_yes(&src);
        assert_eq!(seen > 0, yes);
    }
}

#[test]
fn witness_round_trip_through_files() {
    let src = two_edge_path();
    let gen = generate(&src, Concept::Nash).unwrap();
    let file = gen.to_file(&src);
    let prov = file.provenance.as_ref().unwrap();
    assert_eq!(prov["family"], "ns-path-rainbow");
    assert_eq!(prov["players"].as_array().unwrap().len(), 10);
    let rebuilt = file.build().unwrap();
    assert_eq!(rebuilt, gen.instance);
    let pi = witness(&src, &gen).unwrap().unwrap();
    assert!(is_stable(&rebuilt, &pi, Concept::Nash).unwrap());
    assert_eq!(
        "core-star-mmm".parse::<Family>().unwrap(),
        Family::CoreStarMmm
    );
}
