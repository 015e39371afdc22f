use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ggasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggasp"))
        .args(args)
        .env_remove("GGASP_MAX_ORACLE_N")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn fixture(&self, name: &str) -> String {
        let p = self.path(&format!("{name}.json"));
        let out = ggasp(&["fixture", name, "--out", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        p.to_str().unwrap().to_string()
    }
}

const B_B_VOID: &str = r#"{"assignment":[{"player":0,"activity":"b"},{"player":1,"activity":"b"},{"player":2,"activity":null}]}"#;

#[test]
fn check_reports_and_exit_codes() {
    let w = Work::new();
    let ec = w.fixture("empty-core");
    let pi = w.write("pi.json", B_B_VOID);

    let out = ggasp(&[
        "check",
        "--instance",
        &ec,
        "--assignment",
        &pi,
        "--concept",
        "nash",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["stable"], true);

    let out = ggasp(&[
        "check",
        "--instance",
        &ec,
        "--assignment",
        &pi,
        "--concept",
        "core",
    ]);
    assert_eq!(code(&out), 3);
    let rep = stdout_json(&out);
    assert_eq!(rep["core_witness"]["coalition"], serde_json::json!([1, 2]));
    assert_eq!(rep["core_witness"]["activity"], "a");

    let truncated = w.write("bad.json", r#"{"assignment":[{"player":0,"#);
    let out = ggasp(&["check", "--instance", &ec, "--assignment", &truncated]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn solve_exit_codes() {
    let w = Work::new();
    let st = w.fixture("stalker");
    let ec = w.fixture("empty-core");
    assert_eq!(
        code(&ggasp(&["solve", "--instance", &st, "--concept", "nash"])),
        2
    );
    assert_eq!(
        code(&ggasp(&[
            "solve",
            "--instance",
            &ec,
            "--concept",
            "core",
            "--method",
            "oracle"
        ])),
        2
    );
    let out = ggasp(&[
        "solve",
        "--instance",
        &ec,
        "--concept",
        "nash",
        "--method",
        "path",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["assignment"].as_array().unwrap().len(), 3);
    // the copyable-forest solvers need copyable activities
    assert_eq!(
        code(&ggasp(&[
            "solve",
            "--instance",
            &ec,
            "--method",
            "forest-copyable"
        ])),
        1
    );
    assert_eq!(
        code(&ggasp(&["solve", "--instance", &ec, "--method", "nope"])),
        1
    );
}

#[test]
fn solved_assignments_pass_check() {
    let w = Work::new();
    let ec = w.fixture("empty-core");
    let copyable = w.path("copyable.json");
    let out = ggasp(&[
        "fixture",
        "empty-core",
        "--copies",
        "3",
        "--out",
        copyable.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let copyable = copyable.to_str().unwrap();
    for (inst, concept) in [
        (ec.as_str(), "nash"),
        (ec.as_str(), "ir"),
        (copyable, "core"),
        (copyable, "nash"),
    ] {
        let pi = w.path("solved.json");
        let out = ggasp(&[
            "solve",
            "--instance",
            inst,
            "--concept",
            concept,
            "--out",
            pi.to_str().unwrap(),
        ]);
        assert_eq!(
            code(&out),
            0,
            "{inst} {concept}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let check = ggasp(&[
            "check",
            "--instance",
            inst,
            "--assignment",
            pi.to_str().unwrap(),
            "--concept",
            concept,
        ]);
        assert_eq!(code(&check), 0);
    }
}

#[test]
fn oracle_bound_flag_and_env() {
    let w = Work::new();
    let ec = w.fixture("empty-core");
    let out = ggasp(&[
        "solve",
        "--instance",
        &ec,
        "--method",
        "oracle",
        "--max-oracle-n",
        "2",
    ]);
    assert_eq!(code(&out), 1);
    let out = Command::new(env!("CARGO_BIN_EXE_ggasp"))
        .args(["solve", "--instance", &ec, "--method", "oracle"])
        .env("GGASP_MAX_ORACLE_N", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the bound 2"));
}

fn generated(w: &Work, family: &str, source: &str) -> (i32, Option<serde_json::Value>) {
    let src = w.write("source.json", source);
    let out_path = w.path("generated.json");
    let out = ggasp(&[
        "generate",
        "--family",
        family,
        "--source",
        &src,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let file = fs::read_to_string(&out_path)
        .ok()
        .map(|t| serde_json::from_str(&t).unwrap());
    let _ = fs::remove_file(&out_path);
    (code(&out), file)
}

#[test]
fn generate_families() {
    let w = Work::new();
    let rainbow = r#"{"type":"rainbow_path","vertices":["v1","v2","v3"],"colors":["c1","c2"],
        "edges":[["v1","v2","c1"],["v2","v3","c2"]],"k":1}"#;
    let (c, file) = generated(&w, "ns-path-rainbow", rainbow);
    assert_eq!(c, 0);
    let file = file.unwrap();
    assert_eq!(file["players"], 10);
    assert_eq!(file["provenance"]["family"], "ns-path-rainbow");

    let mmm = r#"{"type":"mmm","u":["u1"],"v":["v1"],"edges":[["u1","v1"]],"k":1}"#;
    let (c, file) = generated(&w, "core-star-mmm", mmm);
    assert_eq!(c, 0);
    let file = file.unwrap();
    assert_eq!(file["players"], 4);
    assert_eq!(file["activities"].as_array().unwrap().len(), 4);

    let two_vars =
        r#"{"type":"sat3b2","variables":["x","y"],"clauses":[["x","y","-x"],["-x","-y","x"]]}"#;
    assert_eq!(generated(&w, "ns-components-3sat", two_vars).0, 1);
    // family and source kind must match
    assert_eq!(generated(&w, "ns-star-mmm", rainbow).0, 1);
}

#[test]
fn generated_instance_solves_like_its_source() {
    let w = Work::new();
    let rainbow = r#"{"type":"rainbow_path","vertices":["v1","v2","v3"],"colors":["c1","c2"],
        "edges":[["v1","v2","c1"],["v2","v3","c2"]],"k":2}"#;
    let src = w.write("source.json", rainbow);
    let inst = w.path("inst.json");
    let out = ggasp(&[
        "generate",
        "--family",
        "ns-path-rainbow",
        "--source",
        &src,
        "--out",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // the two edges are adjacent, so no rainbow matching of size 2
    assert_eq!(
        code(&ggasp(&["solve", "--instance", inst.to_str().unwrap()])),
        2
    );
}

fn bench(w: &Work, name: &str, extra: &[&str]) -> String {
    let out_path = w.path(name);
    let mut args = vec!["bench", "--out", out_path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = ggasp(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    fs::read_to_string(out_path).unwrap()
}

fn strip_times(csv_text: &str) -> Vec<String> {
    csv_text
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            [&cols[..5], &cols[6..]].concat().join(",")
        })
        .collect()
}

#[test]
fn bench_shape_and_reproducibility() {
    let w = Work::new();
    let args = [
        "--suite",
        "paths",
        "--p",
        "1..6",
        "--n",
        "12",
        "--repetitions",
        "2",
        "--seed",
        "4",
    ];
    let a = bench(&w, "a.csv", &args);
    assert_eq!(a.lines().count(), 1 + 6 * 2);
    assert!(a.starts_with("instance,method,n,p,c,elapsed_secs,verdict"));
    let mut parallel = args.to_vec();
    parallel.extend(["--workers", "3"]);
    let b = bench(&w, "b.csv", &parallel);
    assert_eq!(strip_times(&a), strip_times(&b));

    let json = bench(
        &w,
        "stars.json",
        &[
            "--suite",
            "stars",
            "--p",
            "2",
            "--n",
            "6",
            "--repetitions",
            "3",
        ],
    );
    let recs: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(recs.as_array().unwrap().len(), 6);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ggasp(&["frobnicate"])), 1);
    assert_eq!(code(&ggasp(&["solve"])), 1);
    assert_eq!(code(&ggasp(&["--help"])), 0);
    let missing = Path::new("/nonexistent/instance.json");
    assert_eq!(
        code(&ggasp(&["solve", "--instance", missing.to_str().unwrap()])),
        1
    );
}
