use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ggasp::bench::{run_bench, BenchConfig, BenchRecord, Suite};
use ggasp::fpt::StarMode;
use ggasp::oracle::{DEFAULT_ORACLE_BOUND, ORACLE_BOUND_ENV};
use ggasp::reductions::fixtures::{fixture, Fixture};
use ggasp::reductions::{generate, Family, ReductionSource};
use ggasp::solve::{solve, MethodChoice, SolveOptions};
use ggasp::stability::{report, DEFAULT_BLOCK_BOUND};
use ggasp::{Assignment, Concept, Instance, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NONE: u8 = 2;
const EXIT_VIOLATED: u8 = 3;

/// Stability checking, solving and instance generation for group activity
/// selection on social networks.
///
/// Exit codes: 0 stable / found / done, 1 error, 2 no stable outcome
/// exists, 3 the assignment violates the concept.
#[derive(Parser, Debug)]
#[command(name = "ggasp", version)]
struct Cli {
    /// Player bound for exhaustive search.
    #[arg(long, global = true, env = ORACLE_BOUND_ENV, default_value_t = DEFAULT_ORACLE_BOUND)]
    max_oracle_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an assignment; prints a JSON report.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long, default_value = "nash")]
        concept: Concept,
    },
    /// Find a stable assignment.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "nash")]
        concept: Concept,
        /// auto, oracle, path, star, components or forest-copyable.
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// Seed for randomized color coding on stars.
        #[arg(long)]
        seed: Option<u64>,
        /// Use the deterministic coloring family on stars.
        #[arg(long)]
        derandomize: bool,
        /// Where to write the assignment; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an instance from a reduction source file.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the textbook instances.
    Fixture {
        /// empty-core or stalker.
        name: Fixture,
        /// Copies of every activity.
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time solvers on random instances; writes CSV, or JSON for `.json`.
    Bench {
        #[arg(long, default_value = "paths")]
        suite: Suite,
        /// Activity counts, e.g. `3`, `1..6` or `1,2,4`.
        #[arg(long, default_value = "1..4")]
        p: String,
        /// Player counts, same syntax.
        #[arg(long, default_value = "20,40")]
        n: String,
        #[arg(long, default_value_t = 20)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    Instance::from_json_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// `3`, `1..6` (inclusive), `1-6` or `1,2,4`.
fn parse_range(s: &str) -> CliResult<Vec<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad number `{t}` in `{s}`"))
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((a, b)) = part.split_once("..").or_else(|| part.split_once('-')) {
            let b = b.trim_start_matches('=');
            out.extend(num(a)?..=num(b)?);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(format!("empty range `{s}`"));
    }
    Ok(out)
}

fn block_bound(max_oracle_n: usize) -> usize {
    max_oracle_n.max(DEFAULT_BLOCK_BOUND)
}

fn cmd_check(inst_path: &Path, pi_path: &Path, concept: Concept, max_n: usize) -> CliResult<u8> {
    let inst = load_instance(inst_path)?;
    let pi = Assignment::from_json_str(&inst, &read(pi_path)?)
        .map_err(|e| format!("{}: {e}", pi_path.display()))?;
    let rep = report(&inst, &pi, concept, block_bound(max_n)).map_err(|e| e.to_string())?;
    println!(
        "{}",
        serde_json::to_string_pretty(&rep.to_json(&inst)).expect("report serializes")
    );
    Ok(if rep.stable { EXIT_OK } else { EXIT_VIOLATED })
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    inst_path: &Path,
    concept: Concept,
    method: MethodChoice,
    seed: Option<u64>,
    derandomize: bool,
    out: Option<&Path>,
    max_n: usize,
) -> CliResult<u8> {
    let inst = load_instance(inst_path)?;
    let star_mode = match (seed, derandomize) {
        (Some(seed), false) => StarMode::Randomized { seed, trials: None },
        _ => StarMode::Derandomized,
    };
    let opts = SolveOptions {
        max_oracle_n: max_n,
        star_mode,
        ..Default::default()
    };
    let outcome = solve(&inst, concept, method, &opts).map_err(|e| e.to_string())?;
    eprintln!(
        "{} via {} in {:?}",
        outcome.status(),
        outcome.method,
        outcome.elapsed
    );
    match &outcome.verdict {
        Verdict::NoneExists => Ok(EXIT_NONE),
        Verdict::Found(pi) => {
            let rep = report(&inst, pi, concept, block_bound(max_n)).map_err(|e| e.to_string())?;
            if !rep.stable {
                return Err(format!(
                    "solver output failed re-verification: {}",
                    rep.to_json(&inst)
                ));
            }
            emit(out, &pi.to_json_string(&inst))?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_generate(family: Family, source: &Path, out: Option<&Path>) -> CliResult<u8> {
    let src = ReductionSource::from_json_str(&read(source)?)
        .map_err(|e| format!("{}: {e}", source.display()))?;
    let expected = Family::for_source(&src, family.concept()).map_err(|e| e.to_string())?;
    if expected != family {
        return Err(format!(
            "family {family} does not take this source (it feeds {expected})"
        ));
    }
    let gen = generate(&src, family.concept()).map_err(|e| e.to_string())?;
    let text = serde_json::to_string_pretty(&gen.to_file(&src)).expect("instance serializes");
    emit(out, &text)?;
    eprintln!(
        "{family}: {} players, {} activities",
        gen.instance.n(),
        gen.instance.num_classes()
    );
    Ok(EXIT_OK)
}

fn cmd_fixture(name: Fixture, copies: Option<usize>, out: Option<&Path>) -> CliResult<u8> {
    let mut inst = fixture(name);
    if let Some(c) = copies {
        inst = inst.with_uniform_copies(c).map_err(|e| e.to_string())?;
    }
    emit(out, &inst.to_json_string())?;
    Ok(EXIT_OK)
}

fn write_records(records: &[BenchRecord], out: Option<&Path>) -> CliResult<()> {
    let json = out.is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    if json {
        return emit(
            out,
            &serde_json::to_string_pretty(records).expect("records serialize"),
        );
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    let text = String::from_utf8(bytes).expect("csv is utf-8");
    emit(out, text.trim_end())
}

fn run(cli: Cli) -> CliResult<u8> {
    let max_n = cli.max_oracle_n;
    match cli.command {
        Command::Check {
            instance,
            assignment,
            concept,
        } => cmd_check(&instance, &assignment, concept, max_n),
        Command::Solve {
            instance,
            concept,
            method,
            seed,
            derandomize,
            out,
        } => cmd_solve(
            &instance,
            concept,
            method,
            seed,
            derandomize,
            out.as_deref(),
            max_n,
        ),
        Command::Generate {
            family,
            source,
            out,
        } => cmd_generate(family, &source, out.as_deref()),
        Command::Fixture { name, copies, out } => cmd_fixture(name, copies, out.as_deref()),
        Command::Bench {
            suite,
            p,
            n,
            repetitions,
            seed,
            workers,
            out,
        } => {
            let mut cfg =
                BenchConfig::new(suite, parse_range(&p)?, parse_range(&n)?, repetitions, seed);
            cfg.workers = workers.max(1);
            let records = run_bench(&cfg).map_err(|e| e.to_string())?;
            write_records(&records, out.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
