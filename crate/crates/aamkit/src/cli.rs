//! Command-line front end: run scenario files, run property checks, and
//! dump plot-ready columns from saved traces.
//!
//! No numerical logic lives here; every number printed comes from an
//! engine output. Exit codes: 0 success, 2 configuration or usage,
//! 3 runtime, 4 i/o.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::scenario::checks::{run_check, CheckKind};
use crate::scenario::{load_scenario, read_trace, run_scenario, write_trace, ScenarioConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
pub const EXIT_IO: u8 = 4;

const VERSION_LINE: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (config aamkit/v1, trace aamkit-trace/v1)"
);

#[derive(Parser)]
#[command(
    name = "aamkit",
    version = VERSION_LINE,
    about = "Alternating minimization over drifting constraint sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files and write their traces.
    Run {
        /// Scenario file(s); repeat the flag to fan out several runs.
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        /// Override the scenario seed (wins over AAMKIT_SEED).
        #[arg(long)]
        seed: Option<u64>,
        /// Override the iteration cap.
        #[arg(long)]
        max_iter: Option<usize>,
        /// Override the stopping tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the trace output path (single config only; wins over
        /// AAMKIT_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for independent scenario files.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run a property checker against a scenario's sets.
    Check {
        #[arg(long = "config")]
        config: PathBuf,
        /// Which property to check.
        #[arg(long, value_enum)]
        which: WhichCheck,
        /// Sampled tuples (or modulus witnesses).
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Checker seed (independent of the scenario seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print plot-ready columns from a saved trace.
    Plotdata {
        /// Trace file written by `run`.
        trace: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichCheck {
    ThreePoint,
    FourPoint,
    Drift,
    Recursion,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout and exit clean.
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run {
            configs,
            seed,
            max_iter,
            tol,
            out,
            jobs,
        } => cmd_run(&configs, seed, max_iter, tol, out, jobs),
        Command::Check {
            config,
            which,
            samples,
            seed,
        } => cmd_check(&config, which, samples, seed),
        Command::Plotdata { trace } => cmd_plotdata(&trace),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) => EXIT_CONFIG,
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_RUNTIME,
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("AAMKIT_SEED").ok()?.parse().ok()
}

fn env_out() -> Option<PathBuf> {
    std::env::var("AAMKIT_OUT").ok().map(PathBuf::from)
}

struct Overrides {
    seed: Option<u64>,
    max_iter: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
}

fn apply_overrides(mut config: ScenarioConfig, ov: &Overrides) -> ScenarioConfig {
    if let Some(seed) = ov.seed {
        config.seed = seed;
    }
    if let Some(max_iter) = ov.max_iter {
        config.stop.max_iter = max_iter;
    }
    if let Some(tol) = ov.tol {
        config.stop.tol = tol;
    }
    if let Some(out) = &ov.out {
        config.output.trace = Some(out.display().to_string());
    }
    config
}

fn run_one(path: &Path, ov: &Overrides) -> Result<String, Error> {
    let config = apply_overrides(load_scenario(path)?, ov);
    let outcome = run_scenario(&config)?;
    let s = &outcome.summary;
    let mut text = String::new();
    text.push_str(&format!("scenario: {}\n", path.display()));
    text.push_str(&format!("kind: {}  seed: {}\n", s.kind, s.seed));
    let flag = match s.termination {
        crate::engine::Termination::Converged => "converged",
        crate::engine::Termination::Exhausted => "exhausted",
        crate::engine::Termination::ScheduleTruncated => "schedule-truncated",
    };
    text.push_str(&format!(
        "iterations: {}  termination: {flag}\n",
        s.iterations
    ));
    if let Some(c) = s.final_cost {
        text.push_str(&format!("final cost: {c}\n"));
    }
    if let Some(l) = s.liminf_estimate {
        text.push_str(&format!("trailing-window minimum cost: {l}\n"));
    }
    if let Some(gap) = s.oracle_gap {
        text.push_str(&format!("oracle gap: {gap:+e}\n"));
    }
    if let Some(w) = &s.weights {
        let w: Vec<String> = w.iter().map(|x| format!("{x:.6}")).collect();
        text.push_str(&format!("weights: {}\n", w.join(", ")));
    }
    if let Some(trace_path) = &config.output.trace {
        write_trace(&outcome.trace, Path::new(trace_path))?;
        text.push_str(&format!("trace: {trace_path}\n"));
    }
    Ok(text)
}

fn cmd_run(
    configs: &[PathBuf],
    seed: Option<u64>,
    max_iter: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    jobs: usize,
) -> u8 {
    if configs.len() > 1 && out.is_some() {
        eprintln!("error: --out applies to a single --config");
        return EXIT_CONFIG;
    }
    if jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return EXIT_CONFIG;
    }
    let ov = Overrides {
        seed: seed.or_else(env_seed),
        max_iter,
        tol,
        out: out.or_else(env_out),
    };

    let results: Vec<(usize, Result<String, Error>)> = if jobs <= 1 || configs.len() <= 1 {
        configs
            .iter()
            .enumerate()
            .map(|(i, p)| (i, run_one(p, &ov)))
            .collect()
    } else {
        // Fan independent scenario files out across a fixed worker pool.
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results = std::sync::Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(configs.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= configs.len() {
                        break;
                    }
                    let r = run_one(&configs[i], &ov);
                    results.lock().unwrap().push((i, r));
                });
            }
        });
        results.into_inner().unwrap()
    };

    let mut ordered = results;
    ordered.sort_by_key(|(i, _)| *i);
    let mut worst = EXIT_OK;
    for (i, result) in ordered {
        match result {
            Ok(text) => {
                if i > 0 {
                    println!();
                }
                print!("{text}");
            }
            Err(e) => {
                eprintln!("error in {}: {e}", configs[i].display());
                worst = worst.max(exit_code_for(&e));
            }
        }
    }
    worst
}

fn cmd_check(config: &Path, which: WhichCheck, samples: usize, seed: Option<u64>) -> u8 {
    if samples == 0 {
        eprintln!("error: --samples must be at least 1");
        return EXIT_CONFIG;
    }
    let kind = match which {
        WhichCheck::ThreePoint => CheckKind::ThreePoint,
        WhichCheck::FourPoint => CheckKind::FourPoint,
        WhichCheck::Drift => CheckKind::Drift,
        WhichCheck::Recursion => CheckKind::Recursion,
    };
    let seed = seed.or_else(env_seed).unwrap_or(0);
    let loaded = match load_scenario(config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    match run_check(&loaded, kind, samples, seed) {
        Ok(outcome) => {
            println!(
                "{} check: {} checked, {} violations, worst slack {:e}",
                outcome.name, outcome.checked, outcome.violations, outcome.worst_slack
            );
            if let Some(note) = outcome.note {
                println!("note: {note}");
            }
            if outcome.violations == 0 {
                EXIT_OK
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_plotdata(trace: &Path) -> u8 {
    let file = match read_trace(trace) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let fixed_sets = file.rows.iter().all(|r| r.eps.is_none());
    if fixed_sets {
        println!("# note: fixed-set trace; eps and gamma columns are zeros");
    }
    println!("n\tcost\teps\tgamma\tdrift_slack");
    for r in &file.rows {
        let cost = r.cost.map(|c| format!("{c}")).unwrap_or_else(|| "-".into());
        let eps = r.eps.unwrap_or(0.0);
        let gamma = r.gamma.unwrap_or(0.0);
        let slack = match (r.cost, r.cost_p_prev_q) {
            (Some(c), Some(b)) => format!("{}", c - b),
            _ => "-".into(),
        };
        println!("{}\t{cost}\t{eps}\t{gamma}\t{slack}", r.n);
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{CONFIG_SCHEMA, TRACE_SCHEMA};

    #[test]
    fn version_line_names_both_schemas() {
        assert!(VERSION_LINE.contains("aamkit/v1"));
        assert!(VERSION_LINE.contains("aamkit-trace/v1"));
        assert_eq!(CONFIG_SCHEMA, "aamkit/v1");
        assert_eq!(TRACE_SCHEMA, "aamkit-trace/v1");
    }
}
