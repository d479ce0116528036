//! End-to-end command-line behavior: exit codes, summaries, env
//! overrides, and plot output.

use std::path::Path;
use std::process::{Command, Output};

fn aamkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aamkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("AAMKIT_SEED")
        .env_remove("AAMKIT_OUT")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const HILBERT: &str = r#"
schema = "aamkit/v1"
kind = "aam-hilbert"
seed = 5

[stop]
max_iter = 100
tol = 0.0
window = 5

[output]
trace = "out/hilbert.tsv"

[hilbert]
block_dim = 1
weights = [0.5, 0.5]
q0 = [[2.0], [-2.0]]
p_set = { kind = "diagonal" }
q_blocks = [
  { kind = "box", lo = [1.0], hi = [2.0] },
  { kind = "box", lo = [-2.0], hi = [-1.0] },
]

[schedule]
law = "geometric"
rho = 0.5
"#;

const NONCONVEX: &str = r#"
schema = "aamkit/v1"
kind = "classical"
seed = 1

[hilbert]
block_dim = 2
weights = [1.0]
q0 = [[1.0, 1.0]]
p_set = { kind = "finite", points = [ [[0.0, 0.0]], [[2.0, 0.0]] ] }
q_blocks = [ { kind = "point", at = [1.0, 1.0] } ]
"#;

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    let out = aamkit(&["run", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("kind: aam-hilbert"));
    assert!(stdout.contains("final cost:"));
    assert!(dir.path().join("out/hilbert.tsv").exists());
}

#[test]
fn run_reports_the_oracle_gap_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    let with_oracle = HILBERT.replace("[output]", "[oracle]\ncost = 1.0\n\n[output]");
    let config = write_config(dir.path(), "h.toml", &with_oracle);
    let out = aamkit(&["run", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("oracle gap:"), "{stdout}");
}

#[test]
fn missing_config_exits_four_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = aamkit(&["run", "--config", "no-such-file.toml"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("no-such-file.toml"), "{stderr}");
}

#[test]
fn invalid_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = HILBERT.replace("weights = [0.5, 0.5]", "weights = [0.5, 0.6]");
    let config = write_config(dir.path(), "bad.toml", &bad);
    let out = aamkit(&["run", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_run_still_exits_zero_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    let out = aamkit(
        &["run", "--config", &config, "--max-iter", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("termination: exhausted"), "{stdout}");
}

#[test]
fn seed_flag_beats_env_which_beats_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);

    let env_out = Command::new(env!("CARGO_BIN_EXE_aamkit"))
        .args(["run", "--config", &config])
        .current_dir(dir.path())
        .env("AAMKIT_SEED", "99")
        .env_remove("AAMKIT_OUT")
        .output()
        .unwrap();
    let stdout = String::from_utf8(env_out.stdout).unwrap();
    assert!(stdout.contains("seed: 99"), "{stdout}");

    let flag_out = Command::new(env!("CARGO_BIN_EXE_aamkit"))
        .args(["run", "--config", &config, "--seed", "123"])
        .current_dir(dir.path())
        .env("AAMKIT_SEED", "99")
        .env_remove("AAMKIT_OUT")
        .output()
        .unwrap();
    let stdout = String::from_utf8(flag_out.stdout).unwrap();
    assert!(stdout.contains("seed: 123"), "{stdout}");
}

#[test]
fn out_flag_redirects_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    let out = aamkit(
        &["run", "--config", &config, "--out", "elsewhere.tsv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("elsewhere.tsv").exists());
    assert!(!dir.path().join("out/hilbert.tsv").exists());
}

#[test]
fn jobs_fan_out_multiple_configs() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = write_config(
        dir.path(),
        "a.toml",
        &HILBERT.replace("out/hilbert.tsv", "out/a.tsv"),
    );
    let c2 = write_config(
        dir.path(),
        "b.toml",
        &HILBERT.replace("out/hilbert.tsv", "out/b.tsv"),
    );
    let out = aamkit(
        &[
            "run", "--config", &c1, "--config", &c2, "--jobs", "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("out/a.tsv").exists());
    assert!(dir.path().join("out/b.tsv").exists());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let a_pos = stdout.find("a.toml").unwrap();
    let b_pos = stdout.find("b.toml").unwrap();
    assert!(a_pos < b_pos, "summaries print in input order");
}

#[test]
fn divergence_checks_pass_on_the_mixture_sets() {
    let dir = tempfile::tempdir().unwrap();
    let mixture = r#"
schema = "aamkit/v1"
kind = "classical"
seed = 6

[divergence]
outcomes = ["a", "b"]
components = [[0.9, 0.1], [0.1, 0.9]]
weight_floor = 0.05
generate = { true_weights = [0.6, 0.4], count = 500 }
"#;
    let config = write_config(dir.path(), "m.toml", mixture);
    for which in ["three-point", "four-point"] {
        let out = aamkit(
            &[
                "check", "--config", &config, "--which", which, "--samples", "1000",
                "--seed", "2",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{which}: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("0 violations"), "{stdout}");
    }
}

#[test]
fn convex_checks_pass_nonconvex_fixture_fails() {
    let dir = tempfile::tempdir().unwrap();
    let convex = write_config(dir.path(), "h.toml", HILBERT);
    for which in ["three-point", "four-point"] {
        let out = aamkit(
            &[
                "check", "--config", &convex, "--which", which, "--samples", "500",
                "--seed", "3",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{which}: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("0 violations"), "{stdout}");
    }

    let fixture = write_config(dir.path(), "nc.toml", NONCONVEX);
    let out = aamkit(
        &[
            "check", "--config", &fixture, "--which", "three-point", "--samples", "64",
            "--seed", "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.contains(" 0 violations"), "{stdout}");
}

#[test]
fn zero_samples_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    let out = aamkit(
        &[
            "check", "--config", &config, "--which", "three-point", "--samples", "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn drift_check_reports_summability() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    let out = aamkit(
        &["check", "--config", &config, "--which", "drift", "--samples", "800"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("looks summable"), "{stdout}");
}

#[test]
fn plotdata_matches_trace_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "h.toml", HILBERT);
    assert_eq!(
        aamkit(&["run", "--config", &config], dir.path())
            .status
            .code(),
        Some(0)
    );
    let out = aamkit(&["plotdata", "out/hilbert.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let data_rows = stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .count();
    let trace = std::fs::read_to_string(dir.path().join("out/hilbert.tsv")).unwrap();
    let trace_rows = trace
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .count();
    assert_eq!(data_rows, trace_rows);
}

#[test]
fn plotdata_flags_fixed_set_traces() {
    let dir = tempfile::tempdir().unwrap();
    let classical = r#"
schema = "aamkit/v1"
kind = "classical"
seed = 2

[output]
trace = "c.tsv"

[hilbert]
block_dim = 1
weights = [1.0]
q0 = [[3.0]]
p_set = { kind = "diagonal" }
q_blocks = [ { kind = "box", lo = [2.0], hi = [4.0] } ]
"#;
    let config = write_config(dir.path(), "c.toml", classical);
    assert_eq!(
        aamkit(&["run", "--config", &config], dir.path())
            .status
            .code(),
        Some(0)
    );
    let out = aamkit(&["plotdata", "c.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# note: fixed-set trace"), "{stdout}");
}

#[test]
fn plotdata_corrupt_exits_three_missing_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("garbage.tsv"), "not a trace\n").unwrap();
    let out = aamkit(&["plotdata", "garbage.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    let out = aamkit(&["plotdata", "missing.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn version_prints_schema_versions() {
    let dir = tempfile::tempdir().unwrap();
    let out = aamkit(&["--version"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("aamkit/v1") && stdout.contains("aamkit-trace/v1"));
}

#[test]
fn every_subcommand_has_help() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["run", "check", "plotdata"] {
        let out = aamkit(&[sub, "--help"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{sub} --help");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn portfolio_scenario_reports_weights() {
    let dir = tempfile::tempdir().unwrap();
    let portfolio = r#"
schema = "aamkit/v1"
kind = "portfolio"
seed = 4

[portfolio]
returns = [[1.0, 2.0], [2.0, 1.0]]
weight_floor = 0.05
"#;
    let config = write_config(dir.path(), "p.toml", portfolio);
    let out = aamkit(&["run", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("weights: 0.500000, 0.500000"), "{stdout}");
}

#[test]
fn adaptive_divergence_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let adaptive = r#"
schema = "aamkit/v1"
kind = "aam-divergence"
seed = 12

[stop]
max_iter = 300
tol = 0.0
window = 5

[output]
trace = "adaptive.tsv"

[divergence]
outcomes = ["a", "b"]
components = [[0.9, 0.1], [0.1, 0.9]]
weight_floor = 0.05
generate = { true_weights = [0.7, 0.3], count = 300 }
mode = "adaptive"
"#;
    let config = write_config(dir.path(), "a.toml", adaptive);
    let out = aamkit(&["run", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("weights:"), "{stdout}");
    assert!(dir.path().join("adaptive.tsv").exists());
}
