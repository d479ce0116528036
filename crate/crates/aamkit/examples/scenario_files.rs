//! Scenario files end to end: parse a config, run it, persist the trace,
//! read it back, and print plot-ready columns — the same pipeline the
//! `aamkit` binary drives.

use aamkit::scenario::{parse_scenario, read_trace, run_scenario, write_trace};

const SCENARIO: &str = r#"
schema = "aamkit/v1"
kind = "aam-hilbert"
seed = 9

[stop]
max_iter = 200
tol = 0.0
window = 5

[hilbert]
block_dim = 1
weights = [0.5, 0.5]
q0 = [[1.5], [-1.5]]
p_set = { kind = "diagonal" }
q_blocks = [
  { kind = "box", lo = [1.0], hi = [2.0] },
  { kind = "box", lo = [-2.0], hi = [-1.0] },
]

[schedule]
law = "geometric"
rho = 0.5
"#;

fn main() -> aamkit::Result<()> {
    let config = parse_scenario(SCENARIO)?;
    let outcome = run_scenario(&config)?;
    println!(
        "ran {} with seed {}: {} iterations, final cost {:.9}",
        outcome.summary.kind,
        outcome.summary.seed,
        outcome.summary.iterations,
        outcome.summary.final_cost.unwrap()
    );

    let dir = std::env::temp_dir().join("aamkit-example");
    std::fs::create_dir_all(&dir).map_err(|e| aamkit::Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let path = dir.join("trace.tsv");
    write_trace(&outcome.trace, &path)?;
    let back = read_trace(&path)?;
    println!(
        "trace file {} round-trips: {} ({} rows, scenario hash {})",
        path.display(),
        back == outcome.trace,
        back.rows.len(),
        back.scenario_hash
    );

    println!("\nn\tcost\teps\tgamma");
    for r in back.rows.iter().step_by(25) {
        println!(
            "{}\t{}\t{:.3e}\t{:.3e}",
            r.n,
            r.cost.map(|c| format!("{c:.9}")).unwrap_or_else(|| "-".into()),
            r.eps.unwrap_or(0.0),
            r.gamma.unwrap_or(0.0),
        );
    }
    Ok(())
}
