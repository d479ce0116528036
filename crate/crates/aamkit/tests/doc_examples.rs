//! The worked scenario files shipped under docs/examples must stay
//! loadable and runnable.

use std::path::PathBuf;

use aamkit::scenario::{load_scenario, run_scenario};

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

#[test]
fn every_shipped_scenario_runs() {
    let mut seen = 0;
    for entry in std::fs::read_dir(examples_dir()).expect("docs/examples exists") {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        seen += 1;
        let mut config =
            load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        // Keep the suite quick; the shipped iteration caps are for users.
        config.stop.max_iter = config.stop.max_iter.min(300);
        if let Some(s) = config.schedule.as_mut() {
            if let Some(eps) = s.eps.as_mut() {
                eps.truncate(config.stop.max_iter);
            }
        }
        let outcome =
            run_scenario(&config).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(
            outcome.summary.final_cost.is_some(),
            "{} produced no cost",
            path.display()
        );
    }
    assert!(seen >= 6, "expected the six documented scenario kinds, found {seen}");
}

#[test]
fn shipped_kinds_cover_all_four() {
    let mut kinds = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(examples_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            kinds.insert(load_scenario(&path).unwrap().kind.as_str().to_string());
        }
    }
    for kind in ["classical", "aam-divergence", "aam-hilbert", "portfolio"] {
        assert!(kinds.contains(kind), "no shipped example for `{kind}`");
    }
}
