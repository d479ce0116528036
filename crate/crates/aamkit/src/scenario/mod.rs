//! Scenario plumbing: versioned config files, seeded synthetic data, and
//! lossless trace persistence.
//!
//! A scenario file fully determines a run: identical configs produce
//! byte-identical trace files. Validation is total — configs reach the
//! engine only after every semantic check passes.

pub mod config;
pub mod runner;
pub mod samples;
pub mod trace_io;

pub use config::{
    load_scenario, parse_scenario, BlockSpec, DivergenceConfig, DivergenceMode, GenerateConfig,
    HilbertConfig, OracleConfig, OutputConfig, PSetSpec, PortfolioConfig, ScenarioConfig,
    ScenarioKind, ScheduleConfig, ScheduleLaw, StopConfig, CONFIG_SCHEMA,
};
pub use runner::{checks, run_scenario, RunSummary, ScenarioOutcome};
pub use samples::generate_mixture_samples;
pub use trace_io::{read_trace, scenario_hash, write_trace, TraceFile, TracePoint, TraceRow, TRACE_SCHEMA};
