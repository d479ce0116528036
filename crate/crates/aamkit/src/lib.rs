//! Alternating minimization over time-varying compact constraint sets.
//!
//! The engine alternates exact projections of a two-argument cost over a
//! schedule of constraint-set pairs that converge in Hausdorff distance,
//! and records enough per-iteration state to check the sufficient
//! conditions for convergence empirically. Two instantiations are built
//! in: divergence minimization on measures over a finite alphabet (mixture
//! decomposition and log-optimal portfolios) and squared-distance
//! minimization in a weighted product of Euclidean blocks (set-theoretic
//! signal processing and adaptive filter design).
//!
//! Entry points:
//!
//! - [`engine`]: [`engine::run_classical`], [`engine::run_aam`], the
//!   three/four-point property checkers, Hausdorff and modulus utilities,
//!   and the trace diagnostics.
//! - [`divergence`]: the measure space, divergence cost, mixture
//!   projections, [`divergence::estimate_mixture_weights`], and
//!   [`divergence::log_optimal_portfolio`].
//! - [`hilbert`]: the weighted product space, convex block families,
//!   diagonal/product projections, and [`hilbert::run_adaptive_filter`].
//! - [`scenario`]: config files, seeded synthetic data, and trace
//!   persistence behind the `aamkit` command-line tool ([`cli`]).
//!
//! Every run is deterministic: all randomness flows from explicit 64-bit
//! seeds through a portable generator, and repeated runs of one scenario
//! byte-reproduce their trace files.

pub mod cli;
pub mod divergence;
pub mod engine;
pub mod error;
pub mod hilbert;
pub mod scenario;

pub use error::{Error, Result};
