//! Divergence instantiation: measures on a finite alphabet with pointwise
//! floor and mass cap, the divergence cost with its auxiliary function,
//! exact projections for the mixture-decomposition sets, and the
//! log-optimal portfolio special case.

pub mod cost;
pub mod measure;
pub mod mixture;
pub mod portfolio;
pub mod sets;

pub use cost::{delta_div, kl_divergence, KlCost};
pub use measure::{Alphabet, BoundedMeasure};
pub use mixture::{
    clamp_empirical, empirical_distribution, estimate_mixture_weights, ml_stationarity_gap,
    project_onto_coupling_set, project_onto_weight_set, EstimationMode, MixtureProblem,
    WeightVector,
};
pub use portfolio::{empirical_log_wealth, log_optimal_portfolio};
pub use sets::MeasureSet;
