//! Squared-distance instantiation: a weighted product of Euclidean blocks,
//! convex block-set families with exact projections, the diagonal/product
//! alternation of set-theoretic signal processing, and adaptive filter
//! design against drifting constraint sets.

pub mod blocks;
pub mod filter;
pub mod sets;
pub mod space;

pub use blocks::BlockSet;
pub use filter::{
    alternation_step, designed_filter_point, project_block, project_onto_diagonal,
    project_onto_product, run_adaptive_filter, set_theoretic_objective, SetObjective,
};
pub use sets::HilbertSet;
pub use space::{weighted_sq_cost, ProductPoint, SquaredDistanceCost, WeightedProductSpace};
