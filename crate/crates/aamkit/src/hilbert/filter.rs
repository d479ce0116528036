use crate::engine::{
    run_aam, AamTrace, SetSchedule, SetSequence, StoppingRule,
};
use crate::error::{Error, Result};
use crate::hilbert::blocks::BlockSet;
use crate::hilbert::sets::HilbertSet;
use crate::hilbert::space::{ProductPoint, SquaredDistanceCost, WeightedProductSpace};

/// Nearest point of a convex block set: the unique minimizer of the
/// blockwise squared distance.
pub fn project_block(x: &[f64], set: &BlockSet) -> Result<Vec<f64>> {
    if x.len() != set.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point of dimension {} against a set of dimension {}",
            x.len(),
            set.dim()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("point has a non-finite entry".into()));
    }
    Ok(set.project(x))
}

/// Minimizer of the weighted squared cost over a product set for a fixed
/// diagonal point: blockwise projections of
/// the shared base vector. Weights scale the cost terms but never move the
/// blockwise argmin.
pub fn project_onto_product(
    p: &ProductPoint,
    sets: &[BlockSet],
    space: &WeightedProductSpace,
) -> Result<ProductPoint> {
    space.check_point(p)?;
    if !p.is_diagonal(1e-9) {
        return Err(Error::Domain(
            "product projection expects a diagonal point (all blocks equal)".into(),
        ));
    }
    if sets.len() != space.block_count() {
        return Err(Error::ShapeMismatch(
            "one block set per space block is required".into(),
        ));
    }
    let base = &p.blocks[0];
    Ok(ProductPoint::new(
        sets.iter().map(|s| project_block(base, s)).collect::<Result<_>>()?,
    ))
}

/// Minimizer of the weighted squared cost over the diagonal for a fixed
/// product point: every block becomes the weighted centroid of the blocks.
pub fn project_onto_diagonal(
    q: &ProductPoint,
    space: &WeightedProductSpace,
) -> Result<ProductPoint> {
    space.check_point(q)?;
    Ok(ProductPoint::diagonal(
        space.centroid(q),
        space.block_count(),
    ))
}

/// The two set-theoretic objective readings at a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetObjective {
    /// `sum_i c_i d(x, S_i)` — the literal weighted-distance objective.
    pub literal: f64,
    /// `sum_i c_i d(x, S_i)^2` — the quantity the product-space
    /// alternation actually minimizes. The two have different minimizers
    /// in general; the squared form is the algorithmic target and the
    /// literal value is reported alongside it.
    pub squared: f64,
}

/// Weighted distances from a base point to the constraint sets, in both
/// the literal and squared readings. Zero in either reading exactly when
/// the point lies in every set.
pub fn set_theoretic_objective(
    x: &[f64],
    sets: &[BlockSet],
    weights: &[f64],
) -> Result<SetObjective> {
    if sets.len() != weights.len() {
        return Err(Error::ShapeMismatch(
            "one weight per constraint set is required".into(),
        ));
    }
    if weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Domain("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mut literal = 0.0;
    let mut squared = 0.0;
    for (s, &w) in sets.iter().zip(weights) {
        let d = project_block(x, s)
            .map(|p| crate::hilbert::space::euclidean_sq(x, &p).sqrt())?;
        literal += w * d;
        squared += w * d * d;
    }
    Ok(SetObjective { literal, squared })
}

/// One step of the alternation seen from the base space:
/// `x -> sum_i c_i S_i(x)`. Fixed points of this map are exactly the
/// stationary points of the squared objective.
pub fn alternation_step(
    x: &[f64],
    sets: &[BlockSet],
    space: &WeightedProductSpace,
) -> Result<Vec<f64>> {
    let diag = ProductPoint::diagonal(x.to_vec(), space.block_count());
    let q = project_onto_product(&diag, sets, space)?;
    Ok(space.centroid(&q))
}

/// Filter design against time-varying convex constraint sets.
///
/// The per-block sets at iteration `n` form the product set; the first-
/// argument set is the fixed diagonal. The run alternates centroid and
/// blockwise projections under the weighted squared cost, and the final
/// diagonal base vector is the designed filter point.
///
/// The diagonal's sampling box is the axis-aligned box around the limit
/// and initial sets, inflated by 10%, standing in for the compact ambient
/// space.
pub fn run_adaptive_filter(
    block_schedule: SetSequence<Vec<BlockSet>>,
    limit_blocks: Vec<BlockSet>,
    space: &WeightedProductSpace,
    q0: ProductPoint,
    stop: StoppingRule,
) -> Result<AamTrace<ProductPoint>> {
    let k = space.block_dim();
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    let mut absorb = |blocks: &[BlockSet]| {
        for b in blocks {
            let (blo, bhi) = b.bounding_box();
            for a in 0..k {
                lo[a] = lo[a].min(blo[a]);
                hi[a] = hi[a].max(bhi[a]);
            }
        }
    };
    absorb(&limit_blocks);
    for n in 0..2 {
        if let Some(blocks) = block_schedule.at(n) {
            absorb(&blocks);
        }
    }
    for a in 0..k {
        let span = (hi[a] - lo[a]).max(1e-6);
        lo[a] -= 0.05 * span;
        hi[a] += 0.05 * span;
    }

    let diagonal = HilbertSet::diagonal(space.clone(), lo, hi)?;
    let q_limit = HilbertSet::product(space.clone(), limit_blocks)?;
    let space_for_gen = space.clone();
    let q_sets = match block_schedule {
        SetSequence::Constant(blocks) => {
            SetSequence::Constant(HilbertSet::product(space.clone(), blocks)?)
        }
        SetSequence::List(lists) => SetSequence::List(
            lists
                .into_iter()
                .map(|blocks| HilbertSet::product(space.clone(), blocks))
                .collect::<Result<_>>()?,
        ),
        SetSequence::Generated(gen) => SetSequence::Generated(Box::new(move |n| {
            HilbertSet::product(space_for_gen.clone(), gen(n))
                .expect("scheduled blocks match the space")
        })),
    };

    let schedule = SetSchedule {
        p_sets: SetSequence::Constant(diagonal.clone()),
        q_sets,
        p_limit: diagonal,
        q_limit,
    };
    let cost = SquaredDistanceCost::new(space.clone());
    run_aam(&cost, &schedule, q0, stop)
}

/// The designed filter point of a finished run: the base vector of the
/// final diagonal iterate.
pub fn designed_filter_point(trace: &AamTrace<ProductPoint>) -> Option<Vec<f64>> {
    trace
        .records
        .iter()
        .rev()
        .find_map(|r| r.p.as_ref())
        .map(|p| p.blocks[0].clone())
}
