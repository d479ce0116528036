use rand_chacha::ChaCha8Rng;

use crate::engine::cost::{CostFunction, Side};
use crate::error::{Error, Result};

/// A compact set given by a parametric family, with an exact projection
/// oracle under a cost and a Hausdorff-distance rule against other members
/// of the same family enum.
pub trait ProjectableSet<C: CostFunction> {
    /// Exact minimizer of the cost over the set, with the other argument
    /// held fixed. Deterministic: closed forms break ties by formula,
    /// finite families by lowest index.
    fn project(&self, cost: &C, side: Side, fixed: &C::Point) -> Result<C::Point>;

    /// Membership at tolerance, measured in the ambient metric.
    fn contains(&self, cost: &C, point: &C::Point, tol: f64) -> bool;

    /// Nearest point of the set under the ambient metric (or a proxy whose
    /// distance to `point` is bounded by the distance of `point` to the set
    /// plus the family's documented slack). Used to realize reference
    /// sequences for diagnostics.
    fn nearest(&self, cost: &C, point: &C::Point) -> C::Point;

    /// Draw a point of the set. All randomness flows from the caller's rng.
    fn sample(&self, rng: &mut ChaCha8Rng) -> C::Point;

    /// A point of the set at metric distance at most `dist` from `from`,
    /// moved toward `to`. Both arguments must belong to the set. Convex
    /// families interpolate; finite families jump only when `to` is within
    /// budget.
    fn toward(&self, from: &C::Point, to: &C::Point, dist: f64) -> C::Point;

    /// Hausdorff distance to another set of the same family enum.
    /// Analytic for same-family pairs where a closed form exists,
    /// grid-sampled otherwise (error on the order of the grid step).
    fn hausdorff_to(&self, other: &Self) -> f64;

    /// Point cloud covering the set at roughly the given metric resolution.
    /// Backs the grid fallbacks and the brute-force test oracles.
    fn grid_points(&self, resolution: f64) -> Vec<C::Point>;

    /// Rough metric diameter, used to scale sampling.
    fn diameter_hint(&self) -> f64;

    /// True for the degenerate empty members a family may admit.
    fn is_empty(&self) -> bool {
        false
    }
}

/// Hausdorff distance between two sets of one family enum.
///
/// Symmetric by construction. Errors on empty sets, for which the
/// sup-inf form is undefined.
pub fn hausdorff_distance<C, S>(a: &S, b: &S) -> Result<f64>
where
    C: CostFunction,
    S: ProjectableSet<C>,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain(
            "hausdorff distance is undefined for an empty set".into(),
        ));
    }
    Ok(a.hausdorff_to(b))
}

/// Discrete Hausdorff distance between two point clouds under `metric`.
///
/// When the clouds cover the sets at resolution `h`, the result is within
/// `O(h)` of the true Hausdorff distance.
pub fn grid_hausdorff<P>(a: &[P], b: &[P], metric: impl Fn(&P, &P) -> f64) -> f64 {
    directed_grid_hausdorff(a, b, &metric).max(directed_grid_hausdorff(b, a, &metric))
}

pub(crate) fn directed_grid_hausdorff<P>(
    from: &[P],
    to: &[P],
    metric: &impl Fn(&P, &P) -> f64,
) -> f64 {
    let mut worst = 0.0f64;
    for x in from {
        let mut best = f64::INFINITY;
        for y in to {
            let d = metric(x, y);
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}
