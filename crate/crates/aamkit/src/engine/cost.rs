use std::fmt::Debug;

/// Which argument of the cost a set constrains during alternation.
///
/// A `First`-side projection returns `argmin_{x in set} D(x, fixed)`;
/// a `Second`-side projection returns `argmin_{y in set} D(fixed, y)`.
/// The distinction matters for asymmetric costs such as divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A two-argument cost `D` over a compact metric space, together with the
/// auxiliary function `delta` used by the three- and four-point checks and
/// the ambient metric `d`.
///
/// Implementations must keep `evaluate` finite on every pair of points drawn
/// from sets registered with the engine; `delta` may be negative.
pub trait CostFunction {
    type Point: Clone + PartialEq + Debug;

    /// The cost `D(a, b)`.
    fn evaluate(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// The auxiliary function paired with `D` in the three/four-point
    /// inequalities. Satisfies `delta(p, p) == 0`.
    fn delta(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// The metric of the ambient space.
    fn metric(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Sum metric on pairs: `d(a, a') + d(b, b')`.
    fn pair_metric(&self, a: (&Self::Point, &Self::Point), b: (&Self::Point, &Self::Point)) -> f64 {
        self.metric(a.0, b.0) + self.metric(a.1, b.1)
    }
}
