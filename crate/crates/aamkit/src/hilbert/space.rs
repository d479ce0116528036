use crate::engine::CostFunction;
use crate::error::{Error, Result};

/// Product of `block_count` Euclidean blocks of dimension `block_dim`,
/// with positive block weights summing to one. The inner product weights
/// each block's standard inner product, so the induced squared distance is
/// the weighted sum of blockwise squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProductSpace {
    block_dim: usize,
    weights: Vec<f64>,
}

impl WeightedProductSpace {
    pub fn new(block_dim: usize, weights: Vec<f64>) -> Result<Self> {
        if block_dim == 0 {
            return Err(Error::Domain("block dimension must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::Domain("need at least one block".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("block weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "block weights sum to {total}, expected 1"
            )));
        }
        Ok(WeightedProductSpace { block_dim, weights })
    }

    /// Single block of dimension `k`: plain Euclidean space.
    pub fn single(k: usize) -> Self {
        WeightedProductSpace {
            block_dim: k,
            weights: vec![1.0],
        }
    }

    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn check_point(&self, p: &ProductPoint) -> Result<()> {
        if p.blocks.len() != self.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} blocks, space has {}",
                p.blocks.len(),
                self.block_count()
            )));
        }
        for (i, b) in p.blocks.iter().enumerate() {
            if b.len() != self.block_dim {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} has dimension {}, space has {}",
                    b.len(),
                    self.block_dim
                )));
            }
            if b.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("block {i} has a non-finite entry")));
            }
        }
        Ok(())
    }

    /// Weighted centroid of the blocks: the vector `sum_i c_i Q_i`.
    pub fn centroid(&self, p: &ProductPoint) -> Vec<f64> {
        let mut out = vec![0.0; self.block_dim];
        for (w, b) in self.weights.iter().zip(&p.blocks) {
            for (o, v) in out.iter_mut().zip(b) {
                *o += w * v;
            }
        }
        out
    }
}

/// A point of the product space: one `block_dim`-vector per block.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub blocks: Vec<Vec<f64>>,
}

impl ProductPoint {
    pub fn new(blocks: Vec<Vec<f64>>) -> Self {
        ProductPoint { blocks }
    }

    /// All blocks equal to the given base vector.
    pub fn diagonal(base: Vec<f64>, block_count: usize) -> Self {
        ProductPoint {
            blocks: vec![base; block_count],
        }
    }

    /// Single-block point.
    pub fn single(v: Vec<f64>) -> Self {
        ProductPoint { blocks: vec![v] }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let Some(first) = self.blocks.first() else {
            return true;
        };
        self.blocks[1..].iter().all(|b| {
            b.iter()
                .zip(first)
                .all(|(x, y)| (x - y).abs() <= tol)
        })
    }
}

pub(crate) fn euclidean_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared weighted distance `sum_i c_i ||A_i - B_i||^2`: the cost of the
/// product-space instantiation. Its auxiliary function is the cost itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceCost {
    pub space: WeightedProductSpace,
}

impl SquaredDistanceCost {
    pub fn new(space: WeightedProductSpace) -> Self {
        SquaredDistanceCost { space }
    }
}

impl CostFunction for SquaredDistanceCost {
    type Point = ProductPoint;

    fn evaluate(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        debug_assert_eq!(a.blocks.len(), b.blocks.len(), "block count mismatch");
        self.space
            .weights()
            .iter()
            .zip(a.blocks.iter().zip(&b.blocks))
            .map(|(w, (x, y))| w * euclidean_sq(x, y))
            .sum()
    }

    fn delta(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.evaluate(a, b)
    }

    fn metric(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.evaluate(a, b).sqrt()
    }
}

/// The cost as a named operation: `sum_i c_i ||A_i - B_i||^2`.
pub fn weighted_sq_cost(
    a: &ProductPoint,
    b: &ProductPoint,
    space: &WeightedProductSpace,
) -> Result<f64> {
    space.check_point(a)?;
    space.check_point(b)?;
    Ok(SquaredDistanceCost::new(space.clone()).evaluate(a, b))
}
