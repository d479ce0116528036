use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::set::{directed_grid_hausdorff, grid_hausdorff};
use crate::engine::{CostFunction, ProjectableSet, Side};
use crate::error::{Error, Result};
use crate::hilbert::blocks::{axis_grid, BlockSet};
use crate::hilbert::space::{euclidean_sq, ProductPoint, SquaredDistanceCost, WeightedProductSpace};

const GRID_BUDGET: usize = 400_000;

/// Constraint-set families of the weighted product space.
///
/// `Product` is one block set per factor (the signal-processing constraint
/// sets); `Diagonal` is the subspace of points with all blocks equal, whose
/// nearest point is the weighted centroid of the blocks — the convex-hull
/// base domain is never materialized, membership and projection use the
/// centroid characterization. `Finite` is the deliberately non-convex
/// fixture.
#[derive(Debug, Clone)]
pub enum HilbertSet {
    Product {
        space: WeightedProductSpace,
        blocks: Vec<BlockSet>,
    },
    Diagonal {
        space: WeightedProductSpace,
        /// Base box used for sampling and grids only.
        sample_lo: Vec<f64>,
        sample_hi: Vec<f64>,
    },
    Finite {
        space: WeightedProductSpace,
        points: Vec<ProductPoint>,
    },
}

impl HilbertSet {
    pub fn product(space: WeightedProductSpace, blocks: Vec<BlockSet>) -> Result<Self> {
        if blocks.len() != space.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} block sets for a space of {} blocks",
                blocks.len(),
                space.block_count()
            )));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.dim() != space.block_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "block set {i} has dimension {}, space has {}",
                    b.dim(),
                    space.block_dim()
                )));
            }
        }
        Ok(HilbertSet::Product { space, blocks })
    }

    /// Single-block convex set in plain Euclidean space.
    pub fn single(block: BlockSet) -> Self {
        let space = WeightedProductSpace::single(block.dim());
        HilbertSet::Product {
            space,
            blocks: vec![block],
        }
    }

    pub fn diagonal(space: WeightedProductSpace, sample_lo: Vec<f64>, sample_hi: Vec<f64>) -> Result<Self> {
        if sample_lo.len() != space.block_dim() || sample_hi.len() != space.block_dim() {
            return Err(Error::ShapeMismatch(
                "diagonal sample box dimension mismatch".into(),
            ));
        }
        if sample_lo.iter().zip(&sample_hi).any(|(l, h)| l > h) {
            return Err(Error::Domain("diagonal sample box is degenerate".into()));
        }
        Ok(HilbertSet::Diagonal {
            space,
            sample_lo,
            sample_hi,
        })
    }

    pub fn finite(space: WeightedProductSpace, points: Vec<ProductPoint>) -> Result<Self> {
        for p in &points {
            space.check_point(p)?;
        }
        Ok(HilbertSet::Finite { space, points })
    }

    pub fn space(&self) -> &WeightedProductSpace {
        match self {
            HilbertSet::Product { space, .. }
            | HilbertSet::Diagonal { space, .. }
            | HilbertSet::Finite { space, .. } => space,
        }
    }

    pub fn blocks(&self) -> Option<&[BlockSet]> {
        match self {
            HilbertSet::Product { blocks, .. } => Some(blocks),
            _ => None,
        }
    }
}

impl ProjectableSet<SquaredDistanceCost> for HilbertSet {
    fn project(
        &self,
        cost: &SquaredDistanceCost,
        _side: Side,
        fixed: &ProductPoint,
    ) -> Result<ProductPoint> {
        self.space().check_point(fixed)?;
        match self {
            // The weighted sum decomposes per block, so the argmin projects
            // each block independently; weights affect the cost, not the
            // minimizer.
            HilbertSet::Product { blocks, .. } => Ok(ProductPoint::new(
                blocks
                    .iter()
                    .zip(&fixed.blocks)
                    .map(|(s, b)| s.project(b))
                    .collect(),
            )),
            // Nearest all-equal point: the weighted centroid of the blocks.
            HilbertSet::Diagonal { space, .. } => Ok(ProductPoint::diagonal(
                space.centroid(fixed),
                space.block_count(),
            )),
            HilbertSet::Finite { points, .. } => {
                let mut best: Option<(f64, &ProductPoint)> = None;
                for p in points {
                    let v = cost.evaluate(p, fixed);
                    if best.is_none() || v < best.unwrap().0 {
                        best = Some((v, p));
                    }
                }
                best.map(|(_, p)| p.clone())
                    .ok_or_else(|| Error::Domain("projection onto an empty finite set".into()))
            }
        }
    }

    fn contains(&self, cost: &SquaredDistanceCost, point: &ProductPoint, tol: f64) -> bool {
        if self.space().check_point(point).is_err() {
            return false;
        }
        cost.metric(point, &self.nearest(cost, point)) <= tol
    }

    fn nearest(&self, cost: &SquaredDistanceCost, point: &ProductPoint) -> ProductPoint {
        match self {
            HilbertSet::Product { blocks, .. } => ProductPoint::new(
                blocks
                    .iter()
                    .zip(&point.blocks)
                    .map(|(s, b)| s.project(b))
                    .collect(),
            ),
            HilbertSet::Diagonal { space, .. } => {
                ProductPoint::diagonal(space.centroid(point), space.block_count())
            }
            HilbertSet::Finite { points, .. } => {
                let mut best: Option<(f64, &ProductPoint)> = None;
                for p in points {
                    let d = cost.metric(p, point);
                    if best.is_none() || d < best.unwrap().0 {
                        best = Some((d, p));
                    }
                }
                best.expect("nearest point of an empty finite set").1.clone()
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> ProductPoint {
        match self {
            HilbertSet::Product { blocks, .. } => {
                ProductPoint::new(blocks.iter().map(|s| s.sample(rng)).collect())
            }
            HilbertSet::Diagonal {
                space,
                sample_lo,
                sample_hi,
            } => {
                let base: Vec<f64> = sample_lo
                    .iter()
                    .zip(sample_hi)
                    .map(|(&l, &h)| l + rng.random::<f64>() * (h - l))
                    .collect();
                ProductPoint::diagonal(base, space.block_count())
            }
            HilbertSet::Finite { points, .. } => {
                let idx = rng.random_range(0..points.len());
                points[idx].clone()
            }
        }
    }

    fn toward(&self, from: &ProductPoint, to: &ProductPoint, dist: f64) -> ProductPoint {
        let cost = SquaredDistanceCost::new(self.space().clone());
        let d = cost.metric(from, to);
        match self {
            HilbertSet::Finite { .. } => {
                if d <= dist {
                    to.clone()
                } else {
                    from.clone()
                }
            }
            _ => {
                if d <= 0.0 {
                    return from.clone();
                }
                let t = (dist / d).min(1.0);
                ProductPoint::new(
                    from.blocks
                        .iter()
                        .zip(&to.blocks)
                        .map(|(a, b)| {
                            a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
                        })
                        .collect(),
                )
            }
        }
    }

    fn hausdorff_to(&self, other: &Self) -> f64 {
        let cost = SquaredDistanceCost::new(self.space().clone());
        match (self, other) {
            (
                HilbertSet::Product { space, blocks: a },
                HilbertSet::Product { blocks: b, .. },
            ) if a.len() == b.len() => {
                // The weighted metric decomposes over the product, so each
                // directed distance is the weighted root-sum-square of the
                // per-block directed distances.
                let mut fwd_sq = 0.0;
                let mut bwd_sq = 0.0;
                for ((w, sa), sb) in space.weights().iter().zip(a).zip(b) {
                    let (f, r) = block_directed_pair(sa, sb);
                    fwd_sq += w * f * f;
                    bwd_sq += w * r * r;
                }
                fwd_sq.max(bwd_sq).sqrt()
            }
            (
                HilbertSet::Diagonal {
                    space,
                    sample_lo: la,
                    sample_hi: ha,
                },
                HilbertSet::Diagonal {
                    sample_lo: lb,
                    sample_hi: hb,
                    ..
                },
            ) if space.block_dim() == lb.len() => {
                // The diagonal embedding is isometric to the base space, so
                // this is the box formula on the sample boxes.
                let a = BlockSet::Box {
                    lo: la.clone(),
                    hi: ha.clone(),
                };
                let b = BlockSet::Box {
                    lo: lb.clone(),
                    hi: hb.clone(),
                };
                let (f, r) = block_directed_pair(&a, &b);
                f.max(r)
            }
            (HilbertSet::Finite { points: a, .. }, HilbertSet::Finite { points: b, .. }) => {
                grid_hausdorff(a, b, |x, y| cost.metric(x, y))
            }
            _ => {
                let res = (self.diameter_hint().max(other.diameter_hint()) / 40.0).max(1e-6);
                grid_hausdorff(
                    &self.grid_points(res),
                    &other.grid_points(res),
                    |x, y| cost.metric(x, y),
                )
            }
        }
    }

    fn grid_points(&self, resolution: f64) -> Vec<ProductPoint> {
        match self {
            HilbertSet::Product { blocks, .. } => {
                let per_block_budget = ((GRID_BUDGET as f64)
                    .powf(1.0 / blocks.len() as f64)
                    .floor() as usize)
                    .max(2);
                let grids: Vec<Vec<Vec<f64>>> = blocks
                    .iter()
                    .map(|b| b.grid_points(resolution, per_block_budget))
                    .collect();
                let mut points: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
                for grid in &grids {
                    let mut next = Vec::with_capacity(points.len() * grid.len());
                    for base in &points {
                        for g in grid {
                            let mut p = base.clone();
                            p.push(g.clone());
                            next.push(p);
                        }
                    }
                    points = next;
                }
                points.into_iter().map(ProductPoint::new).collect()
            }
            HilbertSet::Diagonal {
                space,
                sample_lo,
                sample_hi,
            } => axis_grid(sample_lo, sample_hi, resolution, GRID_BUDGET)
                .into_iter()
                .map(|base| ProductPoint::diagonal(base, space.block_count()))
                .collect(),
            HilbertSet::Finite { points, .. } => points.clone(),
        }
    }

    fn diameter_hint(&self) -> f64 {
        match self {
            HilbertSet::Product { blocks, .. } => blocks
                .iter()
                .map(BlockSet::diameter)
                .fold(0.0, f64::max),
            HilbertSet::Diagonal {
                sample_lo,
                sample_hi,
                ..
            } => euclidean_sq(sample_lo, sample_hi).sqrt(),
            HilbertSet::Finite { space, points } => {
                let cost = SquaredDistanceCost::new(space.clone());
                let mut d = 0.0f64;
                for (i, a) in points.iter().enumerate() {
                    for b in &points[i + 1..] {
                        d = d.max(cost.metric(a, b));
                    }
                }
                d
            }
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, HilbertSet::Finite { points, .. } if points.is_empty())
    }
}

/// Directed Hausdorff distances between two blocks, both directions,
/// analytic where closed forms exist and grid-backed otherwise.
fn block_directed_pair(a: &BlockSet, b: &BlockSet) -> (f64, f64) {
    match (a.directed_hausdorff(b), b.directed_hausdorff(a)) {
        (Some(f), Some(r)) => (f, r),
        _ => {
            let res = (a.diameter().max(b.diameter()) / 40.0).max(1e-6);
            let ga = a.grid_points(res, GRID_BUDGET / 2);
            let gb = b.grid_points(res, GRID_BUDGET / 2);
            let metric = |x: &Vec<f64>, y: &Vec<f64>| euclidean_sq(x, y).sqrt();
            (
                directed_grid_hausdorff(&ga, &gb, &metric),
                directed_grid_hausdorff(&gb, &ga, &metric),
            )
        }
    }
}
