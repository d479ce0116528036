use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::space::euclidean_sq;

/// Convex compact subsets of one Euclidean block, each with an exact
/// nearest-point projection.
///
/// Half-spaces are compactified by an explicit bounding box (the ambient
/// space must be compact); their projection resolves the box/half-space
/// intersection exactly up to bisection precision. Affine patches are
/// bounded slabs of an affine subspace: anchor plus an orthonormal basis
/// with per-direction coefficient extents.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSet {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
        bounds_lo: Vec<f64>,
        bounds_hi: Vec<f64>,
    },
    AffinePatch {
        anchor: Vec<f64>,
        basis: Vec<Vec<f64>>,
        extents: Vec<f64>,
    },
    Point {
        at: Vec<f64>,
    },
}

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Domain(format!("{name} must be nonempty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("{name} has a non-finite entry")));
    }
    Ok(())
}

impl BlockSet {
    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_finite("box lower corner", &lo)?;
        check_finite("box upper corner", &hi)?;
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::Domain(
                "box corners must align with lo <= hi per axis".into(),
            ));
        }
        Ok(BlockSet::Box { lo, hi })
    }

    /// Closed interval on the line.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::axis_box(vec![lo], vec![hi])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_finite("ball center", &center)?;
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "ball radius must be nonnegative, got {radius}"
            )));
        }
        Ok(BlockSet::Ball { center, radius })
    }

    /// `{x : <normal, x> <= offset}` intersected with `[bounds_lo, bounds_hi]`.
    pub fn halfspace(
        normal: Vec<f64>,
        offset: f64,
        bounds_lo: Vec<f64>,
        bounds_hi: Vec<f64>,
    ) -> Result<Self> {
        check_finite("halfspace normal", &normal)?;
        check_finite("halfspace bounds", &bounds_lo)?;
        check_finite("halfspace bounds", &bounds_hi)?;
        if normal.iter().all(|&v| v == 0.0) {
            return Err(Error::Domain("halfspace normal must be nonzero".into()));
        }
        if normal.len() != bounds_lo.len()
            || bounds_lo.len() != bounds_hi.len()
            || bounds_lo.iter().zip(&bounds_hi).any(|(l, h)| l > h)
        {
            return Err(Error::Domain("halfspace bounding box is degenerate".into()));
        }
        // The compactified set must be nonempty.
        let min_inner: f64 = normal
            .iter()
            .zip(bounds_lo.iter().zip(&bounds_hi))
            .map(|(&n, (&l, &h))| (n * l).min(n * h))
            .sum();
        if min_inner > offset {
            return Err(Error::Domain(
                "halfspace does not meet its bounding box".into(),
            ));
        }
        Ok(BlockSet::Halfspace {
            normal,
            offset,
            bounds_lo,
            bounds_hi,
        })
    }

    /// Bounded affine slab. Directions are orthonormalized; rank-deficient
    /// inputs are rejected.
    pub fn affine_patch(
        anchor: Vec<f64>,
        directions: Vec<Vec<f64>>,
        extents: Vec<f64>,
    ) -> Result<Self> {
        check_finite("affine anchor", &anchor)?;
        if directions.len() != extents.len() {
            return Err(Error::Domain(
                "affine patch needs one extent per direction".into(),
            ));
        }
        if extents.iter().any(|&e| !(e >= 0.0) || !e.is_finite()) {
            return Err(Error::Domain("affine extents must be nonnegative".into()));
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(directions.len());
        for dir in &directions {
            if dir.len() != anchor.len() {
                return Err(Error::ShapeMismatch(
                    "affine direction dimension mismatch".into(),
                ));
            }
            let mut v = dir.clone();
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::Domain(
                    "affine directions are linearly dependent".into(),
                ));
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
        Ok(BlockSet::AffinePatch {
            anchor,
            basis,
            extents,
        })
    }

    pub fn point(at: Vec<f64>) -> Result<Self> {
        check_finite("point", &at)?;
        Ok(BlockSet::Point { at })
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockSet::Box { lo, .. } => lo.len(),
            BlockSet::Ball { center, .. } => center.len(),
            BlockSet::Halfspace { normal, .. } => normal.len(),
            BlockSet::AffinePatch { anchor, .. } => anchor.len(),
            BlockSet::Point { at } => at.len(),
        }
    }

    /// Exact nearest point of the set.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            BlockSet::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&v, (&l, &h))| v.clamp(l, h))
                .collect(),
            BlockSet::Ball { center, radius } => {
                let dist = euclidean_sq(x, center).sqrt();
                if dist <= *radius {
                    x.to_vec()
                } else {
                    center
                        .iter()
                        .zip(x)
                        .map(|(&c, &v)| c + (v - c) * radius / dist)
                        .collect()
                }
            }
            BlockSet::Halfspace {
                normal,
                offset,
                bounds_lo,
                bounds_hi,
            } => {
                let clamp = |y: &[f64]| -> Vec<f64> {
                    y.iter()
                        .zip(bounds_lo.iter().zip(bounds_hi))
                        .map(|(&v, (&l, &h))| v.clamp(l, h))
                        .collect()
                };
                let inner = |y: &[f64]| -> f64 { normal.iter().zip(y).map(|(n, v)| n * v).sum() };
                let boxed = clamp(x);
                if inner(&boxed) <= *offset {
                    return boxed;
                }
                // KKT form of the intersection projection: clamp(x - t n)
                // with t >= 0 chosen so the plane constraint activates.
                // <n, clamp(x - t n)> is non-increasing in t; bisect.
                let norm_sq: f64 = normal.iter().map(|n| n * n).sum();
                let mut t_lo = 0.0f64;
                let mut t_hi = (inner(x) - offset).max(0.0) / norm_sq;
                let shifted = |t: f64| -> Vec<f64> {
                    clamp(
                        &x.iter()
                            .zip(normal)
                            .map(|(&v, &n)| v - t * n)
                            .collect::<Vec<_>>(),
                    )
                };
                while inner(&shifted(t_hi)) > *offset {
                    t_hi = t_hi * 2.0 + 1.0;
                    if t_hi > 1e12 {
                        break;
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (t_lo + t_hi);
                    if inner(&shifted(mid)) > *offset {
                        t_lo = mid;
                    } else {
                        t_hi = mid;
                    }
                }
                shifted(t_hi)
            }
            BlockSet::AffinePatch {
                anchor,
                basis,
                extents,
            } => {
                let mut out = anchor.clone();
                for (b, &e) in basis.iter().zip(extents) {
                    let coef: f64 = x
                        .iter()
                        .zip(anchor.iter().zip(b))
                        .map(|(&v, (&a, &bi))| (v - a) * bi)
                        .sum();
                    let coef = coef.clamp(-e, e);
                    for (o, &bi) in out.iter_mut().zip(b) {
                        *o += coef * bi;
                    }
                }
                out
            }
            BlockSet::Point { at } => at.clone(),
        }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        euclidean_sq(x, &self.project(x)).sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Largest distance from `x` to a point of the set, when a closed form
    /// exists. Backs the analytic directed Hausdorff rules.
    pub fn farthest_distance(&self, x: &[f64]) -> Option<f64> {
        match self {
            BlockSet::Box { lo, hi } => Some(
                x.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&v, (&l, &h))| {
                        let d = (v - l).abs().max((v - h).abs());
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt(),
            ),
            BlockSet::Ball { center, radius } => {
                Some(euclidean_sq(x, center).sqrt() + radius)
            }
            BlockSet::AffinePatch {
                anchor,
                basis,
                extents,
            } => {
                // Extreme coefficients, plus the component of x - anchor
                // orthogonal to the patch.
                let diff: Vec<f64> = x.iter().zip(anchor).map(|(&v, &a)| v - a).collect();
                let mut in_span_sq = 0.0;
                let mut worst_sq = 0.0;
                for (b, &e) in basis.iter().zip(extents) {
                    let coef: f64 = diff.iter().zip(b).map(|(&d, &bi)| d * bi).sum();
                    in_span_sq += coef * coef;
                    let far = coef.abs() + e;
                    worst_sq += far * far;
                }
                let perp_sq = euclidean_sq(&diff, &vec![0.0; diff.len()]) - in_span_sq;
                Some((worst_sq + perp_sq.max(0.0)).sqrt())
            }
            BlockSet::Point { at } => Some(euclidean_sq(x, at).sqrt()),
            BlockSet::Halfspace { .. } => None,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            BlockSet::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| l + rng.random::<f64>() * (h - l))
                .collect(),
            BlockSet::Ball { center, radius } => {
                let k = center.len();
                // Gaussian direction, radius by inverse cdf of the volume.
                let mut dir: Vec<f64> = (0..k)
                    .map(|_| {
                        let u1: f64 = 1.0 - rng.random::<f64>();
                        let u2: f64 = rng.random();
                        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                    })
                    .collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return center.clone();
                }
                let r = radius * rng.random::<f64>().powf(1.0 / k as f64);
                for (d, &c) in dir.iter_mut().zip(center) {
                    *d = c + *d / norm * r;
                }
                dir
            }
            BlockSet::Halfspace {
                normal,
                offset,
                bounds_lo,
                bounds_hi,
            } => {
                for _ in 0..10_000 {
                    let candidate: Vec<f64> = bounds_lo
                        .iter()
                        .zip(bounds_hi)
                        .map(|(&l, &h)| l + rng.random::<f64>() * (h - l))
                        .collect();
                    let inner: f64 = normal.iter().zip(&candidate).map(|(n, v)| n * v).sum();
                    if inner <= *offset {
                        return candidate;
                    }
                }
                // Thin slivers: fall back to projecting a box draw.
                let candidate: Vec<f64> = bounds_lo
                    .iter()
                    .zip(bounds_hi)
                    .map(|(&l, &h)| l + rng.random::<f64>() * (h - l))
                    .collect();
                self.project(&candidate)
            }
            BlockSet::AffinePatch {
                anchor,
                basis,
                extents,
            } => {
                let mut out = anchor.clone();
                for (b, &e) in basis.iter().zip(extents) {
                    let coef = (rng.random::<f64>() * 2.0 - 1.0) * e;
                    for (o, &bi) in out.iter_mut().zip(b) {
                        *o += coef * bi;
                    }
                }
                out
            }
            BlockSet::Point { at } => at.clone(),
        }
    }

    /// Directed Hausdorff distance to `other`, analytic where a closed form
    /// exists.
    pub fn directed_hausdorff(&self, other: &BlockSet) -> Option<f64> {
        match (self, other) {
            (BlockSet::Box { lo: la, hi: ha }, BlockSet::Box { lo: lb, hi: hb }) => {
                // Separable: per axis, the farthest source point is an
                // endpoint and its distance to the target interval adds in
                // squares.
                let mut acc = 0.0;
                for i in 0..la.len() {
                    let d_lo = interval_dist(la[i], lb[i], hb[i]);
                    let d_hi = interval_dist(ha[i], lb[i], hb[i]);
                    let d = d_lo.max(d_hi);
                    acc += d * d;
                }
                Some(acc.sqrt())
            }
            (
                BlockSet::Ball {
                    center: ca,
                    radius: ra,
                },
                BlockSet::Ball {
                    center: cb,
                    radius: rb,
                },
            ) => Some((euclidean_sq(ca, cb).sqrt() + ra - rb).max(0.0)),
            (BlockSet::Point { at }, target) => Some(target.distance(at)),
            (source, BlockSet::Point { at }) => source.farthest_distance(at),
            _ => None,
        }
    }

    /// Point cloud covering the set at roughly the given resolution.
    pub fn grid_points(&self, resolution: f64, budget: usize) -> Vec<Vec<f64>> {
        match self {
            BlockSet::Box { lo, hi } => axis_grid(lo, hi, resolution, budget),
            BlockSet::Ball { center, radius } => {
                let lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
                let hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
                axis_grid(&lo, &hi, resolution, budget)
                    .into_iter()
                    .map(|p| self.project(&p))
                    .collect()
            }
            BlockSet::Halfspace {
                bounds_lo,
                bounds_hi,
                ..
            } => axis_grid(bounds_lo, bounds_hi, resolution, budget)
                .into_iter()
                .map(|p| self.project(&p))
                .collect(),
            BlockSet::AffinePatch {
                anchor,
                basis,
                extents,
            } => {
                let lo: Vec<f64> = extents.iter().map(|e| -e).collect();
                let coef_grid = axis_grid(&lo, extents, resolution, budget);
                coef_grid
                    .into_iter()
                    .map(|coefs| {
                        let mut out = anchor.clone();
                        for (b, &c) in basis.iter().zip(&coefs) {
                            for (o, &bi) in out.iter_mut().zip(b) {
                                *o += c * bi;
                            }
                        }
                        out
                    })
                    .collect()
            }
            BlockSet::Point { at } => vec![at.clone()],
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            BlockSet::Box { lo, hi } => euclidean_sq(lo, hi).sqrt(),
            BlockSet::Ball { radius, .. } => 2.0 * radius,
            BlockSet::Halfspace {
                bounds_lo,
                bounds_hi,
                ..
            } => euclidean_sq(bounds_lo, bounds_hi).sqrt(),
            BlockSet::AffinePatch { extents, .. } => {
                2.0 * extents.iter().map(|e| e * e).sum::<f64>().sqrt()
            }
            BlockSet::Point { .. } => 0.0,
        }
    }

    /// Axis-aligned bounding box of the set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            BlockSet::Box { lo, hi } => (lo.clone(), hi.clone()),
            BlockSet::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            BlockSet::Halfspace {
                bounds_lo,
                bounds_hi,
                ..
            } => (bounds_lo.clone(), bounds_hi.clone()),
            BlockSet::AffinePatch {
                anchor,
                basis,
                extents,
            } => {
                let mut lo = anchor.clone();
                let mut hi = anchor.clone();
                for axis in 0..anchor.len() {
                    let span: f64 = basis
                        .iter()
                        .zip(extents)
                        .map(|(b, &e)| e * b[axis].abs())
                        .sum();
                    lo[axis] -= span;
                    hi[axis] += span;
                }
                (lo, hi)
            }
            BlockSet::Point { at } => (at.clone(), at.clone()),
        }
    }
}

fn interval_dist(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

/// Regular grid over an axis-aligned box, coarsened to stay under `budget`
/// points.
pub(crate) fn axis_grid(lo: &[f64], hi: &[f64], resolution: f64, budget: usize) -> Vec<Vec<f64>> {
    let dims = lo.len();
    let per_axis_budget = ((budget as f64).powf(1.0 / dims as f64).floor() as usize).max(2);
    let axes: Vec<Vec<f64>> = lo
        .iter()
        .zip(hi)
        .map(|(&l, &h)| {
            if h <= l {
                return vec![l];
            }
            let steps = (((h - l) / resolution.max(1e-12)).ceil() as usize)
                .clamp(1, per_axis_budget - 1);
            (0..=steps)
                .map(|k| l + (h - l) * k as f64 / steps as f64)
                .collect()
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::with_capacity(dims)];
    for axis in &axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for base in &points {
            for &v in axis {
                let mut p = base.clone();
                p.push(v);
                next.push(p);
            }
        }
        points = next;
    }
    points
}
