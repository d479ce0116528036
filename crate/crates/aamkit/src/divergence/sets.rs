use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::divergence::cost::KlCost;
use crate::divergence::measure::{Alphabet, BoundedMeasure};
use crate::divergence::mixture::{floored_scaling, MixtureProblem, WeightVector};
use crate::engine::set::grid_hausdorff;
use crate::engine::{CostFunction, ProjectableSet, Side};
use crate::error::{Error, Result};

/// Soft budget on the size of generated point grids; requested resolutions
/// are coarsened to stay under it.
const GRID_BUDGET: usize = 400_000;

/// Compact constraint-set families of the measure space, each with exact
/// divergence projections.
///
/// `Coupling` and `MixtureWeights` are the two sets of the mixture
/// decomposition; `FlooredSimplex` and `MassBox` are generic convex
/// families used by scenarios and property checks; `Finite` is the
/// deliberately non-convex fixture.
#[derive(Clone, Debug)]
pub enum MeasureSet {
    /// Joint measures with a fixed outcome marginal: `{P >= 0 :
    /// sum_i P(i, y) = marginal(y)}` on the problem's joint alphabet.
    Coupling {
        problem: Arc<MixtureProblem>,
        marginal: Vec<f64>,
    },
    /// `{Q(i, y) = w_i mu_i(y)}` for weights on the floored simplex.
    MixtureWeights { problem: Arc<MixtureProblem> },
    /// `{p : sum p = 1, p >= floor}` on an alphabet.
    FlooredSimplex { alphabet: Alphabet, floor: f64 },
    /// Product of per-symbol mass intervals.
    MassBox {
        alphabet: Alphabet,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// Finite point set; non-convex once it has two distinct points.
    Finite { points: Vec<BoundedMeasure> },
}

impl MeasureSet {
    pub fn coupling(problem: Arc<MixtureProblem>, marginal: Vec<f64>) -> Result<Self> {
        if marginal.len() != problem.outcome_count() {
            return Err(Error::ShapeMismatch(format!(
                "marginal has {} entries for {} outcomes",
                marginal.len(),
                problem.outcome_count()
            )));
        }
        let total: f64 = marginal.iter().sum();
        if marginal.iter().any(|&x| !x.is_finite() || x < 0.0) || (total - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(
                "coupling marginal must be a distribution over the outcomes".into(),
            ));
        }
        Ok(MeasureSet::Coupling { problem, marginal })
    }

    pub fn mixture_weights(problem: Arc<MixtureProblem>) -> Self {
        MeasureSet::MixtureWeights { problem }
    }

    pub fn floored_simplex(alphabet: Alphabet, floor: f64) -> Result<Self> {
        if !(floor >= 0.0) || floor * alphabet.len() as f64 > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "floor {floor} leaves no mass for {} symbols",
                alphabet.len()
            )));
        }
        Ok(MeasureSet::FlooredSimplex { alphabet, floor })
    }

    pub fn mass_box(alphabet: Alphabet, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != alphabet.len() || hi.len() != alphabet.len() {
            return Err(Error::ShapeMismatch(
                "box bounds do not match the alphabet".into(),
            ));
        }
        for (&l, &h) in lo.iter().zip(&hi) {
            if !(l >= 0.0) || !(h >= l) || !h.is_finite() || h <= 0.0 {
                return Err(Error::Domain(format!(
                    "box interval [{l}, {h}] must satisfy 0 <= lo <= hi and hi > 0"
                )));
            }
        }
        Ok(MeasureSet::MassBox { alphabet, lo, hi })
    }

    pub fn finite(points: Vec<BoundedMeasure>) -> Result<Self> {
        if let Some(first) = points.first() {
            for p in &points[1..] {
                if p.alphabet() != first.alphabet() {
                    return Err(Error::AlphabetMismatch(
                        "finite set mixes alphabets".into(),
                    ));
                }
            }
        }
        Ok(MeasureSet::Finite { points })
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        match self {
            MeasureSet::Coupling { problem, .. } | MeasureSet::MixtureWeights { problem } => {
                Some(problem.joint_alphabet())
            }
            MeasureSet::FlooredSimplex { alphabet, .. } | MeasureSet::MassBox { alphabet, .. } => {
                Some(alphabet)
            }
            MeasureSet::Finite { points } => points.first().map(|p| p.alphabet()),
        }
    }

    fn measure(&self, mass: Vec<f64>) -> BoundedMeasure {
        let alphabet = self.alphabet().expect("family carries an alphabet").clone();
        let cap = mass.iter().sum::<f64>() + 1.0;
        BoundedMeasure::new(alphabet, mass, 0.0, cap).expect("family point is a valid measure")
    }

    fn check_alphabet(&self, point: &BoundedMeasure) -> Result<()> {
        match self.alphabet() {
            Some(a) if a == point.alphabet() => Ok(()),
            Some(_) => Err(Error::AlphabetMismatch(
                "point is not on the set's alphabet".into(),
            )),
            None => Err(Error::Domain("empty finite set".into())),
        }
    }
}

/// Exact nearest point of the floored simplex under the sup metric: shift
/// every coordinate by a common amount (clamping at the floor) until the
/// total is one.
fn shift_to_floored_simplex(x: &[f64], floor: f64) -> Vec<f64> {
    let m = x.len() as f64;
    // Breakpoints where coordinates unfloor as the shift grows; the total
    // is piecewise linear and nondecreasing in the shift.
    let mut breaks: Vec<f64> = x.iter().map(|&v| floor - v).collect();
    breaks.sort_by(f64::total_cmp);
    let mut sum_floored = floor * m;
    let mut sum_x_unfloored = 0.0;
    let mut active = 0.0;
    let mut solution = None;
    for &b in &breaks {
        // On the segment ending at b the active set is fixed; check whether
        // the target total is reached before the next coordinate unfloors.
        if active > 0.0 {
            let s = (1.0 - sum_floored - sum_x_unfloored) / active;
            if s <= b {
                solution = Some(s);
                break;
            }
        }
        sum_floored -= floor;
        sum_x_unfloored += floor - b;
        active += 1.0;
    }
    let s = solution.unwrap_or((1.0 - sum_x_unfloored) / active.max(1.0));
    x.iter().map(|&v| (v + s).max(floor)).collect()
}

/// Uniform sample from the simplex with the given total mass.
fn simplex_sample(rng: &mut ChaCha8Rng, dims: usize, total: f64) -> Vec<f64> {
    let mut g: Vec<f64> = (0..dims)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = g.iter().sum();
    for v in g.iter_mut() {
        *v = *v / sum * total;
    }
    g
}

/// All ways to split `steps` grid increments across `dims` coordinates.
fn compositions(steps: usize, dims: usize) -> Vec<Vec<usize>> {
    if dims == 1 {
        return vec![vec![steps]];
    }
    let mut out = Vec::new();
    for first in 0..=steps {
        for mut rest in compositions(steps - first, dims - 1) {
            let mut v = Vec::with_capacity(dims);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Steps for a simplex grid of `dims` coordinates and span `total`,
/// coarsened so the composition count stays under `budget`.
fn simplex_steps(total: f64, resolution: f64, dims: usize, budget: usize) -> usize {
    let mut steps = (total / resolution.max(1e-12)).ceil().max(1.0) as usize;
    while steps > 1 && binomial(steps + dims - 1, dims - 1) > budget as f64 {
        steps -= 1;
    }
    steps
}

fn simplex_grid(dims: usize, floor: f64, total_free: f64, resolution: f64, budget: usize) -> Vec<Vec<f64>> {
    if total_free <= 0.0 {
        return vec![vec![floor; dims]];
    }
    let steps = simplex_steps(total_free, resolution, dims, budget);
    compositions(steps, dims)
        .into_iter()
        .map(|c| {
            c.iter()
                .map(|&n| floor + n as f64 / steps as f64 * total_free)
                .collect()
        })
        .collect()
}

impl ProjectableSet<KlCost> for MeasureSet {
    fn project(&self, cost: &KlCost, side: Side, fixed: &BoundedMeasure) -> Result<BoundedMeasure> {
        self.check_alphabet(fixed)?;
        match self {
            MeasureSet::Coupling { problem, marginal } => {
                let (count, m) = (problem.component_count(), problem.outcome_count());
                let x = fixed.mass();
                let mut mass = vec![0.0; count * m];
                for y in 0..m {
                    let col: f64 = (0..count).map(|i| x[i * m + y].max(0.0)).sum();
                    for i in 0..count {
                        mass[i * m + y] = if col > 0.0 {
                            marginal[y] * x[i * m + y].max(0.0) / col
                        } else if marginal[y] == 0.0 {
                            0.0
                        } else if side == Side::Second {
                            // Zero reference column leaves the split free;
                            // spread evenly.
                            marginal[y] / count as f64
                        } else {
                            return Err(Error::Domain(format!(
                                "reference point has zero mass on outcome column {y} \
                                 but the marginal there is positive"
                            )));
                        };
                    }
                }
                Ok(self.measure(mass))
            }
            MeasureSet::MixtureWeights { problem } => {
                if side == Side::First {
                    return Err(Error::Domain(
                        "weight sets only support second-argument projections".into(),
                    ));
                }
                let m = problem.outcome_count();
                let marginals: Vec<f64> = (0..problem.component_count())
                    .map(|i| fixed.mass()[i * m..(i + 1) * m].iter().map(|v| v.max(0.0)).sum())
                    .collect();
                let (weights, _) = floored_scaling(&marginals, problem.weight_floor())?;
                let weights = WeightVector::new(weights, problem.weight_floor())?;
                Ok(problem.weight_point(&weights))
            }
            MeasureSet::FlooredSimplex { floor, .. } => {
                let (coeffs, _) = floored_scaling(fixed.mass(), *floor)?;
                Ok(self.measure(coeffs))
            }
            MeasureSet::MassBox { lo, hi, .. } => {
                let mass: Vec<f64> = match side {
                    // min_t t ln(t / q) over [lo, hi]: stationary at q / e.
                    Side::First => fixed
                        .mass()
                        .iter()
                        .zip(lo.iter().zip(hi))
                        .map(|(&q, (&l, &h))| (q / std::f64::consts::E).clamp(l, h))
                        .collect(),
                    // max_t p ln t over [lo, hi]: the upper endpoint.
                    Side::Second => hi.clone(),
                };
                Ok(self.measure(mass))
            }
            MeasureSet::Finite { points } => {
                let mut best: Option<(f64, &BoundedMeasure)> = None;
                for p in points {
                    let v = match side {
                        Side::First => cost.evaluate(p, fixed),
                        Side::Second => cost.evaluate(fixed, p),
                    };
                    if best.is_none() || v < best.unwrap().0 {
                        best = Some((v, p));
                    }
                }
                best.map(|(_, p)| p.clone())
                    .ok_or_else(|| Error::Domain("projection onto an empty finite set".into()))
            }
        }
    }

    fn contains(&self, cost: &KlCost, point: &BoundedMeasure, tol: f64) -> bool {
        if self.check_alphabet(point).is_err() {
            return false;
        }
        cost.metric(point, &self.nearest(cost, point)) <= tol
    }

    fn nearest(&self, _cost: &KlCost, point: &BoundedMeasure) -> BoundedMeasure {
        match self {
            MeasureSet::Coupling { problem, marginal } => {
                let (count, m) = (problem.component_count(), problem.outcome_count());
                let x = point.mass();
                let mut mass = vec![0.0; count * m];
                for y in 0..m {
                    let col: f64 = (0..count).map(|i| x[i * m + y].max(0.0)).sum();
                    for i in 0..count {
                        mass[i * m + y] = if col > 0.0 {
                            marginal[y] * x[i * m + y].max(0.0) / col
                        } else {
                            marginal[y] / count as f64
                        };
                    }
                }
                self.measure(mass)
            }
            MeasureSet::MixtureWeights { problem } => {
                let m = problem.outcome_count();
                let implied: Vec<f64> = (0..problem.component_count())
                    .map(|i| {
                        let q_row: f64 =
                            point.mass()[i * m..(i + 1) * m].iter().map(|v| v.max(0.0)).sum();
                        let mu_row: f64 = problem.components()[i].iter().sum();
                        q_row / mu_row
                    })
                    .collect();
                let w = shift_to_floored_simplex(&implied, problem.weight_floor());
                let w = WeightVector::new(w, problem.weight_floor())
                    .expect("shifted weights lie on the floored simplex");
                problem.weight_point(&w)
            }
            MeasureSet::FlooredSimplex { floor, .. } => {
                self.measure(shift_to_floored_simplex(point.mass(), *floor))
            }
            MeasureSet::MassBox { lo, hi, .. } => self.measure(
                point
                    .mass()
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&l, &h))| x.clamp(l, h))
                    .collect(),
            ),
            MeasureSet::Finite { points } => {
                let mut best: Option<(f64, &BoundedMeasure)> = None;
                for p in points {
                    let d = p.sup_distance(point).unwrap_or(f64::INFINITY);
                    if best.is_none() || d < best.unwrap().0 {
                        best = Some((d, p));
                    }
                }
                best.expect("nearest point of an empty finite set").1.clone()
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> BoundedMeasure {
        match self {
            MeasureSet::Coupling { problem, marginal } => {
                let (count, m) = (problem.component_count(), problem.outcome_count());
                let mut mass = vec![0.0; count * m];
                for (y, &total) in marginal.iter().enumerate() {
                    let col = simplex_sample(rng, count, total);
                    for i in 0..count {
                        mass[i * m + y] = col[i];
                    }
                }
                self.measure(mass)
            }
            MeasureSet::MixtureWeights { problem } => {
                let count = problem.component_count();
                let floor = problem.weight_floor();
                let free = 1.0 - count as f64 * floor;
                let w: Vec<f64> = simplex_sample(rng, count, free.max(0.0))
                    .into_iter()
                    .map(|v| v + floor)
                    .collect();
                let w = WeightVector::new(w, floor).expect("sampled weights are feasible");
                problem.weight_point(&w)
            }
            MeasureSet::FlooredSimplex { alphabet, floor } => {
                let m = alphabet.len();
                let free = 1.0 - m as f64 * floor;
                let mass: Vec<f64> = simplex_sample(rng, m, free.max(0.0))
                    .into_iter()
                    .map(|v| v + floor)
                    .collect();
                self.measure(mass)
            }
            MeasureSet::MassBox { lo, hi, .. } => self.measure(
                lo.iter()
                    .zip(hi)
                    .map(|(&l, &h)| l + rng.random::<f64>() * (h - l))
                    .collect(),
            ),
            MeasureSet::Finite { points } => {
                let idx = rng.random_range(0..points.len());
                points[idx].clone()
            }
        }
    }

    fn toward(&self, from: &BoundedMeasure, to: &BoundedMeasure, dist: f64) -> BoundedMeasure {
        let d = from.sup_distance(to).unwrap_or(f64::INFINITY);
        match self {
            MeasureSet::Finite { .. } => {
                if d <= dist {
                    to.clone()
                } else {
                    from.clone()
                }
            }
            _ => {
                // Convex families: interpolate; the sup metric scales
                // linearly along the segment.
                if d <= 0.0 {
                    return from.clone();
                }
                let t = (dist / d).min(1.0);
                let mass: Vec<f64> = from
                    .mass()
                    .iter()
                    .zip(to.mass())
                    .map(|(&a, &b)| a + t * (b - a))
                    .collect();
                self.measure(mass)
            }
        }
    }

    fn hausdorff_to(&self, other: &Self) -> f64 {
        match (self, other) {
            (
                MeasureSet::Coupling { problem: pa, marginal: ma },
                MeasureSet::Coupling { problem: pb, marginal: mb },
            ) if pa.joint_alphabet() == pb.joint_alphabet() => {
                // Exact under the sup metric: worst columns pay the full
                // marginal gap (mass removal can be forced onto one entry).
                ma.iter()
                    .zip(mb)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            }
            (
                MeasureSet::FlooredSimplex { alphabet: aa, floor: fa },
                MeasureSet::FlooredSimplex { alphabet: ab, floor: fb },
            ) if aa == ab => {
                // Corner-to-corner under the sup metric.
                (aa.len() as f64 - 1.0) * (fa - fb).abs()
            }
            (
                MeasureSet::MassBox { alphabet: aa, lo: la, hi: ha },
                MeasureSet::MassBox { alphabet: ab, lo: lb, hi: hb },
            ) if aa == ab => la
                .iter()
                .zip(lb)
                .map(|(a, b)| (a - b).abs())
                .chain(ha.iter().zip(hb).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max),
            (MeasureSet::MixtureWeights { problem: pa }, MeasureSet::MixtureWeights { problem: pb })
                if pa.joint_alphabet() == pb.joint_alphabet()
                    && pa.components() == pb.components()
                    && pa.weight_floor() == pb.weight_floor() =>
            {
                0.0
            }
            (MeasureSet::Finite { points: a }, MeasureSet::Finite { points: b }) => {
                let metric =
                    |x: &BoundedMeasure, y: &BoundedMeasure| x.sup_distance(y).unwrap_or(f64::INFINITY);
                grid_hausdorff(a, b, metric)
            }
            _ => {
                let res = (self.diameter_hint().max(other.diameter_hint()) / 40.0).max(1e-6);
                let metric =
                    |x: &BoundedMeasure, y: &BoundedMeasure| x.sup_distance(y).unwrap_or(f64::INFINITY);
                grid_hausdorff(&self.grid_points(res), &other.grid_points(res), metric)
            }
        }
    }

    fn grid_points(&self, resolution: f64) -> Vec<BoundedMeasure> {
        match self {
            MeasureSet::Coupling { problem, marginal } => {
                let (count, m) = (problem.component_count(), problem.outcome_count());
                let budget_per_col =
                    ((GRID_BUDGET as f64).powf(1.0 / m as f64).floor() as usize).max(2);
                let col_grids: Vec<Vec<Vec<f64>>> = marginal
                    .iter()
                    .map(|&total| simplex_grid(count, 0.0, total, resolution, budget_per_col))
                    .collect();
                let mut points: Vec<Vec<f64>> = vec![vec![0.0; count * m]];
                for (y, grid) in col_grids.iter().enumerate() {
                    let mut next = Vec::with_capacity(points.len() * grid.len());
                    for base in &points {
                        for col in grid {
                            let mut mass = base.clone();
                            for i in 0..count {
                                mass[i * m + y] = col[i];
                            }
                            next.push(mass);
                        }
                    }
                    points = next;
                }
                points.into_iter().map(|mass| self.measure(mass)).collect()
            }
            MeasureSet::MixtureWeights { problem } => {
                let count = problem.component_count();
                let floor = problem.weight_floor();
                simplex_grid(count, floor, 1.0 - count as f64 * floor, resolution, GRID_BUDGET)
                    .into_iter()
                    .map(|w| {
                        let w = WeightVector::new(w, floor).expect("grid weights are feasible");
                        problem.weight_point(&w)
                    })
                    .collect()
            }
            MeasureSet::FlooredSimplex { alphabet, floor } => {
                let m = alphabet.len();
                simplex_grid(m, *floor, 1.0 - m as f64 * floor, resolution, GRID_BUDGET)
                    .into_iter()
                    .map(|mass| self.measure(mass))
                    .collect()
            }
            MeasureSet::MassBox { lo, hi, .. } => {
                let dims = lo.len();
                let budget_per_axis =
                    ((GRID_BUDGET as f64).powf(1.0 / dims as f64).floor() as usize).max(2);
                let axes: Vec<Vec<f64>> = lo
                    .iter()
                    .zip(hi)
                    .map(|(&l, &h)| {
                        let steps = (((h - l) / resolution.max(1e-12)).ceil() as usize)
                            .clamp(1, budget_per_axis - 1);
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
                            let mut mass = base.clone();
                            mass.push(v);
                            next.push(mass);
                        }
                    }
                    points = next;
                }
                points.into_iter().map(|mass| self.measure(mass)).collect()
            }
            MeasureSet::Finite { points } => points.clone(),
        }
    }

    fn diameter_hint(&self) -> f64 {
        match self {
            MeasureSet::Coupling { marginal, .. } => {
                marginal.iter().cloned().fold(0.0, f64::max)
            }
            MeasureSet::MixtureWeights { problem } => {
                let free = 1.0 - problem.component_count() as f64 * problem.weight_floor();
                let mu_max = problem
                    .components()
                    .iter()
                    .flatten()
                    .cloned()
                    .fold(0.0, f64::max);
                free * mu_max
            }
            MeasureSet::FlooredSimplex { alphabet, floor } => {
                1.0 - alphabet.len() as f64 * floor
            }
            MeasureSet::MassBox { lo, hi, .. } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| h - l)
                .fold(0.0, f64::max),
            MeasureSet::Finite { points } => {
                let mut d = 0.0f64;
                for (i, a) in points.iter().enumerate() {
                    for b in &points[i + 1..] {
                        d = d.max(a.sup_distance(b).unwrap_or(0.0));
                    }
                }
                d
            }
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, MeasureSet::Finite { points } if points.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn alpha(m: usize) -> Alphabet {
        Alphabet::new((0..m).map(|i| format!("s{i}")).collect()).unwrap()
    }

    fn measure_on(a: &Alphabet, mass: &[f64]) -> BoundedMeasure {
        BoundedMeasure::new(a.clone(), mass.to_vec(), 0.0, mass.iter().sum::<f64>() + 1.0).unwrap()
    }

    fn two_comp_problem() -> Arc<MixtureProblem> {
        let outcomes = alpha(2);
        Arc::new(
            MixtureProblem::new(outcomes, vec![vec![0.9, 0.1], vec![0.1, 0.9]], 0.1).unwrap(),
        )
    }

    /// Projection must beat every grid point of the set, on both sides.
    fn assert_projection_optimal(set: &MeasureSet, fixed: &BoundedMeasure, side: Side, res: f64) {
        let cost = KlCost;
        let proj = set.project(&cost, side, fixed).unwrap();
        assert!(set.contains(&cost, &proj, 1e-7), "projection lies in the set");
        let value = match side {
            Side::First => cost.evaluate(&proj, fixed),
            Side::Second => cost.evaluate(fixed, &proj),
        };
        for g in set.grid_points(res) {
            let gv = match side {
                Side::First => cost.evaluate(&g, fixed),
                Side::Second => cost.evaluate(fixed, &g),
            };
            assert!(
                value <= gv + 1e-9,
                "grid point beats projection: {value} vs {gv}"
            );
        }
    }

    #[test]
    fn floored_simplex_projections_match_grid() {
        let set = MeasureSet::floored_simplex(alpha(3), 0.05).unwrap();
        let a = alpha(3);
        for mass in [
            vec![0.2, 0.5, 0.3],
            vec![0.01, 0.01, 0.98],
            vec![1.5, 0.3, 0.2],
        ] {
            let fixed = measure_on(&a, &mass);
            assert_projection_optimal(&set, &fixed, Side::First, 0.004);
            assert_projection_optimal(&set, &fixed, Side::Second, 0.004);
        }
    }

    #[test]
    fn mass_box_projections_match_grid() {
        let a = alpha(2);
        let set = MeasureSet::mass_box(a.clone(), vec![0.1, 0.2], vec![0.6, 0.9]).unwrap();
        for mass in [vec![0.5, 0.5], vec![2.0, 0.05], vec![0.3, 1.4]] {
            let fixed = measure_on(&a, &mass);
            assert_projection_optimal(&set, &fixed, Side::First, 0.002);
            assert_projection_optimal(&set, &fixed, Side::Second, 0.002);
        }
    }

    #[test]
    fn coupling_projections_match_grid() {
        let prob = two_comp_problem();
        let set = MeasureSet::coupling(prob.clone(), vec![0.4, 0.6]).unwrap();
        let joint = prob.joint_alphabet();
        for mass in [
            vec![0.45, 0.05, 0.05, 0.45],
            vec![0.25, 0.25, 0.25, 0.25],
            vec![0.7, 0.1, 0.1, 0.1],
        ] {
            let fixed = measure_on(joint, &mass);
            assert_projection_optimal(&set, &fixed, Side::First, 0.01);
            assert_projection_optimal(&set, &fixed, Side::Second, 0.01);
        }
    }

    #[test]
    fn weight_set_projection_matches_grid() {
        let prob = two_comp_problem();
        let set = MeasureSet::mixture_weights(prob.clone());
        let joint = prob.joint_alphabet();
        for mass in [
            vec![0.45, 0.05, 0.05, 0.45],
            vec![0.62, 0.18, 0.15, 0.05],
        ] {
            let fixed = measure_on(joint, &mass);
            assert_projection_optimal(&set, &fixed, Side::Second, 0.001);
        }
        // First-argument projections are not provided for this family.
        let fixed = measure_on(joint, &[0.25, 0.25, 0.25, 0.25]);
        assert!(set.project(&KlCost, Side::First, &fixed).is_err());
    }

    #[test]
    fn nearest_on_floored_simplex_is_minimax_optimal() {
        let set = MeasureSet::floored_simplex(alpha(3), 0.1).unwrap();
        let a = alpha(3);
        let cost = KlCost;
        for mass in [
            vec![0.0, 0.2, 0.3],
            vec![0.9, 0.9, 0.9],
            vec![0.05, 0.5, 0.45],
        ] {
            let x = measure_on(&a, &mass);
            let near = set.nearest(&cost, &x);
            assert!(set.contains(&cost, &near, 1e-9));
            let d = cost.metric(&x, &near);
            for g in set.grid_points(0.004) {
                assert!(d <= cost.metric(&x, &g) + 2e-3, "grid point closer than nearest");
            }
        }
    }

    #[test]
    fn coupling_hausdorff_formula_matches_grid() {
        let prob = two_comp_problem();
        let a = MeasureSet::coupling(prob.clone(), vec![0.4, 0.6]).unwrap();
        let b = MeasureSet::coupling(prob.clone(), vec![0.7, 0.3]).unwrap();
        let analytic = a.hausdorff_to(&b);
        assert!((analytic - 0.3).abs() < 1e-12);
        let res = 0.01;
        let grid = grid_hausdorff(&a.grid_points(res), &b.grid_points(res), |x, y| {
            x.sup_distance(y).unwrap()
        });
        assert!(
            (analytic - grid).abs() < 3.0 * res,
            "analytic {analytic} vs grid {grid}"
        );
    }

    #[test]
    fn floored_simplex_hausdorff_formula_matches_grid() {
        let a = MeasureSet::floored_simplex(alpha(3), 0.02).unwrap();
        let b = MeasureSet::floored_simplex(alpha(3), 0.12).unwrap();
        let analytic = a.hausdorff_to(&b);
        assert!((analytic - 2.0 * 0.1).abs() < 1e-12);
        let res = 0.005;
        let grid = grid_hausdorff(&a.grid_points(res), &b.grid_points(res), |x, y| {
            x.sup_distance(y).unwrap()
        });
        assert!(
            (analytic - grid).abs() < 3.0 * res,
            "analytic {analytic} vs grid {grid}"
        );
    }

    #[test]
    fn box_hausdorff_is_endpoint_gap() {
        let a = alpha(1);
        let s1 = MeasureSet::mass_box(a.clone(), vec![0.0], vec![1.0]).unwrap();
        let s2 = MeasureSet::mass_box(a.clone(), vec![0.5], vec![2.0]).unwrap();
        assert!((s1.hausdorff_to(&s2) - 1.0).abs() < 1e-12);
        // Identical sets and singletons.
        assert_eq!(s1.hausdorff_to(&s1), 0.0);
        let p1 = MeasureSet::mass_box(a.clone(), vec![0.2], vec![0.2]).unwrap();
        let p2 = MeasureSet::mass_box(a, vec![0.9], vec![0.9]).unwrap();
        assert!((p1.hausdorff_to(&p2) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn samples_land_in_their_sets() {
        let prob = two_comp_problem();
        let cost = KlCost;
        let sets = vec![
            MeasureSet::coupling(prob.clone(), vec![0.4, 0.6]).unwrap(),
            MeasureSet::mixture_weights(prob.clone()),
            MeasureSet::floored_simplex(alpha(3), 0.05).unwrap(),
            MeasureSet::mass_box(alpha(2), vec![0.1, 0.2], vec![0.6, 0.9]).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for set in &sets {
            for _ in 0..100 {
                let s = set.sample(&mut rng);
                assert!(set.contains(&cost, &s, 1e-7), "sample escapes {set:?}");
            }
        }
    }

    #[test]
    fn toward_stays_in_set_and_respects_budget() {
        let set = MeasureSet::floored_simplex(alpha(3), 0.05).unwrap();
        let cost = KlCost;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let from = set.sample(&mut rng);
            let to = set.sample(&mut rng);
            let moved = set.toward(&from, &to, 0.03);
            assert!(set.contains(&cost, &moved, 1e-9));
            assert!(cost.metric(&from, &moved) <= 0.03 + 1e-12);
        }
    }
}
