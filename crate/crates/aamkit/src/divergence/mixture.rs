use std::sync::Arc;

use crate::divergence::cost::KlCost;
use crate::divergence::measure::{Alphabet, BoundedMeasure};
use crate::divergence::sets::MeasureSet;
use crate::engine::{run_aam, run_classical, AamTrace, SetSchedule, SetSequence, StoppingRule};
use crate::error::{Error, Result};

/// Mixture decomposition instance: known component distributions on a
/// finite outcome set, a positive floor on the weights, and the joint
/// alphabet `{component} x {outcome}` the alternation runs over.
#[derive(Debug, Clone)]
pub struct MixtureProblem {
    outcomes: Alphabet,
    /// Row `i` is the component table `mu_i`, one entry per outcome.
    components: Vec<Vec<f64>>,
    weight_floor: f64,
    component_floor: f64,
    joint: Alphabet,
    normalized: bool,
}

impl MixtureProblem {
    /// Components must be strictly positive distributions; the weight floor
    /// must leave the weight simplex nonempty.
    pub fn new(outcomes: Alphabet, components: Vec<Vec<f64>>, weight_floor: f64) -> Result<Self> {
        let prob = Self::build(outcomes, components, weight_floor, true)?;
        for (i, row) in prob.components.iter().enumerate() {
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "component {i} sums to {total}, expected a distribution"
                )));
            }
        }
        Ok(prob)
    }

    /// Variant accepting strictly positive, not necessarily normalized
    /// component tables. The divergence machinery is measure-based, so the
    /// alternation and both projection rules are unaffected; only sample
    /// generation requires genuine distributions. Used by the portfolio
    /// reduction, where the tables are raw return columns.
    pub fn with_positive_components(
        outcomes: Alphabet,
        components: Vec<Vec<f64>>,
        weight_floor: f64,
    ) -> Result<Self> {
        Self::build(outcomes, components, weight_floor, false)
    }

    fn build(
        outcomes: Alphabet,
        components: Vec<Vec<f64>>,
        weight_floor: f64,
        normalized: bool,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("need at least one component".into()));
        }
        let m = outcomes.len();
        let mut component_floor = f64::INFINITY;
        for (i, row) in components.iter().enumerate() {
            if row.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "component {i} has {} entries for {m} outcomes",
                    row.len()
                )));
            }
            for &v in row {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::Domain(format!(
                        "component {i} has nonpositive entry {v}"
                    )));
                }
                component_floor = component_floor.min(v);
            }
        }
        let count = components.len();
        if !(weight_floor > 0.0) {
            return Err(Error::Domain(format!(
                "weight floor must be positive, got {weight_floor}"
            )));
        }
        if count as f64 * weight_floor > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "infeasible weight floor: {count} components with floor {weight_floor} \
                 cannot sum to 1"
            )));
        }
        let joint = Alphabet::joint(count, &outcomes)?;
        Ok(MixtureProblem {
            outcomes,
            components,
            weight_floor,
            component_floor,
            joint,
            normalized,
        })
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &Alphabet {
        &self.outcomes
    }

    pub fn joint_alphabet(&self) -> &Alphabet {
        &self.joint
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Pointwise floor of the component tables.
    pub fn component_floor(&self) -> f64 {
        self.component_floor
    }

    pub fn weight_floor(&self) -> f64 {
        self.weight_floor
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The mixture `sum_i w_i mu_i` as a table over outcomes.
    pub fn mixture(&self, weights: &WeightVector) -> Vec<f64> {
        let mut out = vec![0.0; self.outcome_count()];
        for (w, row) in weights.weights().iter().zip(&self.components) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += w * v;
            }
        }
        out
    }

    /// The joint point `Q(i, y) = w_i mu_i(y)` of the weight set.
    pub fn weight_point(&self, weights: &WeightVector) -> BoundedMeasure {
        let mut mass = Vec::with_capacity(self.joint.len());
        for (w, row) in weights.weights().iter().zip(&self.components) {
            for &v in row {
                mass.push(w * v);
            }
        }
        let cap = mass.iter().sum::<f64>() + 1.0;
        BoundedMeasure::new(self.joint.clone(), mass, 0.0, cap)
            .expect("weight point is a valid measure")
    }
}

/// Weights on the floored simplex: nonnegative, summing to one, each at
/// least the problem's weight floor.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    floor: f64,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>, floor: f64) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if w < floor - 1e-9 {
                return Err(Error::Domain(format!(
                    "weight {i} is {w}, below the floor {floor}"
                )));
            }
        }
        Ok(WeightVector { weights, floor })
    }

    pub fn uniform(count: usize, floor: f64) -> Result<Self> {
        Self::new(vec![1.0 / count as f64; count], floor)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Scaling-with-floor rule shared by the weight-set projection and the
/// floored-simplex projections: given nonnegative scores, return the
/// coefficients proportional to the scores above an index threshold and
/// pinned to the floor below it, summing to one.
///
/// Scores are ranked descending (stable, ties by original index); the
/// threshold is found by scanning the split point from all-proportional
/// down, accepting the first split where scaled scores sit strictly above
/// the floor on one side and at most the floor on the other.
pub(crate) fn floored_scaling(scores: &[f64], floor: f64) -> Result<(Vec<f64>, usize)> {
    let count = scores.len();
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut prefix = vec![0.0; count + 1];
    for (rank, &idx) in order.iter().enumerate() {
        prefix[rank + 1] = prefix[rank] + scores[idx];
    }

    for split in (1..=count).rev() {
        let eta = prefix[split] / (1.0 - (count - split) as f64 * floor);
        let boundary_in = scores[order[split - 1]] / eta > floor;
        let boundary_out = split == count || scores[order[split]] / eta <= floor;
        if boundary_in && boundary_out {
            let mut out = vec![floor; count];
            for &idx in &order[..split] {
                out[idx] = scores[idx] / eta;
            }
            return Ok((out, split));
        }
    }
    Err(Error::Internal(format!(
        "no feasible scaling threshold for scores {scores:?} with floor {floor}"
    )))
}

/// Minimizer of the divergence from a fixed joint distribution to the
/// weight set `{Q(i, y) = w_i mu_i(y)}`.
///
/// Components are ranked by marginal mass; masses above the threshold are
/// rescaled by the common factor, the rest pinned to the floor.
pub fn project_onto_weight_set(
    p: &BoundedMeasure,
    problem: &MixtureProblem,
) -> Result<WeightVector> {
    if p.alphabet() != problem.joint_alphabet() {
        return Err(Error::AlphabetMismatch(
            "point is not on the problem's joint alphabet".into(),
        ));
    }
    let total = p.total_mass();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "weight-set projection needs a probability distribution; mass is {total}"
        )));
    }
    let m = problem.outcome_count();
    let marginals: Vec<f64> = (0..problem.component_count())
        .map(|i| p.mass()[i * m..(i + 1) * m].iter().sum())
        .collect();
    let (weights, _split) = floored_scaling(&marginals, problem.weight_floor())?;
    WeightVector::new(weights, problem.weight_floor())
}

/// Minimizer of the divergence over the coupling set `{P : Y-marginal =
/// p_bar, P >= 0}` for a fixed weight-set point:
/// `P(i, y) = w_i mu_i(y) p_bar(y) / sum_j w_j mu_j(y)`.
///
/// The output's Y-marginal equals `p_bar` exactly, and entries stay above
/// half the product of the weight and squared component floors wherever
/// `p_bar` is at least half the component floor.
pub fn project_onto_coupling_set(
    weights: &WeightVector,
    p_bar: &[f64],
    problem: &MixtureProblem,
) -> Result<BoundedMeasure> {
    let m = problem.outcome_count();
    if p_bar.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "marginal has {} entries for {m} outcomes",
            p_bar.len()
        )));
    }
    if weights.weights().len() != problem.component_count() {
        return Err(Error::ShapeMismatch(
            "weight count does not match component count".into(),
        ));
    }
    let mut mix = vec![0.0; m];
    for (w, row) in weights.weights().iter().zip(problem.components()) {
        for (o, v) in mix.iter_mut().zip(row) {
            *o += w * v;
        }
    }
    let mut mass = Vec::with_capacity(problem.joint_alphabet().len());
    for (w, row) in weights.weights().iter().zip(problem.components()) {
        for ((&v, &pb), &mx) in row.iter().zip(p_bar).zip(&mix) {
            mass.push(w * v * pb / mx);
        }
    }
    let cap = p_bar.iter().sum::<f64>() + 1e-9;
    BoundedMeasure::new(problem.joint_alphabet().clone(), mass, 0.0, cap)
}

/// Frequency counts of the samples, normalized by the sample count.
pub fn empirical_distribution(samples: &[String], alphabet: &Alphabet) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Domain(
            "empirical distribution of an empty sample sequence".into(),
        ));
    }
    let mut counts = vec![0usize; alphabet.len()];
    for s in samples {
        let idx = alphabet
            .index_of(s)
            .ok_or_else(|| Error::Domain(format!("sample symbol `{s}` is outside the alphabet")))?;
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    Ok(counts.iter().map(|&c| c as f64 / n).collect())
}

/// Raises an empirical distribution to the floor `mu0 / 2`:
/// `out(y) = mu0/2 + lambda (p(y) - mu0/2)^+`, with `lambda` solved in
/// closed form so the output sums to one.
///
/// When no entry is below the floor the input is returned unchanged.
pub fn clamp_empirical(p_bar: &[f64], mu0: f64) -> Result<Vec<f64>> {
    let m = p_bar.len();
    let floor = mu0 / 2.0;
    if !(floor > 0.0) || floor >= 1.0 / m as f64 {
        return Err(Error::Domain(format!(
            "clamp floor {floor} must lie strictly between 0 and 1/{m}"
        )));
    }
    if p_bar.iter().all(|&x| x >= floor) {
        return Ok(p_bar.to_vec());
    }
    let plus: f64 = p_bar.iter().map(|&x| (x - floor).max(0.0)).sum();
    if plus <= 0.0 {
        return Err(Error::Domain(
            "degenerate input: no mass above the clamp floor".into(),
        ));
    }
    let lambda = (1.0 - m as f64 * floor) / plus;
    Ok(p_bar
        .iter()
        .map(|&x| floor + lambda * (x - floor).max(0.0))
        .collect())
}

/// How the sample stream feeds the constraint sets during estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    /// One fixed coupling set built from the full-sample empirical
    /// distribution: the classical algorithm, whose fixed point is the
    /// maximum-likelihood weight vector.
    Batch,
    /// Coupling sets rebuilt from floored empirical distributions of
    /// growing sample prefixes, `batch_size` new samples per iteration.
    /// The weight set stays fixed. The drift reported on the trace is
    /// measured against the full-sample limit and is itself an estimate.
    Adaptive { batch_size: usize },
}

/// Estimates mixture weights from samples by alternating the two
/// projections, returning the weight marginal of the final weight-set
/// point together with the full trace.
pub fn estimate_mixture_weights(
    samples: &[String],
    problem: &MixtureProblem,
    stop: StoppingRule,
    mode: EstimationMode,
) -> Result<(WeightVector, AamTrace<BoundedMeasure>)> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples to estimate from".into()));
    }
    let prob = Arc::new(problem.clone());
    let q_set = MeasureSet::mixture_weights(prob.clone());
    let q0 = problem.weight_point(&WeightVector::uniform(
        problem.component_count(),
        problem.weight_floor(),
    )?);

    let trace = match mode {
        EstimationMode::Batch => {
            let p_bar = empirical_distribution(samples, problem.outcomes())?;
            let p_set = MeasureSet::coupling(prob.clone(), p_bar)?;
            run_classical(&KlCost, &p_set, &q_set, q0, stop)?
        }
        EstimationMode::Adaptive { batch_size } => {
            if batch_size == 0 {
                return Err(Error::Domain("batch size must be at least 1".into()));
            }
            // Cumulative empirical snapshots; snapshot l is the
            // distribution of the first l + 1 samples.
            let mut snaps: Vec<Vec<f64>> = Vec::with_capacity(samples.len());
            let mut counts = vec![0usize; problem.outcome_count()];
            for (l, s) in samples.iter().enumerate() {
                let idx = problem.outcomes().index_of(s).ok_or_else(|| {
                    Error::Domain(format!("sample symbol `{s}` is outside the alphabet"))
                })?;
                counts[idx] += 1;
                let n = (l + 1) as f64;
                snaps.push(counts.iter().map(|&c| c as f64 / n).collect());
            }
            let mu0 = problem.component_floor();
            let total = samples.len();
            let limit_marginal = clamp_empirical(&snaps[total - 1], mu0)?;
            let p_limit = MeasureSet::coupling(prob.clone(), limit_marginal)?;
            let snaps = Arc::new(snaps);
            let gen_prob = prob.clone();
            let gen = move |n: usize| {
                let len = (n * batch_size).clamp(1, total);
                let marginal = clamp_empirical(&snaps[len - 1], mu0)
                    .expect("clamped empirical distribution");
                MeasureSet::coupling(gen_prob.clone(), marginal)
                    .expect("coupling set over a valid marginal")
            };
            let schedule = SetSchedule {
                p_sets: SetSequence::Generated(Box::new(gen)),
                q_sets: SetSequence::Constant(q_set.clone()),
                p_limit,
                q_limit: q_set,
            };
            run_aam(&KlCost, &schedule, q0, stop)?
        }
    };

    let final_q = trace
        .records
        .last()
        .map(|r| r.q.clone())
        .ok_or_else(|| Error::Internal("empty trace".into()))?;
    let m = problem.outcome_count();
    let weights: Vec<f64> = (0..problem.component_count())
        .map(|i| {
            let q_row: f64 = final_q.mass()[i * m..(i + 1) * m].iter().sum();
            let mu_row: f64 = problem.components()[i].iter().sum();
            q_row / mu_row
        })
        .collect();
    let weights = WeightVector::new(weights, problem.weight_floor())?;
    Ok((weights, trace))
}

/// Stationarity residual of the likelihood objective at the given weights:
/// zero (within tolerance) exactly at the constrained maximum-likelihood
/// optimum for the given empirical distribution.
pub fn ml_stationarity_gap(
    weights: &WeightVector,
    p_bar: &[f64],
    problem: &MixtureProblem,
) -> f64 {
    let mix = problem.mixture(weights);
    let grads: Vec<f64> = problem
        .components()
        .iter()
        .map(|row| {
            -row.iter()
                .zip(p_bar)
                .zip(&mix)
                .map(|((&mu, &pb), &mx)| pb * mu / mx)
                .sum::<f64>()
        })
        .collect();
    let unfloored: Vec<usize> = (0..grads.len())
        .filter(|&i| weights.weights()[i] > problem.weight_floor() + 1e-9)
        .collect();
    let lambda = if unfloored.is_empty() {
        grads.iter().cloned().fold(f64::INFINITY, f64::min)
    } else {
        unfloored.iter().map(|&i| grads[i]).sum::<f64>() / unfloored.len() as f64
    };
    let mut gap = 0.0f64;
    for i in 0..grads.len() {
        if unfloored.contains(&i) {
            gap = gap.max((grads[i] - lambda).abs());
        } else {
            gap = gap.max(lambda - grads[i]);
        }
    }
    gap
}
