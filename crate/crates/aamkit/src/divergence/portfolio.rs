use crate::divergence::measure::{Alphabet, BoundedMeasure};
use crate::divergence::mixture::{
    estimate_mixture_weights, EstimationMode, MixtureProblem, WeightVector,
};
use crate::engine::{AamTrace, StoppingRule};
use crate::error::{Error, Result};

/// Log-optimal portfolio weights over empirical return scenarios.
///
/// Maximizes the empirical mean of `ln sum_i w_i R(l, i)` over weight
/// vectors with the given floor, by reduction to mixture-weight
/// estimation: each scenario row becomes an outcome observed once, and the
/// raw (positive, unnormalized) return columns become the component
/// tables. With that encoding the divergence from the empirical outcome
/// distribution to the weight set differs from the negated log-wealth
/// objective by a constant, so the alternation's weight marginal is the
/// log-optimal portfolio, with the floor applied to the portfolio weights
/// themselves.
pub fn log_optimal_portfolio(
    return_samples: &[Vec<f64>],
    weight_floor: f64,
    stop: StoppingRule,
) -> Result<(WeightVector, AamTrace<BoundedMeasure>)> {
    let rows = return_samples.len();
    if rows == 0 {
        return Err(Error::Domain("no return samples".into()));
    }
    let assets = return_samples[0].len();
    if assets == 0 {
        return Err(Error::Domain("no assets in the return matrix".into()));
    }
    for (l, row) in return_samples.iter().enumerate() {
        if row.len() != assets {
            return Err(Error::ShapeMismatch(format!(
                "return row {l} has {} entries, expected {assets}",
                row.len()
            )));
        }
        for &r in row {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::Domain(format!(
                    "nonpositive return {r} in scenario {l}"
                )));
            }
        }
    }

    let outcomes = Alphabet::new((0..rows).map(|l| format!("s{l}")).collect())?;
    // Component i's table over outcomes is asset i's return column.
    let components: Vec<Vec<f64>> = (0..assets)
        .map(|i| return_samples.iter().map(|row| row[i]).collect())
        .collect();
    let problem = MixtureProblem::with_positive_components(outcomes.clone(), components, weight_floor)?;

    let samples: Vec<String> = outcomes.symbols().to_vec();
    estimate_mixture_weights(&samples, &problem, stop, EstimationMode::Batch)
}

/// Empirical mean of `ln sum_i w_i R(l, i)`; the objective the portfolio
/// weights maximize.
pub fn empirical_log_wealth(return_samples: &[Vec<f64>], weights: &[f64]) -> f64 {
    let n = return_samples.len() as f64;
    return_samples
        .iter()
        .map(|row| {
            row.iter()
                .zip(weights)
                .map(|(&r, &w)| r * w)
                .sum::<f64>()
                .ln()
        })
        .sum::<f64>()
        / n
}
