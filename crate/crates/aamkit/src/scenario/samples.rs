use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divergence::{MixtureProblem, WeightVector};
use crate::error::{Error, Result};

/// Draws `count` i.i.d. outcomes from the mixture of the problem's
/// components under the given weights.
///
/// Randomness comes entirely from the 64-bit seed through a portable
/// generator, so the sequence is identical across runs and platforms.
pub fn generate_mixture_samples(
    problem: &MixtureProblem,
    true_weights: &WeightVector,
    count: usize,
    seed: u64,
) -> Result<Vec<String>> {
    if true_weights.weights().len() != problem.component_count() {
        return Err(Error::ShapeMismatch(
            "weight count does not match component count".into(),
        ));
    }
    if !problem.is_normalized() {
        return Err(Error::Domain(
            "sample generation needs normalized component distributions".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = problem.outcomes().symbols();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = pick(true_weights.weights(), rng.random::<f64>());
        let y = pick(&problem.components()[i], rng.random::<f64>());
        out.push(symbols[y].clone());
    }
    Ok(out)
}

fn pick(cumulative_src: &[f64], u: f64) -> usize {
    let total: f64 = cumulative_src.iter().sum();
    let mut acc = 0.0;
    for (i, &w) in cumulative_src.iter().enumerate() {
        acc += w;
        if u * total < acc {
            return i;
        }
    }
    cumulative_src.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{empirical_distribution, Alphabet};

    fn problem() -> MixtureProblem {
        let outcomes = Alphabet::from_strs(&["a", "b"]).unwrap();
        MixtureProblem::new(outcomes, vec![vec![0.9, 0.1], vec![0.1, 0.9]], 0.05).unwrap()
    }

    #[test]
    fn zero_count_gives_empty_sequence() {
        let prob = problem();
        let w = WeightVector::new(vec![0.5, 0.5], 0.05).unwrap();
        assert!(generate_mixture_samples(&prob, &w, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn degenerate_components_yield_constant_samples() {
        let outcomes = Alphabet::from_strs(&["a", "b"]).unwrap();
        // All mass (up to the positivity floor) on the first symbol.
        let prob = MixtureProblem::new(
            outcomes,
            vec![vec![1.0 - 1e-9, 1e-9], vec![1.0 - 1e-9, 1e-9]],
            0.05,
        )
        .unwrap();
        let w = WeightVector::new(vec![0.3, 0.7], 0.05).unwrap();
        let samples = generate_mixture_samples(&prob, &w, 500, 2).unwrap();
        assert!(samples.iter().all(|s| s == "a"));
    }

    #[test]
    fn same_seed_reproduces_exactly() {
        let prob = problem();
        let w = WeightVector::new(vec![0.6, 0.4], 0.05).unwrap();
        let a = generate_mixture_samples(&prob, &w, 1000, 99).unwrap();
        let b = generate_mixture_samples(&prob, &w, 1000, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_mixture_samples(&prob, &w, 1000, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_distribution_approaches_the_mixture() {
        let prob = problem();
        let w = WeightVector::new(vec![0.6, 0.4], 0.05).unwrap();
        let samples = generate_mixture_samples(&prob, &w, 100_000, 7).unwrap();
        let emp = empirical_distribution(&samples, prob.outcomes()).unwrap();
        let mix = prob.mixture(&w);
        for (e, m) in emp.iter().zip(&mix) {
            assert!((e - m).abs() < 0.01, "empirical {e} vs mixture {m}");
        }
    }
}
