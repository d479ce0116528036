use crate::divergence::measure::BoundedMeasure;
use crate::engine::CostFunction;
use crate::error::{Error, Result};

/// Divergence cost on the measure space, with the auxiliary function that
/// satisfies the three- and four-point properties on convex sets.
///
/// Logarithms are natural.
#[derive(Debug, Clone, Copy, Default)]
pub struct KlCost;

fn kl_sum(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            acc += pi * (pi / qi).ln();
        }
    }
    acc
}

impl CostFunction for KlCost {
    type Point = BoundedMeasure;

    fn evaluate(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        debug_assert!(a.alphabet() == b.alphabet(), "alphabet mismatch");
        kl_sum(a.mass(), b.mass())
    }

    /// `D(p || p~) - sum(p - p~)`; coincides with the divergence whenever
    /// the two arguments carry equal total mass, and may be negative
    /// otherwise.
    fn delta(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.evaluate(a, b) - (a.total_mass() - b.total_mass())
    }

    fn metric(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        a.sup_distance(b).expect("alphabet mismatch")
    }
}

fn check_pair(p: &BoundedMeasure, q: &BoundedMeasure) -> Result<()> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            p.alphabet(),
            q.alphabet()
        )));
    }
    for (i, (&pi, &qi)) in p.mass().iter().zip(q.mass()).enumerate() {
        if pi < 0.0 {
            return Err(Error::FloorViolation(format!(
                "left argument has negative mass {pi} at symbol `{}`",
                p.alphabet().symbols()[i]
            )));
        }
        if qi <= 0.0 {
            return Err(Error::FloorViolation(format!(
                "right argument has nonpositive mass {qi} at symbol `{}`; \
                 divergence requires a positive floor there",
                q.alphabet().symbols()[i]
            )));
        }
    }
    Ok(())
}

/// Divergence `sum_s p(s) ln(p(s)/q(s))` between two measures on the same
/// alphabet. Zero entries of `p` contribute zero; `q` must be strictly
/// positive so the value is finite.
pub fn kl_divergence(p: &BoundedMeasure, q: &BoundedMeasure) -> Result<f64> {
    check_pair(p, q)?;
    Ok(kl_sum(p.mass(), q.mass()))
}

/// The auxiliary function of the divergence instantiation:
/// `D(p || p~) - sum_s (p(s) - p~(s))`.
///
/// Equals `kl_divergence` when both arguments have the same total mass;
/// nonnegativity is only guaranteed in that case.
pub fn delta_div(p: &BoundedMeasure, p_tilde: &BoundedMeasure) -> Result<f64> {
    check_pair(p, p_tilde)?;
    Ok(kl_sum(p.mass(), p_tilde.mass()) - (p.total_mass() - p_tilde.total_mass()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::measure::Alphabet;

    fn dist(mass: &[f64]) -> BoundedMeasure {
        let a = Alphabet::new((0..mass.len()).map(|i| format!("s{i}")).collect()).unwrap();
        BoundedMeasure::new(a, mass.to_vec(), 0.0, mass.iter().sum::<f64>() + 1.0).unwrap()
    }

    #[test]
    fn kl_zero_iff_equal_distributions() {
        let p = dist(&[0.5, 0.5]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let q = dist(&[0.25, 0.75]);
        assert!(kl_divergence(&p, &q).unwrap() > 0.0);
    }

    #[test]
    fn kl_matches_direct_summation() {
        // 0.5 ln 2 + 0.5 ln(2/3), summed at higher precision offline.
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.25, 0.75]);
        let expected = 0.5 * (2.0f64).ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((kl_divergence(&p, &q).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.14384).abs() < 1e-5);
    }

    #[test]
    fn kl_is_convex_in_first_argument() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                let a: f64 = rng.random::<f64>().max(1e-3);
                let b: f64 = rng.random::<f64>().max(1e-3);
                let c: f64 = rng.random::<f64>().max(1e-3);
                let t = a + b + c;
                dist(&[a / t, b / t, c / t])
            };
            let p1 = draw(&mut rng);
            let p2 = draw(&mut rng);
            let q = draw(&mut rng);
            let lambda: f64 = rng.random();
            let mix_mass: Vec<f64> = p1
                .mass()
                .iter()
                .zip(p2.mass())
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect();
            let mix = dist(&mix_mass);
            let lhs = kl_divergence(&mix, &q).unwrap();
            let rhs = lambda * kl_divergence(&p1, &q).unwrap()
                + (1.0 - lambda) * kl_divergence(&p2, &q).unwrap();
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn delta_equals_kl_for_equal_mass() {
        let p = dist(&[0.3, 0.7]);
        let q = dist(&[0.6, 0.4]);
        let kl = kl_divergence(&p, &q).unwrap();
        let de = delta_div(&p, &q).unwrap();
        assert!((kl - de).abs() < 1e-15);
        assert_eq!(delta_div(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn delta_on_unequal_mass_measures() {
        // 0.6 ln 0.6 - (0.6 - 1.0), evaluated directly.
        let p = dist(&[0.3, 0.3]);
        let pt = dist(&[0.5, 0.5]);
        let expected = 0.6 * (0.6f64).ln() + 0.4;
        let got = delta_div(&p, &pt).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((expected - 0.09350).abs() < 1e-4);
    }

    #[test]
    fn zero_right_mass_is_a_floor_violation() {
        let p = dist(&[0.5, 0.5]);
        let a = p.alphabet().clone();
        let q = BoundedMeasure::new(a, vec![1.0, 0.0], 0.0, 1.1).unwrap();
        assert!(matches!(
            kl_divergence(&p, &q),
            Err(Error::FloorViolation(_))
        ));
    }

    #[test]
    fn alphabet_mismatch_is_reported() {
        let p = dist(&[0.5, 0.5]);
        let other = Alphabet::from_strs(&["x", "y"]).unwrap();
        let q = BoundedMeasure::distribution(other, vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            kl_divergence(&p, &q),
            Err(Error::AlphabetMismatch(_))
        ));
    }
}
