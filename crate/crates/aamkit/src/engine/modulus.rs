use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::cost::CostFunction;
use crate::engine::set::ProjectableSet;

/// Sampled lower bound for the modulus of continuity of a cost over a
/// domain, queryable at any distance.
///
/// The table holds witness pairs of argument pairs together with their
/// sum-metric distance and cost gap. A query at `t` returns the larger of
/// two certified lower bounds: the largest gap among witnesses at distance
/// at most `t`, and the chain bound `t * g / (2d)` from witnesses at
/// distance `d >= t` (valid because a witness path on a segment-connected
/// domain splits into at most `2d/t` hops of length `t`). Estimates are
/// monotone non-decreasing in `t` and never exceed the true modulus.
pub struct ModulusTable {
    /// (pair distance, prefix-max gap, suffix-max gap/(2 distance)),
    /// sorted by distance.
    entries: Vec<(f64, f64, f64)>,
}

impl ModulusTable {
    /// Draw `sample_count` witness pairs from `domain`. Half are
    /// independent draws; half move a draw toward another by a log-uniform
    /// distance, so short ranges get witnesses too.
    pub fn build<C, S>(cost: &C, domain: &S, sample_count: usize, rng_seed: u64) -> Self
    where
        C: CostFunction,
        S: ProjectableSet<C>,
    {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let diam = domain.diameter_hint().max(f64::MIN_POSITIVE);
        // Six decades of scales below the diameter.
        let scale_range = (1e6f64).ln();

        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(sample_count);
        for j in 0..sample_count {
            let a = domain.sample(&mut rng);
            let b = domain.sample(&mut rng);
            let (a2, b2) = if j % 2 == 0 {
                (domain.sample(&mut rng), domain.sample(&mut rng))
            } else {
                let ta = domain.sample(&mut rng);
                let tb = domain.sample(&mut rng);
                let radius = 2.0 * diam * (-rng.random::<f64>() * scale_range).exp();
                let split = rng.random::<f64>();
                (
                    domain.toward(&a, &ta, radius * split),
                    domain.toward(&b, &tb, radius * (1.0 - split)),
                )
            };
            let d2 = cost.metric(&a, &a2) + cost.metric(&b, &b2);
            let gap = (cost.evaluate(&a, &b) - cost.evaluate(&a2, &b2)).abs();
            raw.push((d2, gap));
        }

        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut entries: Vec<(f64, f64, f64)> =
            raw.iter().map(|&(d, g)| (d, g, 0.0)).collect();
        let mut running = 0.0f64;
        for e in entries.iter_mut() {
            running = running.max(e.1);
            e.1 = running;
        }
        let mut slope = 0.0f64;
        for (i, &(d, g)) in raw.iter().enumerate().rev() {
            if d > 1e-300 {
                slope = slope.max(g / (2.0 * d));
            }
            entries[i].2 = slope;
        }
        ModulusTable { entries }
    }

    /// Certified lower bound on the modulus at distance `t`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        // binary search for the first entry with distance > t
        let mut lo = 0usize;
        let mut hi = self.entries.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.entries[mid].0 <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let near = if lo == 0 { 0.0 } else { self.entries[lo - 1].1 };
        let chained = if lo < self.entries.len() {
            t * self.entries[lo].2
        } else {
            0.0
        };
        near.max(chained)
    }

    /// Closure view for APIs that take a modulus function.
    pub fn as_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.eval(t)
    }
}

/// One-shot sampled estimate of the modulus of continuity at distance `t`.
///
/// The estimate is a lower bound on the true modulus; diagnostics built on
/// it are necessary-condition checks, not sufficient ones.
pub fn estimate_modulus<C, S>(
    cost: &C,
    domain: &S,
    t: f64,
    sample_count: usize,
    rng_seed: u64,
) -> f64
where
    C: CostFunction,
    S: ProjectableSet<C>,
{
    ModulusTable::build(cost, domain, sample_count, rng_seed).eval(t)
}
