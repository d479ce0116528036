use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::cost::{CostFunction, Side};
use crate::error::Result;

/// Default slack below which a property inequality counts as satisfied.
pub const CHECK_TOL: f64 = 1e-9;

/// One failed inequality from a sampled property check.
#[derive(Debug, Clone)]
pub struct Violation {
    pub sample_index: usize,
    /// Amount by which the left-hand side exceeded the right-hand side.
    pub slack: f64,
}

/// Outcome of a sampled property check.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub checked: usize,
    pub tol: f64,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst_slack(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.slack)
            .fold(0.0, f64::max)
    }
}

/// Samples the three-point inequality
/// `delta(P, P~) + D(P~, Q) <= D(P, Q)`,
/// where `P~` projects the sampled `Q` onto the first-argument set.
///
/// Zero violations are expected when the cost/delta pair satisfies the
/// property on the given sets (convex sets for both built-in
/// instantiations); a report with entries is a counterexample certificate,
/// not an error.
pub fn check_three_point<C, S>(
    cost: &C,
    p_set: &S,
    q_set_prev: &S,
    sample_count: usize,
    rng_seed: u64,
) -> Result<ViolationReport>
where
    C: CostFunction,
    S: crate::engine::set::ProjectableSet<C>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut violations = Vec::new();
    for i in 0..sample_count {
        let p = p_set.sample(&mut rng);
        let q = q_set_prev.sample(&mut rng);
        let p_proj = p_set.project(cost, Side::First, &q)?;
        let lhs = cost.delta(&p, &p_proj) + cost.evaluate(&p_proj, &q);
        let rhs = cost.evaluate(&p, &q);
        if lhs > rhs + CHECK_TOL {
            violations.push(Violation {
                sample_index: i,
                slack: lhs - rhs,
            });
        }
    }
    Ok(ViolationReport {
        checked: sample_count,
        tol: CHECK_TOL,
        violations,
    })
}

/// Samples the four-point inequality
/// `D(P, Q~) <= D(P, Q) + delta(P, P~)`,
/// where `Q~` projects a sampled `P~` onto the second-argument set.
///
/// `P~` is drawn independently of `P`; every eighth sample reuses `P`
/// itself to exercise the degenerate equal-pair case.
pub fn check_four_point<C, S>(
    cost: &C,
    p_set: &S,
    q_set: &S,
    sample_count: usize,
    rng_seed: u64,
) -> Result<ViolationReport>
where
    C: CostFunction,
    S: crate::engine::set::ProjectableSet<C>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut violations = Vec::new();
    for i in 0..sample_count {
        let p = p_set.sample(&mut rng);
        let p_tilde = if i % 8 == 7 {
            p.clone()
        } else {
            p_set.sample(&mut rng)
        };
        let q = q_set.sample(&mut rng);
        let q_proj = q_set.project(cost, Side::Second, &p_tilde)?;
        let lhs = cost.evaluate(&p, &q_proj);
        let rhs = cost.evaluate(&p, &q) + cost.delta(&p, &p_tilde);
        if lhs > rhs + CHECK_TOL {
            violations.push(Violation {
                sample_index: i,
                slack: lhs - rhs,
            });
        }
    }
    Ok(ViolationReport {
        checked: sample_count,
        tol: CHECK_TOL,
        violations,
    })
}
