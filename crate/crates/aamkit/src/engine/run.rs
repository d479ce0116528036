use crate::engine::cost::{CostFunction, Side};
use crate::engine::schedule::SetSchedule;
use crate::engine::set::ProjectableSet;
use crate::engine::trace::{AamTrace, StoppingRule, Termination, TraceRecord};
use crate::error::{Error, Result};

/// Tolerance used for precondition membership checks of initial points.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Optional per-iteration bookkeeping for the convergence diagnostics.
///
/// `omega` is a modulus-of-continuity bound for the cost; `reference_pair`
/// is an (approximate) minimizer over the limit sets. When both are present
/// the run records the proof sequences `a_n` and `b_n`, realizing the
/// reference sequence by metric projection of the pair onto the revealed
/// sets.
pub struct Instrumentation<'a, C: CostFunction> {
    pub omega: Option<&'a dyn Fn(f64) -> f64>,
    pub reference_pair: Option<(C::Point, C::Point)>,
}

impl<'a, C: CostFunction> Default for Instrumentation<'a, C> {
    fn default() -> Self {
        Instrumentation {
            omega: None,
            reference_pair: None,
        }
    }
}

/// Classical alternating minimization over a fixed pair of sets.
///
/// Starting from `q0` in `q_set`, each iteration projects onto `p_set` with
/// the previous second argument fixed, then onto `q_set` with the fresh
/// first argument fixed. The cost sequence is non-increasing because every
/// step minimizes over a set containing the previous point.
pub fn run_classical<C, S>(
    cost: &C,
    p_set: &S,
    q_set: &S,
    q0: C::Point,
    stop: StoppingRule,
) -> Result<AamTrace<C::Point>>
where
    C: CostFunction,
    S: ProjectableSet<C> + Clone,
{
    let schedule = SetSchedule::constant(p_set.clone(), q_set.clone());
    run_loop(cost, &schedule, q0, stop, false, &Instrumentation::default())
}

/// Adaptive alternating minimization over a schedule of set pairs.
///
/// Specializes to `run_classical` (same points, bit for bit) when the
/// schedule is constant. Per-iteration set drift relative to the declared
/// limits is recorded on the trace.
pub fn run_aam<C, S>(
    cost: &C,
    schedule: &SetSchedule<S>,
    q0: C::Point,
    stop: StoppingRule,
) -> Result<AamTrace<C::Point>>
where
    C: CostFunction,
    S: ProjectableSet<C> + Clone,
{
    run_loop(cost, schedule, q0, stop, true, &Instrumentation::default())
}

/// `run_aam` with proof-sequence bookkeeping for the diagnostics.
pub fn run_aam_instrumented<C, S>(
    cost: &C,
    schedule: &SetSchedule<S>,
    q0: C::Point,
    stop: StoppingRule,
    instr: &Instrumentation<'_, C>,
) -> Result<AamTrace<C::Point>>
where
    C: CostFunction,
    S: ProjectableSet<C> + Clone,
{
    run_loop(cost, schedule, q0, stop, true, instr)
}

fn run_loop<C, S>(
    cost: &C,
    schedule: &SetSchedule<S>,
    q0: C::Point,
    stop: StoppingRule,
    track_eps: bool,
    instr: &Instrumentation<'_, C>,
) -> Result<AamTrace<C::Point>>
where
    C: CostFunction,
    S: ProjectableSet<C> + Clone,
{
    let q0_set = schedule
        .q_sets
        .at(0)
        .ok_or_else(|| Error::Domain("schedule has no initial second-argument set".into()))?;
    if !q0_set.contains(cost, &q0, MEMBERSHIP_TOL) {
        return Err(Error::Domain(
            "initial point is not a member of the initial second-argument set".into(),
        ));
    }

    let mut records: Vec<TraceRecord<C::Point>> = Vec::new();
    let mut prev_eps = if track_eps { schedule.eps_at(0) } else { None };
    let b_0 = match (&instr.reference_pair, schedule.p_sets.at(0)) {
        (Some((p_star, _)), Some(p_set0)) => {
            let p_star_0 = p_set0.nearest(cost, p_star);
            Some(cost.evaluate(&p_star_0, &q0))
        }
        _ => None,
    };
    records.push(TraceRecord {
        n: 0,
        p: None,
        q: q0.clone(),
        cost: None,
        cost_p_prev_q: None,
        eps: prev_eps,
        gamma: None,
        drift_ok: None,
        a_n: None,
        b_n: b_0,
    });

    let mut prev_q = q0;
    let mut prev_cost: Option<f64> = None;
    let mut stable = 0usize;
    let mut termination = Termination::Exhausted;

    for n in 1..=stop.max_iter {
        let (Some(p_set), Some(q_set)) = (schedule.p_sets.at(n), schedule.q_sets.at(n)) else {
            termination = Termination::ScheduleTruncated;
            break;
        };

        let p_n = p_set
            .project(cost, Side::First, &prev_q)
            .map_err(|e| Error::Projection {
                iteration: n,
                reason: e.to_string(),
            })?;
        let cost_p_prev_q = cost.evaluate(&p_n, &prev_q);
        let q_n = q_set
            .project(cost, Side::Second, &p_n)
            .map_err(|e| Error::Projection {
                iteration: n,
                reason: e.to_string(),
            })?;
        let cost_n = cost.evaluate(&p_n, &q_n);

        let eps_n = if track_eps { schedule.eps_at(n) } else { None };
        let gamma_n = match (prev_eps, eps_n) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let drift_ok = cost_n <= cost_p_prev_q + 1e-12 * (1.0 + cost_p_prev_q.abs());

        let (a_n, b_n) = instrument(cost, instr, &p_set, &q_n, cost_n, eps_n, gamma_n);

        records.push(TraceRecord {
            n,
            p: Some(p_n),
            q: q_n.clone(),
            cost: Some(cost_n),
            cost_p_prev_q: Some(cost_p_prev_q),
            eps: eps_n,
            gamma: gamma_n,
            drift_ok: Some(drift_ok),
            a_n,
            b_n,
        });

        if let Some(pc) = prev_cost {
            if (cost_n - pc).abs() < stop.tol {
                stable += 1;
            } else {
                stable = 0;
            }
            if stable >= stop.window {
                return Ok(AamTrace {
                    records,
                    termination: Termination::Converged,
                });
            }
        }

        prev_q = q_n;
        prev_cost = Some(cost_n);
        prev_eps = eps_n;
    }

    Ok(AamTrace {
        records,
        termination,
    })
}

fn instrument<C, S>(
    cost: &C,
    instr: &Instrumentation<'_, C>,
    p_set: &S,
    q_n: &C::Point,
    cost_n: f64,
    eps_n: Option<f64>,
    gamma_n: Option<f64>,
) -> (Option<f64>, Option<f64>)
where
    C: CostFunction,
    S: ProjectableSet<C>,
{
    let a_n = match (instr.omega, eps_n, gamma_n) {
        (Some(om), Some(e), Some(g)) => Some(cost_n - 2.0 * om(g) - om(e)),
        _ => None,
    };
    let b_n = instr.reference_pair.as_ref().map(|(p_star, _)| {
        let p_star_n = p_set.nearest(cost, p_star);
        cost.evaluate(&p_star_n, q_n)
    });
    (a_n, b_n)
}
