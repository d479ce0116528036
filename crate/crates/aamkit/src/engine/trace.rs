use serde::{Deserialize, Serialize};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Cost change stayed below the stopping tolerance for the required
    /// number of consecutive iterations.
    Converged,
    /// The iteration cap was reached first.
    Exhausted,
    /// A finite schedule ran out of sets before the stopping rule fired.
    ScheduleTruncated,
}

/// Stopping rule for the alternation loop.
///
/// The iteration halts once the absolute cost change stays below `tol` for
/// `window` consecutive iterations, or at `max_iter`, whichever comes first.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_iter: usize,
    pub tol: f64,
    pub window: usize,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule {
            max_iter: 10_000,
            tol: 1e-9,
            window: 5,
        }
    }
}

impl StoppingRule {
    pub fn new(max_iter: usize, tol: f64, window: usize) -> Self {
        StoppingRule {
            max_iter,
            tol,
            window,
        }
    }
}

/// One iteration of an alternation run.
///
/// Record 0 holds the initial point; cost fields start at record 1.
/// `cost_p_prev_q` is `D(P_n, Q_{n-1})`, kept so the drift inequality can be
/// re-checked later against any modulus bound. `a_n`/`b_n` are the proof
/// sequences populated only on instrumented runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<P> {
    pub n: usize,
    pub p: Option<P>,
    pub q: P,
    /// `D(P_n, Q_n)`.
    pub cost: Option<f64>,
    /// `D(P_n, Q_{n-1})`.
    pub cost_p_prev_q: Option<f64>,
    /// `d_H(P_n, P) + d_H(Q_n, Q)`; `None` for fixed-set runs.
    pub eps: Option<f64>,
    /// `eps_{n-1} + eps_n`.
    pub gamma: Option<f64>,
    /// Whether the per-step cost did not increase, i.e. the drift bound
    /// holds with zero modulus allowance. Drifting schedules may legally
    /// set this false; the drift diagnostic re-checks with a modulus.
    pub drift_ok: Option<bool>,
    pub a_n: Option<f64>,
    pub b_n: Option<f64>,
}

/// Full record of an alternation run.
#[derive(Debug, Clone)]
pub struct AamTrace<P> {
    pub records: Vec<TraceRecord<P>>,
    pub termination: Termination,
}

impl<P: Clone> AamTrace<P> {
    /// Cost sequence `D(P_n, Q_n)` for `n >= 1`.
    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.cost).collect()
    }

    pub fn final_cost(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.cost)
    }

    /// Number of alternation iterations performed (records minus the
    /// initial one).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    /// Minimum cost over the trailing `fraction` of iterations (at least
    /// one record). A finite-run stand-in for the liminf of the cost.
    pub fn liminf_estimate(&self, fraction: f64) -> Option<f64> {
        let n = self.records.len();
        if n <= 1 {
            return None;
        }
        let take = (((n - 1) as f64) * fraction).ceil().max(1.0) as usize;
        self.records[n - take..]
            .iter()
            .filter_map(|r| r.cost)
            .fold(None, |acc, c| {
                Some(match acc {
                    None => c,
                    Some(a) if c < a => c,
                    Some(a) => a,
                })
            })
    }

    /// Candidate limit points: trailing-window pairs clustered at
    /// `radius` in the sum metric. Finite traces cannot realize
    /// subsequential limits exactly, so clusters stand in for them.
    pub fn limit_point_candidates(
        &self,
        fraction: f64,
        radius: f64,
        pair_metric: impl Fn((&P, &P), (&P, &P)) -> f64,
    ) -> Vec<(P, P)> {
        let n = self.records.len();
        if n <= 1 {
            return Vec::new();
        }
        let take = (((n - 1) as f64) * fraction).ceil().max(1.0) as usize;
        let mut reps: Vec<(P, P)> = Vec::new();
        for rec in &self.records[n - take..] {
            let (Some(p), q) = (&rec.p, &rec.q) else {
                continue;
            };
            let is_new = reps
                .iter()
                .all(|(rp, rq)| pair_metric((rp, rq), (p, q)) > radius);
            if is_new {
                reps.push((p.clone(), q.clone()));
            }
        }
        reps
    }
}
