use crate::engine::trace::AamTrace;

/// One per-iteration inequality evaluation inside a diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct DiagRow {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Outcome of a trace diagnostic.
///
/// `partial_sums` carries the running series the diagnostic tracks; for the
/// drift check that is the summability proxy of the modulus at twice the
/// drift, for the recursion check the positive parts of the shortfall.
#[derive(Debug, Clone)]
pub struct DiagnosticReport {
    pub name: &'static str,
    pub evaluable: bool,
    pub note: Option<String>,
    pub rows: Vec<DiagRow>,
    pub violations: usize,
    pub worst_slack: f64,
    pub partial_sums: Vec<f64>,
    /// Heuristic flag: whether the tracked series looks summable (tail
    /// increments shrinking) as opposed to log-divergent.
    pub summable_hint: Option<bool>,
    /// Running minimum of the `a_n` sequence, when tracked.
    pub min_a: Option<f64>,
}

fn slack_tol(rhs: f64) -> f64 {
    1e-9 * (1.0 + rhs.abs())
}

/// Checks the observed trace against the scalar recursion
/// `a_n + b_n <= b_{n-1} + c` and reports the running minimum of `a_n`
/// against `c` together with the partial sums of `(c - a_n)^+`.
///
/// Requires a trace whose proof sequences were populated (an instrumented
/// run with a modulus and a reference minimizer pair); otherwise the report
/// states it is not evaluable.
pub fn recursion_diagnostic<P: Clone>(trace: &AamTrace<P>, c: f64) -> DiagnosticReport {
    let have_all = trace.records.len() >= 2
        && trace.records[1..]
            .iter()
            .all(|r| r.a_n.is_some() && r.b_n.is_some())
        && trace.records[0].b_n.is_some();
    if !have_all {
        return DiagnosticReport {
            name: "recursion",
            evaluable: false,
            note: Some(
                "not evaluable: trace lacks proof sequences (run instrumented with a modulus \
                 and a reference minimizer pair)"
                    .into(),
            ),
            rows: Vec::new(),
            violations: 0,
            worst_slack: 0.0,
            partial_sums: Vec::new(),
            summable_hint: None,
            min_a: None,
        };
    }

    let mut rows = Vec::new();
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    let mut sums = Vec::new();
    let mut running_sum = 0.0f64;
    let mut min_a = f64::INFINITY;
    let mut prev_b = trace.records[0].b_n.unwrap();

    for r in &trace.records[1..] {
        let a_n = r.a_n.unwrap();
        let b_n = r.b_n.unwrap();
        let lhs = a_n + b_n;
        let rhs = prev_b + c;
        let ok = lhs <= rhs + slack_tol(rhs);
        if !ok {
            violations += 1;
            worst = worst.max(lhs - rhs);
        }
        rows.push(DiagRow {
            n: r.n,
            lhs,
            rhs,
            ok,
        });
        min_a = min_a.min(a_n);
        running_sum += (c - a_n).max(0.0);
        sums.push(running_sum);
        prev_b = b_n;
    }

    let summable_hint = Some(tail_looks_summable(&sums));
    DiagnosticReport {
        name: "recursion",
        evaluable: true,
        note: None,
        rows,
        violations,
        worst_slack: worst,
        partial_sums: sums,
        summable_hint,
        min_a: Some(min_a),
    }
}

/// Checks the per-iteration drift bound
/// `D(P_n, Q_n) <= D(P_n, Q_{n-1}) + omega(gamma_n)`
/// and reports the partial sums of `omega(2 eps_n)`, the summability proxy
/// behind the full-limit convergence clause.
///
/// Fixed-set traces carry no drift, so the bound reduces to plain per-step
/// monotonicity there.
pub fn drift_inequality_check<P: Clone>(
    trace: &AamTrace<P>,
    omega: impl Fn(f64) -> f64,
) -> DiagnosticReport {
    if trace.records.len() < 2 {
        return DiagnosticReport {
            name: "drift",
            evaluable: false,
            note: Some("not evaluable: trace has fewer than two records".into()),
            rows: Vec::new(),
            violations: 0,
            worst_slack: 0.0,
            partial_sums: Vec::new(),
            summable_hint: None,
            min_a: None,
        };
    }

    let mut rows = Vec::new();
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    let mut sums = Vec::new();
    let mut running_sum = 0.0f64;

    for r in &trace.records[1..] {
        let (Some(cost_n), Some(cost_prev)) = (r.cost, r.cost_p_prev_q) else {
            continue;
        };
        let gamma = r.gamma.unwrap_or(0.0);
        let lhs = cost_n;
        let rhs = cost_prev + omega(gamma);
        let ok = lhs <= rhs + slack_tol(rhs);
        if !ok {
            violations += 1;
            worst = worst.max(lhs - rhs);
        }
        rows.push(DiagRow {
            n: r.n,
            lhs,
            rhs,
            ok,
        });
        running_sum += omega(2.0 * r.eps.unwrap_or(0.0));
        sums.push(running_sum);
    }

    let summable_hint = Some(tail_looks_summable(&sums));
    DiagnosticReport {
        name: "drift",
        evaluable: true,
        note: None,
        rows,
        violations,
        worst_slack: worst,
        partial_sums: sums,
        summable_hint,
        min_a: None,
    }
}

/// Heuristic summability test on a partial-sum sequence: the increment over
/// the last half must shrink to at most half the increment over the
/// preceding quarter (log-divergent series keep near-equal increments per
/// octave).
fn tail_looks_summable(sums: &[f64]) -> bool {
    let n = sums.len();
    if n < 8 {
        return true;
    }
    let last_half = sums[n - 1] - sums[n / 2 - 1];
    let prev_quarter = sums[n / 2 - 1] - sums[n / 4 - 1];
    last_half <= (0.5 * prev_quarter).max(1e-12)
}
