use std::sync::Arc;

use crate::divergence::{
    empirical_distribution, estimate_mixture_weights, log_optimal_portfolio, EstimationMode,
    KlCost, MeasureSet, MixtureProblem, WeightVector,
};
use crate::engine::{
    run_aam, run_classical, SetSchedule, SetSequence, Termination,
};
use crate::error::{Error, Result};
use crate::hilbert::{BlockSet, HilbertSet, ProductPoint, SquaredDistanceCost};
use crate::scenario::config::{
    DivergenceMode, HilbertConfig, PSetSpec, ScenarioConfig, ScenarioKind, ScheduleConfig,
    ScheduleLaw,
};
use crate::scenario::samples::generate_mixture_samples;
use crate::scenario::trace_io::{scenario_hash, TraceFile};

/// Human-readable result of a scenario run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub kind: &'static str,
    pub seed: u64,
    pub iterations: usize,
    pub final_cost: Option<f64>,
    /// Minimum cost over the trailing tenth of the iterations.
    pub liminf_estimate: Option<f64>,
    pub termination: Termination,
    /// Final cost minus the configured oracle cost, when one was given.
    pub oracle_gap: Option<f64>,
    /// Recovered weights, for the estimation and portfolio kinds.
    pub weights: Option<Vec<f64>>,
}

/// Outcome of a scenario: the flattened trace plus the summary.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub trace: TraceFile,
    pub summary: RunSummary,
}

fn drift_at(schedule: &ScheduleConfig, n: usize) -> f64 {
    match schedule.law {
        ScheduleLaw::Constant => 0.0,
        ScheduleLaw::Harmonic => 1.0 / n.max(1) as f64,
        ScheduleLaw::Geometric => schedule.rho.unwrap_or(0.5).powi(n as i32),
        ScheduleLaw::Custom => schedule
            .eps
            .as_ref()
            .and_then(|eps| eps.get(n.saturating_sub(1)).copied())
            .unwrap_or(0.0),
    }
}

/// Grow a block by a drift magnitude so its Hausdorff distance to the
/// original is exactly that magnitude: balls inflate their radius, boxes
/// extend their lower first axis, points and affine anchors shift along
/// the first axis, affine patches extend their first extent.
fn drift_block(block: &BlockSet, amount: f64) -> BlockSet {
    if amount == 0.0 {
        return block.clone();
    }
    match block {
        BlockSet::Box { lo, hi } => {
            let mut lo = lo.clone();
            lo[0] -= amount;
            BlockSet::Box {
                lo,
                hi: hi.clone(),
            }
        }
        BlockSet::Ball { center, radius } => BlockSet::Ball {
            center: center.clone(),
            radius: radius + amount,
        },
        BlockSet::Point { at } => {
            let mut at = at.clone();
            at[0] += amount;
            BlockSet::Point { at }
        }
        BlockSet::AffinePatch {
            anchor,
            basis,
            extents,
        } => {
            let mut extents = extents.clone();
            if let Some(e) = extents.first_mut() {
                *e += amount;
            }
            BlockSet::AffinePatch {
                anchor: anchor.clone(),
                basis: basis.clone(),
                extents,
            }
        }
        BlockSet::Halfspace { .. } => block.clone(),
    }
}

/// Execute a validated scenario and flatten its trace.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let errs = config.validation_errors();
    if !errs.is_empty() {
        return Err(Error::InvalidConfig(errs));
    }
    let hash = scenario_hash(&config.canonical_string());
    let stop = config.stop.rule();

    match config.kind {
        ScenarioKind::Classical => {
            if let Some(d) = &config.divergence {
                let problem = build_problem(d)?;
                let samples = collect_samples(config, d, &problem)?;
                let (weights, trace) =
                    estimate_mixture_weights(&samples, &problem, stop, EstimationMode::Batch)?;
                finish_measure(config, hash, trace, Some(weights.weights().to_vec()))
            } else {
                let h = config.hilbert.as_ref().expect("validated");
                let (schedule, q0, cost) = hilbert_schedule(h, None)?;
                let p_set = schedule.p_sets.at(0).expect("constant");
                let q_set = schedule.q_sets.at(0).expect("constant");
                let trace = run_classical(&cost, &p_set, &q_set, q0, stop)?;
                finish_product(config, hash, trace)
            }
        }
        ScenarioKind::AamDivergence => {
            let d = config.divergence.as_ref().expect("validated");
            let problem = build_problem(d)?;
            if let Some(limit_marginal) = &d.limit_marginal {
                let sched_cfg = config.schedule.as_ref().expect("validated").clone();
                let direction = d.drift_direction.clone().expect("validated");
                let limit = limit_marginal.clone();
                let prob = Arc::new(problem.clone());
                let q_set = MeasureSet::mixture_weights(prob.clone());
                let gen_prob = prob.clone();
                let gen_limit = limit.clone();
                let gen = move |n: usize| {
                    let eps = drift_at(&sched_cfg, n);
                    let marginal: Vec<f64> = gen_limit
                        .iter()
                        .zip(&direction)
                        .map(|(&m, &u)| (m + eps * u).max(0.0))
                        .collect();
                    let total: f64 = marginal.iter().sum();
                    let marginal: Vec<f64> = marginal.iter().map(|v| v / total).collect();
                    MeasureSet::coupling(gen_prob.clone(), marginal)
                        .expect("drifting marginal stays a distribution")
                };
                let schedule = SetSchedule {
                    p_sets: SetSequence::Generated(Box::new(gen)),
                    q_sets: SetSequence::Constant(q_set.clone()),
                    p_limit: MeasureSet::coupling(prob.clone(), limit)?,
                    q_limit: q_set,
                };
                let q0 = problem.weight_point(&WeightVector::uniform(
                    problem.component_count(),
                    problem.weight_floor(),
                )?);
                let trace = run_aam(&KlCost, &schedule, q0, stop)?;
                finish_measure(config, hash, trace, None)
            } else {
                let samples = collect_samples(config, d, &problem)?;
                let mode = EstimationMode::Adaptive {
                    batch_size: d.batch_size.unwrap_or(1),
                };
                let mode = if d.mode == Some(DivergenceMode::Batch) {
                    EstimationMode::Batch
                } else {
                    mode
                };
                let (weights, trace) = estimate_mixture_weights(&samples, &problem, stop, mode)?;
                finish_measure(config, hash, trace, Some(weights.weights().to_vec()))
            }
        }
        ScenarioKind::AamHilbert => {
            let h = config.hilbert.as_ref().expect("validated");
            let sched_cfg = config.schedule.as_ref().expect("validated");
            let (schedule, q0, cost) = hilbert_schedule(h, Some(sched_cfg.clone()))?;
            let trace = run_aam(&cost, &schedule, q0, stop)?;
            finish_product(config, hash, trace)
        }
        ScenarioKind::Portfolio => {
            let p = config.portfolio.as_ref().expect("validated");
            let (weights, trace) = log_optimal_portfolio(&p.returns, p.weight_floor, stop)?;
            finish_measure(config, hash, trace, Some(weights.weights().to_vec()))
        }
    }
}

fn build_problem(d: &crate::scenario::config::DivergenceConfig) -> Result<MixtureProblem> {
    let outcomes = crate::divergence::Alphabet::new(d.outcomes.clone())?;
    MixtureProblem::new(outcomes, d.components.clone(), d.weight_floor)
}

fn collect_samples(
    config: &ScenarioConfig,
    d: &crate::scenario::config::DivergenceConfig,
    problem: &MixtureProblem,
) -> Result<Vec<String>> {
    if let Some(samples) = &d.samples {
        return Ok(samples.clone());
    }
    let g = d.generate.as_ref().expect("validated");
    let weights = WeightVector::new(g.true_weights.clone(), problem.weight_floor())?;
    generate_mixture_samples(problem, &weights, g.count, config.seed)
}

type HilbertSetup = (SetSchedule<HilbertSet>, ProductPoint, SquaredDistanceCost);

fn hilbert_schedule(h: &HilbertConfig, drift: Option<ScheduleConfig>) -> Result<HilbertSetup> {
    let space = crate::hilbert::WeightedProductSpace::new(h.block_dim, h.weights.clone())?;
    let cost = SquaredDistanceCost::new(space.clone());
    let limit_blocks: Vec<BlockSet> =
        h.q_blocks.iter().map(|s| s.build()).collect::<Result<_>>()?;
    if matches!(drift.as_ref().map(|s| s.law), Some(ScheduleLaw::Harmonic | ScheduleLaw::Geometric | ScheduleLaw::Custom))
        && limit_blocks
            .iter()
            .any(|b| matches!(b, BlockSet::Halfspace { .. }))
    {
        return Err(Error::InvalidConfig(vec![
            "half-space blocks do not support drifting schedules".into(),
        ]));
    }

    // First-argument set.
    let p_set = match &h.p_set {
        PSetSpec::Diagonal => {
            let k = space.block_dim();
            let mut lo = vec![f64::INFINITY; k];
            let mut hi = vec![f64::NEG_INFINITY; k];
            for b in &limit_blocks {
                let (blo, bhi) = b.bounding_box();
                for a in 0..k {
                    lo[a] = lo[a].min(blo[a]);
                    hi[a] = hi[a].max(bhi[a]);
                }
            }
            for (blo, bhi) in h.q0.iter().map(|b| (b.clone(), b.clone())) {
                for a in 0..k {
                    lo[a] = lo[a].min(blo[a]);
                    hi[a] = hi[a].max(bhi[a]);
                }
            }
            for a in 0..k {
                let span = (hi[a] - lo[a]).max(1e-6);
                lo[a] -= 0.05 * span;
                hi[a] += 0.05 * span;
            }
            HilbertSet::diagonal(space.clone(), lo, hi)?
        }
        PSetSpec::Finite { points } => HilbertSet::finite(
            space.clone(),
            points.iter().map(|p| ProductPoint::new(p.clone())).collect(),
        )?,
    };

    let q_limit = HilbertSet::product(space.clone(), limit_blocks.clone())?;
    let q_sets = match drift {
        None | Some(ScheduleConfig { law: ScheduleLaw::Constant, .. }) => {
            SetSequence::Constant(q_limit.clone())
        }
        Some(sched) => {
            let gen_space = space.clone();
            SetSequence::Generated(Box::new(move |n| {
                let eps = drift_at(&sched, n);
                let blocks = limit_blocks.iter().map(|b| drift_block(b, eps)).collect();
                HilbertSet::product(gen_space.clone(), blocks)
                    .expect("drifted blocks match the space")
            }))
        }
    };

    let schedule = SetSchedule {
        p_sets: SetSequence::Constant(p_set.clone()),
        q_sets,
        p_limit: p_set,
        q_limit,
    };
    Ok((schedule, ProductPoint::new(h.q0.clone()), cost))
}

fn summarize<P: Clone>(
    config: &ScenarioConfig,
    trace: &crate::engine::AamTrace<P>,
    weights: Option<Vec<f64>>,
) -> RunSummary {
    let final_cost = trace.final_cost();
    RunSummary {
        kind: config.kind.as_str(),
        seed: config.seed,
        iterations: trace.iterations(),
        final_cost,
        liminf_estimate: trace.liminf_estimate(0.1),
        termination: trace.termination,
        oracle_gap: match (&config.oracle, final_cost) {
            (Some(o), Some(c)) => Some(c - o.cost),
            _ => None,
        },
        weights,
    }
}

fn finish_measure(
    config: &ScenarioConfig,
    hash: String,
    trace: crate::engine::AamTrace<crate::divergence::BoundedMeasure>,
    weights: Option<Vec<f64>>,
) -> Result<ScenarioOutcome> {
    let summary = summarize(config, &trace, weights);
    let trace = TraceFile::from_trace(&trace, hash, config.seed, config.kind.as_str().into())?;
    Ok(ScenarioOutcome { trace, summary })
}

fn finish_product(
    config: &ScenarioConfig,
    hash: String,
    trace: crate::engine::AamTrace<ProductPoint>,
) -> Result<ScenarioOutcome> {
    let summary = summarize(config, &trace, None);
    let trace = TraceFile::from_trace(&trace, hash, config.seed, config.kind.as_str().into())?;
    Ok(ScenarioOutcome { trace, summary })
}

/// Run the property checker named on the command line against the
/// scenario's sets.
pub mod checks {
    use super::*;
    use crate::engine::{
        check_four_point, check_three_point, drift_inequality_check, recursion_diagnostic,
        Instrumentation, ModulusTable, ProjectableSet,
    };

    /// Uniform report across instantiations and checker kinds.
    #[derive(Debug, Clone)]
    pub struct CheckOutcome {
        pub name: &'static str,
        pub checked: usize,
        pub violations: usize,
        pub worst_slack: f64,
        pub note: Option<String>,
    }

    /// Which property to check.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum CheckKind {
        ThreePoint,
        FourPoint,
        Drift,
        Recursion,
    }

    /// The scenario's limit sets, as the checkers see them.
    enum Sets {
        Measure(MeasureSet, MeasureSet),
        Product(HilbertSet, HilbertSet, SquaredDistanceCost),
    }

    fn scenario_sets(config: &ScenarioConfig) -> Result<Sets> {
        match config.kind {
            ScenarioKind::Classical | ScenarioKind::AamDivergence | ScenarioKind::Portfolio
                if config.divergence.is_some() || config.portfolio.is_some() =>
            {
                if let Some(d) = &config.divergence {
                    let problem = Arc::new(build_problem(d)?);
                    let marginal = if let Some(m) = &d.limit_marginal {
                        m.clone()
                    } else {
                        let samples = collect_samples(config, d, &problem)?;
                        empirical_distribution(&samples, problem.outcomes())?
                    };
                    Ok(Sets::Measure(
                        MeasureSet::coupling(problem.clone(), marginal)?,
                        MeasureSet::mixture_weights(problem),
                    ))
                } else {
                    let p = config.portfolio.as_ref().expect("validated");
                    let outcomes = crate::divergence::Alphabet::new(
                        (0..p.returns.len()).map(|l| format!("s{l}")).collect(),
                    )?;
                    let components: Vec<Vec<f64>> = (0..p.returns[0].len())
                        .map(|i| p.returns.iter().map(|row| row[i]).collect())
                        .collect();
                    let problem = Arc::new(MixtureProblem::with_positive_components(
                        outcomes.clone(),
                        components,
                        p.weight_floor,
                    )?);
                    let marginal = vec![1.0 / p.returns.len() as f64; p.returns.len()];
                    Ok(Sets::Measure(
                        MeasureSet::coupling(problem.clone(), marginal)?,
                        MeasureSet::mixture_weights(problem),
                    ))
                }
            }
            _ => {
                let h = config.hilbert.as_ref().ok_or_else(|| {
                    Error::InvalidConfig(vec!["scenario has no checkable sets".into()])
                })?;
                let (schedule, _, cost) = hilbert_schedule(h, None)?;
                Ok(Sets::Product(
                    schedule.p_sets.at(1).expect("constant"),
                    schedule.q_sets.at(1).expect("constant"),
                    cost,
                ))
            }
        }
    }

    /// Run one checker against a scenario.
    pub fn run_check(
        config: &ScenarioConfig,
        kind: CheckKind,
        samples: usize,
        seed: u64,
    ) -> Result<CheckOutcome> {
        let errs = config.validation_errors();
        if !errs.is_empty() {
            return Err(Error::InvalidConfig(errs));
        }
        match kind {
            CheckKind::ThreePoint | CheckKind::FourPoint => {
                let (name, report) = match (scenario_sets(config)?, kind) {
                    (Sets::Measure(p, q), CheckKind::ThreePoint) => (
                        "three-point",
                        check_three_point(&KlCost, &p, &q, samples, seed)?,
                    ),
                    (Sets::Measure(p, q), _) => (
                        "four-point",
                        check_four_point(&KlCost, &p, &q, samples, seed)?,
                    ),
                    (Sets::Product(p, q, cost), CheckKind::ThreePoint) => (
                        "three-point",
                        check_three_point(&cost, &p, &q, samples, seed)?,
                    ),
                    (Sets::Product(p, q, cost), _) => (
                        "four-point",
                        check_four_point(&cost, &p, &q, samples, seed)?,
                    ),
                };
                Ok(CheckOutcome {
                    name,
                    checked: report.checked,
                    violations: report.violations.len(),
                    worst_slack: report.worst_slack(),
                    note: None,
                })
            }
            CheckKind::Drift => {
                let outcome = run_scenario(config)?;
                let report = match outcome.trace.point_schema.starts_with("measure") {
                    true => {
                        let trace = outcome.trace.to_trace::<crate::divergence::BoundedMeasure>()?;
                        let table = modulus_for(config, samples, seed)?;
                        drift_inequality_check(&trace, table)
                    }
                    false => {
                        let trace = outcome.trace.to_trace::<ProductPoint>()?;
                        let table = modulus_for(config, samples, seed)?;
                        drift_inequality_check(&trace, table)
                    }
                };
                Ok(CheckOutcome {
                    name: "drift",
                    checked: report.rows.len(),
                    violations: report.violations,
                    worst_slack: report.worst_slack,
                    note: Some(format!(
                        "summability proxy {}",
                        match report.summable_hint {
                            Some(true) => "looks summable",
                            Some(false) => "looks non-summable",
                            None => "not evaluated",
                        }
                    )),
                })
            }
            CheckKind::Recursion => {
                let oracle = config.oracle.as_ref().map(|o| o.cost);
                let Some(c) = oracle else {
                    return Ok(CheckOutcome {
                        name: "recursion",
                        checked: 0,
                        violations: 0,
                        worst_slack: 0.0,
                        note: Some(
                            "not evaluable: configure [oracle] cost to check the recursion"
                                .into(),
                        ),
                    });
                };
                let report = instrumented_recursion(config, c, samples, seed)?;
                Ok(CheckOutcome {
                    name: "recursion",
                    checked: report.rows.len(),
                    violations: report.violations,
                    worst_slack: report.worst_slack,
                    note: report.note,
                })
            }
        }
    }

    /// Modulus lower bound over the scenario's limit second-argument set.
    fn modulus_for(
        config: &ScenarioConfig,
        samples: usize,
        seed: u64,
    ) -> Result<impl Fn(f64) -> f64> {
        let table = match scenario_sets(config)? {
            Sets::Measure(p, _q) => ModulusTable::build(&KlCost, &p, samples.max(500), seed),
            Sets::Product(_p, q, cost) => ModulusTable::build(&cost, &q, samples.max(500), seed),
        };
        Ok(move |t: f64| table.eval(t))
    }

    fn instrumented_recursion(
        config: &ScenarioConfig,
        c: f64,
        samples: usize,
        seed: u64,
    ) -> Result<crate::engine::DiagnosticReport> {
        // Instrumented reruns are supported for the product-space drift
        // scenarios, where the reference pair is the configured oracle's
        // minimizer proxy: the nearest pair of the final iterates.
        match scenario_sets(config)? {
            Sets::Product(p_set, q_set, cost) => {
                let h = config.hilbert.as_ref().expect("validated");
                let (schedule, q0, _) =
                    hilbert_schedule(h, config.schedule.clone())?;
                let plain = run_aam(&cost, &schedule, q0.clone(), config.stop.rule())?;
                let last = plain.records.last().expect("nonempty trace");
                let p_star = p_set.nearest(&cost, last.p.as_ref().unwrap_or(&last.q));
                let q_star = q_set.nearest(&cost, &last.q);
                let table = ModulusTable::build(&cost, &q_set, samples.max(500), seed);
                let omega = table.as_fn();
                let instr = Instrumentation {
                    omega: Some(&omega),
                    reference_pair: Some((p_star, q_star)),
                };
                let trace = crate::engine::run_aam_instrumented(
                    &cost,
                    &schedule,
                    q0,
                    config.stop.rule(),
                    &instr,
                )?;
                Ok(recursion_diagnostic(&trace, c))
            }
            Sets::Measure(..) => Ok(crate::engine::DiagnosticReport {
                name: "recursion",
                evaluable: false,
                note: Some(
                    "not evaluable: recursion instrumentation is provided for hilbert scenarios"
                        .into(),
                ),
                rows: Vec::new(),
                violations: 0,
                worst_slack: 0.0,
                partial_sums: Vec::new(),
                summable_hint: None,
                min_a: None,
            }),
        }
    }
}
