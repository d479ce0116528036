//! Engine-level behavior on both instantiations: classical and adaptive
//! runs, property checkers, Hausdorff and modulus utilities, and the trace
//! diagnostics.

use aamkit::divergence::{Alphabet, KlCost, MeasureSet, MixtureProblem};
use aamkit::engine::{
    check_four_point, check_three_point, drift_inequality_check, estimate_modulus,
    hausdorff_distance, recursion_diagnostic, run_aam, run_aam_instrumented, run_classical,
    AamTrace, CostFunction, Instrumentation, ModulusTable, ProjectableSet, SetSchedule,
    SetSequence, StoppingRule, Termination, TraceRecord,
};
use aamkit::hilbert::{BlockSet, HilbertSet, ProductPoint, SquaredDistanceCost, WeightedProductSpace};
use std::sync::Arc;

fn sq_cost() -> SquaredDistanceCost {
    SquaredDistanceCost::new(WeightedProductSpace::single(2))
}

fn singleton(x: f64, y: f64) -> HilbertSet {
    HilbertSet::single(BlockSet::point(vec![x, y]).unwrap())
}

fn pp(x: f64, y: f64) -> ProductPoint {
    ProductPoint::single(vec![x, y])
}

#[test]
fn classical_singletons_converge_immediately() {
    let cost = sq_cost();
    let trace = run_classical(
        &cost,
        &singleton(0.0, 0.0),
        &singleton(3.0, 4.0),
        pp(3.0, 4.0),
        StoppingRule::new(50, 1e-12, 3),
    )
    .unwrap();
    assert_eq!(trace.final_cost().unwrap(), 25.0);
    assert_eq!(trace.termination, Termination::Converged);
}

#[test]
fn classical_identical_convex_sets_reach_zero() {
    use rand::SeedableRng;
    let outcomes = Alphabet::from_strs(&["a", "b"]).unwrap();
    let set = MeasureSet::floored_simplex(outcomes, 0.0).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let q0 = set.sample(&mut rng);
    let trace = run_classical(&KlCost, &set, &set, q0, StoppingRule::new(50, 1e-12, 3)).unwrap();
    assert!(trace.final_cost().unwrap() < 1e-12);
    let last = trace.records.last().unwrap();
    assert_eq!(last.p.as_ref().unwrap(), &last.q);
}

#[test]
fn classical_segments_find_the_gap() {
    // Segments [0,1] x {0} and {0} x [1,2]; nearest pair is (0,0)-(0,1).
    let cost = sq_cost();
    let p_set = HilbertSet::single(BlockSet::axis_box(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap());
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![0.0, 1.0], vec![0.0, 2.0]).unwrap());
    let trace = run_classical(&cost, &p_set, &q_set, pp(0.0, 2.0), StoppingRule::default()).unwrap();

    // Brute-force oracle over fine grids of both segments.
    let mut oracle = f64::INFINITY;
    let mut arg = (0.0, 0.0);
    let mut s = 0.0;
    while s <= 1.0 {
        let mut t = 1.0;
        while t <= 2.0 {
            let d = s * s + t * t;
            if d < oracle {
                oracle = d;
                arg = (s, t);
            }
            t += 1e-3;
        }
        s += 1e-3;
    }
    assert!((oracle - 1.0).abs() < 1e-9);
    assert_eq!(arg, (0.0, 1.0));

    assert!((trace.final_cost().unwrap() - oracle).abs() < 1e-9);
    let last = trace.records.last().unwrap();
    let p = last.p.as_ref().unwrap();
    assert!((p.blocks[0][0]).abs() < 1e-9 && (p.blocks[0][1]).abs() < 1e-9);
    assert!((last.q.blocks[0][0]).abs() < 1e-9 && (last.q.blocks[0][1] - 1.0).abs() < 1e-9);
}

#[test]
fn classical_cost_chain_is_monotone() {
    // D(P_n, Q_n) <= D(P_n, Q_{n-1}) <= D(P_{n-1}, Q_{n-1}) exactly.
    let cost = sq_cost();
    let p_set = HilbertSet::single(BlockSet::ball(vec![-1.0, 0.5], 0.75).unwrap());
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![1.0, -2.0], vec![2.0, 2.0]).unwrap());
    let trace = run_classical(&cost, &p_set, &q_set, pp(1.5, 1.5), StoppingRule::default()).unwrap();
    let recs = &trace.records;
    for i in 2..recs.len() {
        let cost_n = recs[i].cost.unwrap();
        let bridge = recs[i].cost_p_prev_q.unwrap();
        let cost_prev = recs[i - 1].cost.unwrap();
        assert!(cost_n <= bridge + 1e-12);
        assert!(bridge <= cost_prev + 1e-12);
    }
}

#[test]
fn constant_schedule_specializes_to_classical_bit_for_bit() {
    let cost = sq_cost();
    let p_set = HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap());
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![2.0, -1.0], vec![3.0, 1.0]).unwrap());
    let q0 = pp(2.5, 0.25);
    let stop = StoppingRule::new(40, 1e-13, 4);

    let classical = run_classical(&cost, &p_set, &q_set, q0.clone(), stop).unwrap();
    let schedule = SetSchedule::constant(p_set, q_set);
    let adaptive = run_aam(&cost, &schedule, q0, stop).unwrap();

    assert_eq!(classical.records.len(), adaptive.records.len());
    for (a, b) in classical.records.iter().zip(&adaptive.records) {
        assert_eq!(a.p, b.p, "first-argument points must match bit for bit");
        assert_eq!(a.q, b.q, "second-argument points must match bit for bit");
        assert_eq!(a.cost, b.cost);
    }
    // The constant schedule reports zero drift.
    assert!(adaptive.records[1..].iter().all(|r| r.eps == Some(0.0)));
}

#[test]
fn shrinking_singletons_drive_cost_to_zero() {
    let cost = sq_cost();
    let schedule = SetSchedule {
        p_sets: SetSequence::Generated(Box::new(|n| {
            HilbertSet::single(BlockSet::point(vec![1.0 / n.max(1) as f64, 0.0]).unwrap())
        })),
        q_sets: SetSequence::Constant(singleton(0.0, 0.0)),
        p_limit: singleton(0.0, 0.0),
        q_limit: singleton(0.0, 0.0),
    };
    let trace = run_aam(&cost, &schedule, pp(0.0, 0.0), StoppingRule::new(2000, 0.0, 5)).unwrap();
    assert!(trace.final_cost().unwrap() < 1e-6);
    // eps_n = 1/n exactly for this schedule.
    assert!((trace.records[10].eps.unwrap() - 0.1).abs() < 1e-12);
    assert!(
        (trace.records[10].gamma.unwrap() - (1.0 / 9.0 + 0.1)).abs() < 1e-12,
        "gamma is the sum of consecutive drifts"
    );
}

#[test]
fn inflating_ball_against_fixed_point_converges_to_oracle() {
    let cost = sq_cost();
    let schedule = SetSchedule {
        p_sets: SetSequence::Generated(Box::new(|n| {
            HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0 + 1.0 / n.max(1) as f64).unwrap())
        })),
        q_sets: SetSequence::Constant(singleton(3.0, 0.0)),
        p_limit: HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap()),
        q_limit: singleton(3.0, 0.0),
    };
    let trace = run_aam(&cost, &schedule, pp(3.0, 0.0), StoppingRule::new(1500, 0.0, 5)).unwrap();

    // Brute-force projection of (3, 0) onto the limit unit ball.
    let mut oracle = f64::INFINITY;
    let mut x = -1.0;
    while x <= 1.0 {
        let mut y = -1.0;
        while y <= 1.0 {
            if x * x + y * y <= 1.0 {
                let d = (x - 3.0) * (x - 3.0) + y * y;
                oracle = oracle.min(d);
            }
            y += 2e-3;
        }
        x += 2e-3;
    }
    assert!((oracle - 4.0).abs() < 1e-2);
    let liminf = trace.liminf_estimate(0.1).unwrap();
    assert!((liminf - 4.0).abs() < 1e-2, "liminf {liminf} vs oracle 4");

    // Every iterate lies in its revealed set.
    for r in &trace.records[1..] {
        let p_set = schedule.p_sets.at(r.n).unwrap();
        let q_set = schedule.q_sets.at(r.n).unwrap();
        assert!(p_set.contains(&cost, r.p.as_ref().unwrap(), 1e-9));
        assert!(q_set.contains(&cost, &r.q, 1e-9));
    }

    // Trailing-window cluster representatives stand in for subsequential
    // limit points: they must land in the limit sets (at the trailing
    // drift scale) and near the oracle minimizer pair ((1,0), (3,0)).
    let candidates = trace.limit_point_candidates(0.1, 1e-3, |a, b| cost.pair_metric(a, b));
    assert!(!candidates.is_empty());
    for (p, q) in &candidates {
        assert!(schedule.p_limit.contains(&cost, p, 2e-3));
        assert!(schedule.q_limit.contains(&cost, q, 1e-9));
        let to_minimizer = cost.pair_metric((p, q), (&pp(1.0, 0.0), &pp(3.0, 0.0)));
        assert!(to_minimizer < 1e-2, "candidate off the minimizer: {to_minimizer}");
    }
}

#[test]
fn q0_outside_initial_set_is_a_domain_error() {
    let cost = sq_cost();
    let err = run_classical(
        &cost,
        &singleton(0.0, 0.0),
        &singleton(3.0, 4.0),
        pp(0.0, 0.0),
        StoppingRule::default(),
    );
    assert!(err.is_err());
}

#[test]
fn exhausted_list_schedule_sets_truncation_flag() {
    let cost = sq_cost();
    let sets: Vec<HilbertSet> = (1..=5)
        .map(|n| HilbertSet::single(BlockSet::point(vec![1.0 / n as f64, 0.0]).unwrap()))
        .collect();
    let schedule = SetSchedule {
        p_sets: SetSequence::List(sets),
        q_sets: SetSequence::Constant(singleton(0.0, 0.0)),
        p_limit: singleton(0.0, 0.0),
        q_limit: singleton(0.0, 0.0),
    };
    let trace = run_aam(&cost, &schedule, pp(0.0, 0.0), StoppingRule::new(100, 0.0, 5)).unwrap();
    assert_eq!(trace.termination, Termination::ScheduleTruncated);
    assert_eq!(trace.iterations(), 4);
}

#[test]
fn three_point_clean_on_convex_divergence_sets() {
    let outcomes = Alphabet::from_strs(&["a", "b"]).unwrap();
    let prob = Arc::new(
        MixtureProblem::new(outcomes, vec![vec![0.9, 0.1], vec![0.1, 0.9]], 0.1).unwrap(),
    );
    let p_set = MeasureSet::coupling(prob.clone(), vec![0.45, 0.55]).unwrap();
    let q_set = MeasureSet::mixture_weights(prob);
    let report = check_three_point(&KlCost, &p_set, &q_set, 1000, 17).unwrap();
    assert!(report.is_clean(), "violations: {:?}", report.violations);
    let report = check_four_point(&KlCost, &p_set, &q_set, 1000, 18).unwrap();
    assert!(report.is_clean(), "violations: {:?}", report.violations);
}

#[test]
fn three_point_clean_on_convex_hilbert_sets() {
    let cost = sq_cost();
    let p_set = HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap());
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![0.5, -1.0], vec![2.0, 1.0]).unwrap());
    let report = check_three_point(&cost, &p_set, &q_set, 1000, 19).unwrap();
    assert!(report.is_clean(), "violations: {:?}", report.violations);
    let report = check_four_point(&cost, &p_set, &q_set, 1000, 20).unwrap();
    assert!(report.is_clean(), "violations: {:?}", report.violations);
}

#[test]
fn three_point_flags_nonconvex_fixture() {
    // Two-point set {(0,0), (2,0)} against the singleton {(1,1)}: the
    // projection ties at squared distance 2 and resolves to (0,0), so the
    // sampled point (2,0) violates by delta((2,0),(0,0)) = 4 exactly.
    let cost = sq_cost();
    let space = WeightedProductSpace::single(2);
    let p_set = HilbertSet::finite(space.clone(), vec![pp(0.0, 0.0), pp(2.0, 0.0)]).unwrap();
    let q_set = HilbertSet::finite(space, vec![pp(1.0, 1.0)]).unwrap();
    let report = check_three_point(&cost, &p_set, &q_set, 64, 21).unwrap();
    assert!(!report.is_clean());
    assert!((report.worst_slack() - 4.0).abs() < 1e-12);
}

#[test]
fn hausdorff_basic_identities() {
    let a = HilbertSet::single(BlockSet::axis_box(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap());
    assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);

    let p = singleton(0.0, 0.0);
    let q = singleton(3.0, 4.0);
    assert!((hausdorff_distance(&p, &q).unwrap() - 5.0).abs() < 1e-12);

    let space = WeightedProductSpace::single(2);
    let empty = HilbertSet::finite(space, vec![]).unwrap();
    assert!(hausdorff_distance(&empty, &p).is_err());
}

#[test]
fn hausdorff_symmetry_and_triangle_on_random_boxes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let mut make = || {
            let lo: Vec<f64> = (0..2).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let hi: Vec<f64> = lo.iter().map(|&l| l + rng.random::<f64>() * 2.0).collect();
            HilbertSet::single(BlockSet::axis_box(lo, hi).unwrap())
        };
        let (a, b, c) = (make(), make(), make());
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        assert_eq!(ab, ba, "symmetry is exact");
        let ac = hausdorff_distance(&a, &c).unwrap();
        let cb = hausdorff_distance(&c, &b).unwrap();
        assert!(ab <= ac + cb + 1e-12, "triangle inequality");
    }
}

/// Cost that reads off the first coordinate of the first argument:
/// a stand-in scalar function whose modulus is known in closed form.
struct FirstCoordinate;

impl CostFunction for FirstCoordinate {
    type Point = ProductPoint;
    fn evaluate(&self, a: &ProductPoint, _b: &ProductPoint) -> f64 {
        a.blocks[0][0]
    }
    fn delta(&self, _a: &ProductPoint, _b: &ProductPoint) -> f64 {
        0.0
    }
    fn metric(&self, a: &ProductPoint, b: &ProductPoint) -> f64 {
        SquaredDistanceCost::new(WeightedProductSpace::single(a.blocks[0].len())).metric(a, b)
    }
}

/// Sampling domain for `FirstCoordinate`: a convex Hilbert set re-exposed
/// under the scalar cost (projection is never taken).
struct ScalarDomain(HilbertSet);

impl ProjectableSet<FirstCoordinate> for ScalarDomain {
    fn project(
        &self,
        _cost: &FirstCoordinate,
        _side: aamkit::engine::Side,
        _fixed: &ProductPoint,
    ) -> aamkit::Result<ProductPoint> {
        unimplemented!("scalar domain is sample-only")
    }
    fn contains(&self, _cost: &FirstCoordinate, point: &ProductPoint, tol: f64) -> bool {
        let sq = SquaredDistanceCost::new(self.0.space().clone());
        self.0.contains(&sq, point, tol)
    }
    fn nearest(&self, _cost: &FirstCoordinate, point: &ProductPoint) -> ProductPoint {
        let sq = SquaredDistanceCost::new(self.0.space().clone());
        self.0.nearest(&sq, point)
    }
    fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> ProductPoint {
        self.0.sample(rng)
    }
    fn toward(&self, from: &ProductPoint, to: &ProductPoint, dist: f64) -> ProductPoint {
        self.0.toward(from, to, dist)
    }
    fn hausdorff_to(&self, other: &Self) -> f64 {
        self.0.hausdorff_to(&other.0)
    }
    fn grid_points(&self, resolution: f64) -> Vec<ProductPoint> {
        self.0.grid_points(resolution)
    }
    fn diameter_hint(&self) -> f64 {
        self.0.diameter_hint()
    }
}

#[test]
fn modulus_of_linear_function_is_linear() {
    let domain = ScalarDomain(HilbertSet::single(BlockSet::interval(0.0, 1.0).unwrap()));
    assert_eq!(estimate_modulus(&FirstCoordinate, &domain, 0.0, 500, 3), 0.0);
    let est = estimate_modulus(&FirstCoordinate, &domain, 0.3, 4000, 3);
    assert!((est - 0.3).abs() < 0.02, "estimate {est} for true 0.3");
    // And it saturates at the diameter.
    let est = estimate_modulus(&FirstCoordinate, &domain, 5.0, 4000, 3);
    assert!((est - 1.0).abs() < 0.02, "estimate {est} for true 1.0");
}

#[test]
fn modulus_is_monotone_and_a_lower_bound() {
    // One-symbol measure space keeps the exhaustive pair-of-pairs oracle
    // tractable: D(p, q) = p ln(p / q) over masses in [0.1, 1].
    let outcomes = Alphabet::from_strs(&["a"]).unwrap();
    let domain = MeasureSet::mass_box(outcomes, vec![0.1], vec![1.0]).unwrap();
    let table = ModulusTable::build(&KlCost, &domain, 4000, 7);
    let ts = [0.0, 0.01, 0.05, 0.1, 0.3, 0.8];
    let mut prev = -1.0;
    for &t in &ts {
        let v = table.eval(t);
        assert!(v >= prev, "monotone in t");
        prev = v;
    }

    // Cross-validate t = 0.05 against a pairwise exhaustive grid.
    let t = 0.05;
    let grid: Vec<f64> = (0..=90).map(|k| 0.1 + 0.01 * k as f64).collect();
    let f = |p: f64, q: f64| p * (p / q).ln();
    let mut oracle = 0.0f64;
    for &a in &grid {
        for &a2 in &grid {
            let da = (a - a2).abs();
            if da > t {
                continue;
            }
            for &b in &grid {
                for &b2 in &grid {
                    if da + (b - b2).abs() <= t {
                        oracle = oracle.max((f(a, b) - f(a2, b2)).abs());
                    }
                }
            }
        }
    }
    let est = table.eval(t);
    assert!(est > 0.0);
    assert!(
        est <= oracle + 0.02 && est >= 0.5 * oracle,
        "estimate {est} vs grid oracle {oracle}"
    );
}

fn synthetic_trace(a: Vec<f64>, b: Vec<f64>) -> AamTrace<ProductPoint> {
    let mut records = vec![TraceRecord {
        n: 0,
        p: None,
        q: pp(0.0, 0.0),
        cost: None,
        cost_p_prev_q: None,
        eps: None,
        gamma: None,
        drift_ok: None,
        a_n: None,
        b_n: Some(b[0]),
    }];
    for (i, (&an, &bn)) in a.iter().zip(&b[1..]).enumerate() {
        records.push(TraceRecord {
            n: i + 1,
            p: Some(pp(0.0, 0.0)),
            q: pp(0.0, 0.0),
            cost: Some(an),
            cost_p_prev_q: Some(an),
            eps: Some(0.0),
            gamma: Some(0.0),
            drift_ok: Some(true),
            a_n: Some(an),
            b_n: Some(bn),
        });
    }
    AamTrace {
        records,
        termination: Termination::Exhausted,
    }
}

#[test]
fn recursion_diagnostic_on_constant_sequences() {
    let n = 40;
    let trace = synthetic_trace(vec![0.0; n], vec![0.0; n + 1]);
    let report = recursion_diagnostic(&trace, 0.0);
    assert!(report.evaluable);
    assert_eq!(report.violations, 0);
    assert_eq!(report.min_a, Some(0.0));
    assert!(report.partial_sums.iter().all(|&s| s == 0.0));
}

#[test]
fn recursion_diagnostic_when_a_stays_above_c() {
    let c = 2.0;
    let a: Vec<f64> = (1..=60).map(|n| c + 1.0 / (n * n) as f64).collect();
    let b = vec![0.0; 61];
    let trace = synthetic_trace(a, b);
    let report = recursion_diagnostic(&trace, c);
    assert!(report.evaluable);
    // The shortfall series stays empty and the running minimum sits at c.
    assert!(report.partial_sums.iter().all(|&s| s == 0.0));
    let min_a = report.min_a.unwrap();
    assert!(min_a >= c && min_a < c + 1e-3);
}

#[test]
fn recursion_diagnostic_requires_instrumentation() {
    let cost = sq_cost();
    let trace = run_classical(
        &cost,
        &singleton(0.0, 0.0),
        &singleton(3.0, 4.0),
        pp(3.0, 4.0),
        StoppingRule::default(),
    )
    .unwrap();
    let report = recursion_diagnostic(&trace, 0.0);
    assert!(!report.evaluable);
    assert!(report.note.unwrap().contains("not evaluable"));
}

#[test]
fn recursion_diagnostic_on_instrumented_ball_drift() {
    let cost = sq_cost();
    let domain = HilbertSet::single(
        BlockSet::axis_box(vec![-2.5, -2.5], vec![3.5, 2.5]).unwrap(),
    );
    let table = ModulusTable::build(&cost, &domain, 3000, 11);
    let omega = table.as_fn();
    let make_schedule = || SetSchedule {
        p_sets: SetSequence::Generated(Box::new(|n| {
            HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0 + 1.0 / n.max(1) as f64).unwrap())
        })),
        q_sets: SetSequence::Constant(singleton(3.0, 0.0)),
        p_limit: HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap()),
        q_limit: singleton(3.0, 0.0),
    };
    let instr = Instrumentation {
        omega: Some(&omega),
        reference_pair: Some((pp(1.0, 0.0), pp(3.0, 0.0))),
    };
    let trace = run_aam_instrumented(
        &cost,
        &make_schedule(),
        pp(3.0, 0.0),
        StoppingRule::new(400, 0.0, 5),
        &instr,
    )
    .unwrap();
    let report = recursion_diagnostic(&trace, 4.0);
    assert!(report.evaluable);
    assert_eq!(report.violations, 0, "worst slack {}", report.worst_slack);

    // The drift bound holds at every step for the same run.
    let drift = drift_inequality_check(&trace, &omega);
    assert!(drift.evaluable);
    assert_eq!(drift.violations, 0, "worst slack {}", drift.worst_slack);
}

#[test]
fn drift_check_reduces_to_monotonicity_on_constant_schedules() {
    let cost = sq_cost();
    let p_set = HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap());
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![2.0, -1.0], vec![3.0, 1.0]).unwrap());
    let trace = run_classical(&cost, &p_set, &q_set, pp(2.5, 0.0), StoppingRule::default()).unwrap();
    let report = drift_inequality_check(&trace, |_| 0.0);
    assert!(report.evaluable);
    assert_eq!(report.violations, 0);
    assert_eq!(report.summable_hint, Some(true));
}

#[test]
fn harmonic_drift_is_flagged_non_summable_geometric_is_not() {
    let lipschitz = 2.0;
    let omega = move |t: f64| lipschitz * t;

    let make = |eps: Box<dyn Fn(usize) -> f64>| {
        let mut records = vec![TraceRecord {
            n: 0,
            p: None,
            q: pp(0.0, 0.0),
            cost: None,
            cost_p_prev_q: None,
            eps: Some(eps(0)),
            gamma: None,
            drift_ok: None,
            a_n: None,
            b_n: None,
        }];
        for n in 1..=512usize {
            records.push(TraceRecord {
                n,
                p: Some(pp(0.0, 0.0)),
                q: pp(0.0, 0.0),
                cost: Some(0.0),
                cost_p_prev_q: Some(0.0),
                eps: Some(eps(n)),
                gamma: Some(eps(n - 1) + eps(n)),
                drift_ok: Some(true),
                a_n: None,
                b_n: None,
            });
        }
        AamTrace {
            records,
            termination: Termination::Exhausted,
        }
    };

    let harmonic = make(Box::new(|n| 1.0 / n.max(1) as f64));
    let report = drift_inequality_check(&harmonic, omega);
    assert_eq!(report.summable_hint, Some(false));
    // Partial sums grow like the harmonic series: log divergence.
    let sums = &report.partial_sums;
    let growth_late = sums[511] - sums[255];
    let growth_mid = sums[255] - sums[127];
    assert!((growth_late / growth_mid - 1.0).abs() < 0.1);

    let geometric = make(Box::new(|n| 0.5f64.powi(n as i32)));
    let report = drift_inequality_check(&geometric, omega);
    assert_eq!(report.summable_hint, Some(true));
    let sums = &report.partial_sums;
    assert!(sums[511] - sums[255] < 1e-12);
}

#[test]
fn coupling_hausdorff_formula_holds_across_shapes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for trial in 0..8 {
        let count = 2 + trial % 2;
        let m = 2 + (trial / 2) % 2;
        let outcomes =
            Alphabet::new((0..m).map(|i| format!("y{i}")).collect()).unwrap();
        let components: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                let raw: Vec<f64> = (0..m).map(|_| 0.2 + rng.random::<f64>()).collect();
                let t: f64 = raw.iter().sum();
                raw.iter().map(|v| v / t).collect()
            })
            .collect();
        let prob = Arc::new(MixtureProblem::new(outcomes, components, 0.1).unwrap());
        let draw_marginal = |rng: &mut rand_chacha::ChaCha8Rng| {
            let raw: Vec<f64> = (0..m).map(|_| 0.2 + rng.random::<f64>()).collect();
            let t: f64 = raw.iter().sum();
            raw.iter().map(|v| v / t).collect::<Vec<f64>>()
        };
        let ma = draw_marginal(&mut rng);
        let mb = draw_marginal(&mut rng);
        let a = MeasureSet::coupling(prob.clone(), ma.clone()).unwrap();
        let b = MeasureSet::coupling(prob.clone(), mb.clone()).unwrap();
        let analytic = a.hausdorff_to(&b);
        let expected = ma
            .iter()
            .zip(&mb)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!((analytic - expected).abs() < 1e-15);
        // Grid cross-validation where the product of per-column simplex
        // grids stays small enough for the pairwise sweep.
        if count * m <= 6 {
            let res = 0.04;
            let grid = aamkit::engine::grid_hausdorff(
                &ProjectableSet::<KlCost>::grid_points(&a, res),
                &ProjectableSet::<KlCost>::grid_points(&b, res),
                |x: &aamkit::divergence::BoundedMeasure, y| x.sup_distance(y).unwrap(),
            );
            assert!(
                (analytic - grid).abs() <= 3.0 * res,
                "analytic {analytic} vs grid {grid} at I={count}, m={m}"
            );
        }
    }
}

#[test]
fn floored_simplex_hausdorff_formula_holds_for_random_floors() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
    for trial in 0..10 {
        let m = 2 + trial % 3;
        let alphabet = Alphabet::new((0..m).map(|i| format!("s{i}")).collect()).unwrap();
        let fa = rng.random::<f64>() * 0.8 / m as f64;
        let fb = rng.random::<f64>() * 0.8 / m as f64;
        let a = MeasureSet::floored_simplex(alphabet.clone(), fa).unwrap();
        let b = MeasureSet::floored_simplex(alphabet, fb).unwrap();
        let analytic = a.hausdorff_to(&b);
        assert!((analytic - (m as f64 - 1.0) * (fa - fb).abs()).abs() < 1e-15);
        // Coarser grids in higher dimension keep the pairwise sweep sane.
        let res = 0.01 * (m as f64 - 1.0);
        let grid = aamkit::engine::grid_hausdorff(
            &ProjectableSet::<KlCost>::grid_points(&a, res),
            &ProjectableSet::<KlCost>::grid_points(&b, res),
            |x: &aamkit::divergence::BoundedMeasure, y| x.sup_distance(y).unwrap(),
        );
        assert!(
            (analytic - grid).abs() <= 3.0 * res,
            "analytic {analytic} vs grid {grid} at m={m}, floors {fa}/{fb}"
        );
    }
}

#[test]
fn modulus_estimates_are_monotone_for_random_tables() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let cost = sq_cost();
    for trial in 0..10 {
        let lo: Vec<f64> = (0..2).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let hi: Vec<f64> = lo.iter().map(|l| l + 0.3 + rng.random::<f64>()).collect();
        let domain = HilbertSet::single(BlockSet::axis_box(lo, hi).unwrap());
        let table = ModulusTable::build(&cost, &domain, 600, 100 + trial);
        let mut ts: Vec<f64> = (0..60)
            .map(|_| rng.random::<f64>().powi(3) * 5.0)
            .collect();
        ts.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        for &t in &ts {
            let v = table.eval(t);
            assert!(
                v + 1e-15 >= prev,
                "eval({t}) = {v} dips below the previous value {prev}"
            );
            prev = v;
        }
    }
}
