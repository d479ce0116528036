//! Adaptive alternation over sets that converge in Hausdorff distance:
//! harmonic drift only pins down the liminf of the cost, geometric drift
//! drives the whole sequence to the limit optimum.

use aamkit::engine::{
    drift_inequality_check, run_aam, ModulusTable, SetSchedule, SetSequence, StoppingRule,
};
use aamkit::hilbert::{BlockSet, HilbertSet, ProductPoint, SquaredDistanceCost, WeightedProductSpace};

fn ball_schedule(rate: impl Fn(usize) -> f64 + Send + Sync + 'static) -> SetSchedule<HilbertSet> {
    // First-argument sets: balls shrinking onto the unit ball; second
    // argument fixed at the point (3, 0). The limit cost is 4.
    let limit_ball = HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0).unwrap());
    let target = HilbertSet::single(BlockSet::point(vec![3.0, 0.0]).unwrap());
    SetSchedule {
        p_sets: SetSequence::Generated(Box::new(move |n| {
            HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0 + rate(n)).unwrap())
        })),
        q_sets: SetSequence::Constant(target.clone()),
        p_limit: limit_ball,
        q_limit: target,
    }
}

fn main() -> aamkit::Result<()> {
    let cost = SquaredDistanceCost::new(WeightedProductSpace::single(2));
    let q0 = ProductPoint::single(vec![3.0, 0.0]);
    let stop = StoppingRule::new(500, 0.0, 5);

    for (name, schedule) in [
        ("harmonic 1/n", ball_schedule(|n| 1.0 / n.max(1) as f64)),
        ("geometric 0.5^n", ball_schedule(|n| 0.5f64.powi(n as i32))),
    ] {
        let trace = run_aam(&cost, &schedule, q0.clone(), stop)?;
        println!("{name} drift:");
        for n in [1usize, 10, 100, 500] {
            if let Some(r) = trace.records.get(n) {
                println!(
                    "  n={n:<4} eps={:.3e}  cost={:.9}",
                    r.eps.unwrap(),
                    r.cost.unwrap()
                );
            }
        }
        println!(
            "  trailing-window min cost: {:.9} (limit optimum 4)",
            trace.liminf_estimate(0.1).unwrap()
        );

        // Check the per-step drift bound with a sampled modulus and report
        // the summability proxy behind the full-limit clause.
        let domain = HilbertSet::single(BlockSet::axis_box(vec![-2.5, -2.5], vec![3.5, 2.5])?);
        let table = ModulusTable::build(&cost, &domain, 3000, 17);
        let report = drift_inequality_check(&trace, table.as_fn());
        println!(
            "  drift bound: {} violations over {} steps; proxy series {}\n",
            report.violations,
            report.rows.len(),
            match report.summable_hint {
                Some(true) => "looks summable (full-limit clause applies)",
                Some(false) => "looks non-summable (only the liminf is guaranteed)",
                None => "not evaluated",
            }
        );
    }
    Ok(())
}
