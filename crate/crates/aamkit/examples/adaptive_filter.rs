//! Set-theoretic filter design against time-varying convex constraints:
//! the design point is the diagonal iterate of the product-space
//! alternation, tracking drifting per-block sets.

use aamkit::engine::{SetSequence, StoppingRule};
use aamkit::hilbert::{
    designed_filter_point, run_adaptive_filter, set_theoretic_objective, BlockSet, ProductPoint,
    WeightedProductSpace,
};

fn main() -> aamkit::Result<()> {
    // Two scalar constraints drifting toward intervals that touch at the
    // origin: the design point converges there and the residual vanishes.
    let space = WeightedProductSpace::new(1, vec![0.5, 0.5])?;
    let schedule = SetSequence::Generated(Box::new(|n| {
        let inv = 1.0 / n.max(1) as f64;
        vec![
            BlockSet::interval(inv, 1.0 + inv).unwrap(),
            BlockSet::interval(-1.0 - inv, -inv).unwrap(),
        ]
    }));
    let limits = vec![
        BlockSet::interval(0.0, 1.0)?,
        BlockSet::interval(-1.0, 0.0)?,
    ];
    let q0 = ProductPoint::new(vec![vec![1.0], vec![-1.0]]);
    let trace = run_adaptive_filter(
        schedule,
        limits.clone(),
        &space,
        q0,
        StoppingRule::new(2000, 0.0, 5),
    )?;
    let filter = designed_filter_point(&trace).unwrap();
    println!(
        "touching constraints: designed point {:.5}, final cost {:.2e} after {} iterations",
        filter[0],
        trace.final_cost().unwrap(),
        trace.iterations()
    );

    // With separated constant constraints the design point balances the
    // weighted squared distances; the literal (unsquared) objective is
    // reported alongside the squared one the alternation minimizes.
    let blocks = vec![
        BlockSet::interval(1.0, 2.0)?,
        BlockSet::interval(-2.0, -1.0)?,
    ];
    let q0 = ProductPoint::new(vec![vec![1.0], vec![-1.0]]);
    let trace = run_adaptive_filter(
        SetSequence::Constant(blocks.clone()),
        blocks.clone(),
        &space,
        q0,
        StoppingRule::default(),
    )?;
    let filter = designed_filter_point(&trace).unwrap();
    let objective = set_theoretic_objective(&filter, &blocks, &[0.5, 0.5])?;
    println!(
        "separated constraints: designed point {:.5}, squared objective {:.4}, literal {:.4}",
        filter[0], objective.squared, objective.literal
    );
    Ok(())
}
