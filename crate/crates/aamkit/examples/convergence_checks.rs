//! Empirical verification of the convergence conditions: the three- and
//! four-point inequalities on convex sets, a deliberate non-convex
//! counterexample, and a sampled modulus of continuity.

use std::sync::Arc;

use aamkit::divergence::{Alphabet, KlCost, MeasureSet, MixtureProblem};
use aamkit::engine::{
    check_four_point, check_three_point, estimate_modulus, ModulusTable,
};
use aamkit::hilbert::{BlockSet, HilbertSet, ProductPoint, SquaredDistanceCost, WeightedProductSpace};

fn main() -> aamkit::Result<()> {
    // Divergence instantiation on the mixture sets: both properties hold
    // with zero violations on convex sets.
    let outcomes = Alphabet::from_strs(&["a", "b", "c"])?;
    let problem = Arc::new(MixtureProblem::new(
        outcomes,
        vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.3, 0.5]],
        0.1,
    )?);
    let coupling = MeasureSet::coupling(problem.clone(), vec![0.4, 0.35, 0.25])?;
    let weights = MeasureSet::mixture_weights(problem);
    let three = check_three_point(&KlCost, &coupling, &weights, 1000, 1)?;
    let four = check_four_point(&KlCost, &coupling, &weights, 1000, 2)?;
    println!(
        "divergence, convex sets: three-point {}/1000 violations, four-point {}/1000",
        three.violations.len(),
        four.violations.len()
    );

    // Squared-distance instantiation on convex blocks: same story.
    let cost = SquaredDistanceCost::new(WeightedProductSpace::single(2));
    let ball = HilbertSet::single(BlockSet::ball(vec![0.0, 0.0], 1.0)?);
    let band = HilbertSet::single(BlockSet::axis_box(vec![0.5, -1.0], vec![2.0, 1.0])?);
    let three = check_three_point(&cost, &ball, &band, 1000, 3)?;
    println!(
        "squared distance, convex sets: three-point {}/1000 violations",
        three.violations.len()
    );

    // A two-point set is not convex; the projection tie-break exposes the
    // three-point failure with slack exactly 4.
    let space = WeightedProductSpace::single(2);
    let fixture = HilbertSet::finite(
        space.clone(),
        vec![
            ProductPoint::single(vec![0.0, 0.0]),
            ProductPoint::single(vec![2.0, 0.0]),
        ],
    )?;
    let target = HilbertSet::finite(space, vec![ProductPoint::single(vec![1.0, 1.0])])?;
    let report = check_three_point(&cost, &fixture, &target, 64, 4)?;
    println!(
        "non-convex fixture: {} violations out of {}, worst slack {}",
        report.violations.len(),
        report.checked,
        report.worst_slack()
    );

    // Sampled modulus of continuity: a certified lower bound, monotone in
    // the distance, used by the drift diagnostics.
    let domain = HilbertSet::single(BlockSet::axis_box(vec![-1.0, -1.0], vec![1.0, 1.0])?);
    let table = ModulusTable::build(&cost, &domain, 4000, 5);
    println!("modulus lower bound over [-1,1]^2 pairs:");
    for t in [0.01, 0.1, 0.5, 2.0] {
        println!("  omega({t}) >= {:.4}", table.eval(t));
    }
    let one_shot = estimate_modulus(&cost, &domain, 0.25, 4000, 5);
    println!("  one-shot estimate at 0.25: {one_shot:.4}");
    Ok(())
}
