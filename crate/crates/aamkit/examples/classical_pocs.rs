//! Classical fixed-set alternation in the plane: find the closest pair
//! between two convex sets by alternating exact projections.

use aamkit::engine::{run_classical, StoppingRule};
use aamkit::hilbert::{BlockSet, HilbertSet, ProductPoint, SquaredDistanceCost, WeightedProductSpace};

fn main() -> aamkit::Result<()> {
    // A horizontal segment and a vertical one that do not meet: the
    // alternation settles on the nearest pair, at squared distance 1.
    let cost = SquaredDistanceCost::new(WeightedProductSpace::single(2));
    let p_set = HilbertSet::single(BlockSet::axis_box(vec![0.0, 0.0], vec![1.0, 0.0])?);
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![0.0, 1.0], vec![0.0, 2.0])?);
    let q0 = ProductPoint::single(vec![0.0, 2.0]);

    let trace = run_classical(&cost, &p_set, &q_set, q0, StoppingRule::default())?;
    println!("segments example: {} iterations, {:?}", trace.iterations(), trace.termination);
    for r in trace.records.iter().take(6) {
        if let (Some(p), Some(c)) = (&r.p, r.cost) {
            println!(
                "  n={:<2} P=({:.4}, {:.4})  Q=({:.4}, {:.4})  cost={c:.6}",
                r.n, p.blocks[0][0], p.blocks[0][1], r.q.blocks[0][0], r.q.blocks[0][1]
            );
        }
    }
    println!("  final cost: {}", trace.final_cost().unwrap());

    // A ball against a box: the cost chain D(P_n,Q_n) <= D(P_n,Q_{n-1})
    // <= D(P_{n-1},Q_{n-1}) is exact at every step.
    let p_set = HilbertSet::single(BlockSet::ball(vec![-1.0, 0.0], 0.5)?);
    let q_set = HilbertSet::single(BlockSet::axis_box(vec![1.0, -1.0], vec![2.0, 1.0])?);
    let q0 = ProductPoint::single(vec![1.5, 1.0]);
    let trace = run_classical(&cost, &p_set, &q_set, q0, StoppingRule::default())?;
    println!("\nball-vs-box example:");
    let costs = trace.costs();
    println!("  cost sequence: {:?}", &costs[..costs.len().min(5)]);
    println!("  monotone: {}", costs.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    Ok(())
}
