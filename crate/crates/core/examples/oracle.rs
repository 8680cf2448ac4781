//! Exact arm means of a parallel model, the optimal arms and the knapsack
//! benchmark `R*(B)` under random costs.
//!
//! ```text
//! cargo run --example oracle -- [BUDGET]
//! ```

use causal_bandits::scm::{
    best_arm, make_parallel_model, optimal_value, ratio_optimal_arm, ArmSet, CostSet,
    ParallelParams,
};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget: f64 = std::env::args().nth(1).map_or(Ok(100.0), |b| b.parse())?;
    let scm = make_parallel_model(&ParallelParams::standard(4))?;
    let g = scm.graph();
    let arms = ArmSet::for_graph(g);
    let costs = CostSet::random_from(&arms, &[2.0, 3.0, 4.0, 5.0], &mut seed::from_seed(1))?;
    let means = scm.oracle_means(&arms)?;
    for (a, arm) in arms.iter().enumerate() {
        println!(
            "{:<10} mean {:.4}  cost {}",
            arm.label(g),
            means[a],
            costs.get(a)
        );
    }
    println!("best arm: {}", arms.get(best_arm(&means)).label(g));
    println!(
        "best per unit cost: {}",
        arms.get(ratio_optimal_arm(&means, &costs)).label(g)
    );
    println!(
        "R*({budget}) = {:.4}",
        optimal_value(&means, &costs, budget)?
    );
    Ok(())
}
