//! Cumulative-regret policies on an XOR model with random costs: the causal
//! UCB policy against the budgeted KUBE baseline on the same sample stream.
//!
//! ```text
//! cargo run --release --example cumulative_policies -- [BUDGET]
//! ```

use causal_bandits::admg::catalog;
use causal_bandits::harness::{run_trial_with, Oracle};
use causal_bandits::policies::{PolicyConfig, PolicyKind};
use causal_bandits::scm::{make_xor_model, ArmSet, CostSet};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget: f64 = std::env::args().nth(1).map_or(Ok(1000.0), |b| b.parse())?;
    let scm = make_xor_model(&catalog::cumulative_n6(), &mut seed::from_seed(1))?;
    let arms = ArmSet::for_graph(scm.graph());
    let costs = CostSet::random_from(&arms, &[2.0, 3.0], &mut seed::from_seed(2))?;
    let oracle = Oracle::new(&scm, &costs)?;
    println!(
        "ratio-optimal arm: {}",
        oracle.labels[oracle.ratio_best_arm]
    );
    for kind in [PolicyKind::CumulativeUcb, PolicyKind::BudgetedKube] {
        let config = PolicyConfig::new(kind, budget, costs.clone(), 42);
        let outcome = run_trial_with(&scm, &config, &oracle)?;
        let counts = outcome.trace.pull_counts(arms.len());
        println!(
            "{:<16} rounds {:>4}  regret {:>8.3}  pulls of best {}",
            kind.name(),
            outcome.trace.rounds.len(),
            outcome.cumulative_regret.unwrap_or(f64::NAN),
            counts[oracle.ratio_best_arm]
        );
    }
    Ok(())
}
