//! Frequency estimates of every interventional arm from observational
//! rounds, and the thresholds that decide which arms are explored directly.
//!
//! ```text
//! cargo run --example frequency_thresholds
//! ```

use causal_bandits::estimators::{compute_m_prime, compute_n_of_q, FrequencyProfile, ObsLog};
use causal_bandits::scm::{make_parallel_model, ArmSet, CostSet, ParallelParams};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = 1000.0;
    let scm = make_parallel_model(&ParallelParams::standard(7))?;
    let g = scm.graph();
    let arms = ArmSet::for_graph(g);
    let costs = CostSet::random_from(&arms, &[2.0, 3.0, 4.0, 5.0], &mut seed::from_seed(2))?;
    let log = ObsLog::observe(
        &scm,
        arms.len(),
        (budget / 2.0) as u64,
        &mut seed::from_seed(3),
    );

    let profile = FrequencyProfile::stratified(&log, g, &arms, budget)?;
    let n = compute_n_of_q(&profile, &costs);
    let m = compute_m_prime(&profile);
    println!("n(q) = {n}, m'(q) = {m}");
    for e in &profile.entries {
        let rare = e.q.powi(e.k as i32) <= 1.0 / n as f64;
        println!(
            "{:<10} q = {:.3}  cost {}  explored directly: {rare}",
            arms.get(e.arm).label(g),
            e.q,
            costs.get(e.arm)
        );
    }
    Ok(())
}
