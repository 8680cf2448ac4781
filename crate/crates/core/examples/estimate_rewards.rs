//! Estimates interventional means from observational data alone, with the
//! sliced factorization estimator and the Bayes-net estimator, and compares
//! both with the exact oracle.
//!
//! ```text
//! cargo run --example estimate_rewards -- [SAMPLES]
//! ```

use causal_bandits::admg::catalog;
use causal_bandits::estimators::{
    build_strata, default_threshold, estimate_mu_bayes, slice_estimates, ObsLog, ObservationalIndex,
};
use causal_bandits::scm::{make_random_model, Arm, ArmSet};
use causal_bandits::seed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples: u64 = std::env::args().nth(1).map_or(Ok(5000), |s| s.parse())?;
    let g = catalog::front_door();
    let scm = make_random_model(&g, &mut seed::from_seed(3))?;
    let arms = ArmSet::for_graph(&g);
    let oracle = scm.oracle_means(&arms)?;
    let log = ObsLog::observe(&scm, arms.len(), samples, &mut seed::from_seed(4));
    let index = ObservationalIndex::build(&log, &g, 5);
    let threshold = default_threshold(log.count(0));

    println!(
        "{:<10} {:>8} {:>8} {:>7} {:>8}",
        "arm", "oracle", "sliced", "slices", "bayes"
    );
    for (a, arm) in arms.iter().enumerate().skip(1) {
        let Arm::Intervene { node, value } = arm else {
            unreachable!()
        };
        let strata = build_strata(&index, &g, node, value)?;
        let ys = slice_estimates(&g, &index, &strata, &log)?;
        let sliced = ys.iter().sum::<f64>() / ys.len().max(1) as f64;
        let bayes = estimate_mu_bayes(&log, &g, node, value, threshold)?;
        println!(
            "{:<10} {:>8.4} {:>8.4} {:>7} {:>8.4}",
            arm.label(&g),
            oracle[a],
            sliced,
            ys.len(),
            bayes
        );
    }
    Ok(())
}
