//! Seeded trials over a sweep, run in parallel and aggregated in order.

use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, SweepPoint};
use super::report::{mean_and_stderr, OracleBlock, RegretKind, RegretReport, ReportCell};
use super::trial::{run_trial_with, Oracle};
use crate::error::HarnessError;
use crate::scm::{optimal_value, ArmSet};
use crate::seed::{self, Purpose};

/// Regret of every policy in one trial at one sweep point, in policy order.
type TrialRegrets = Vec<f64>;

/// Runs every (sweep point, trial) pair of `config` and aggregates the
/// regrets per (policy, point).
///
/// Trial `k` draws its model, its costs and its sampling seed from streams
/// keyed by `(config.seed, k)`, so all policies and all sweep points of one
/// trial are paired. `jobs` caps the worker count; zero uses every core.
pub fn run_sweep(config: &ExperimentConfig, jobs: usize) -> Result<RegretReport, HarnessError> {
    let started = Instant::now();
    let points = config.points();
    let tasks: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..config.trials).map(move |k| (p, k)))
        .collect();
    let run = || {
        tasks
            .par_iter()
            .map(|&(p, k)| run_point_trial(config, points[p], k as u64))
            .collect::<Result<Vec<TrialRegrets>, HarnessError>>()
    };
    let results = if jobs == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| HarnessError::ConfigInvalid(format!("cannot start workers: {e}")))?
            .install(run)?
    };

    let axis = config.axis();
    let mut cells = Vec::new();
    for (p, point) in points.iter().enumerate() {
        for (q, policy) in config.policies.iter().enumerate() {
            let values: Vec<f64> = (0..config.trials)
                .map(|k| results[p * config.trials + k][q])
                .collect();
            let (mean_regret, stderr) = mean_and_stderr(&values);
            cells.push(ReportCell {
                policy: policy.label(),
                sweep_axis: axis.as_str().to_string(),
                sweep_value: point.value(axis),
                trials: config.trials,
                mean_regret,
                stderr,
                regret_kind: if policy.kind.is_simple() {
                    RegretKind::Simple
                } else {
                    RegretKind::Cumulative
                },
            });
        }
    }
    Ok(RegretReport {
        config: config.clone(),
        cells,
        oracle: oracle_block(config, &points)?,
        version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_point_trial(
    config: &ExperimentConfig,
    point: SweepPoint,
    trial: u64,
) -> Result<TrialRegrets, HarnessError> {
    let scm = config.build_model(&mut seed::stream(config.seed, trial, Purpose::Model))?;
    let arms = ArmSet::for_graph(scm.graph());
    let costs = config.build_costs(
        &arms,
        point,
        &mut seed::stream(config.seed, trial, Purpose::Costs),
    )?;
    let oracle = Oracle::new(&scm, &costs)?;
    let run_seed = seed::derive_seed(config.seed, trial, Purpose::Sampling);
    config
        .policies
        .iter()
        .map(|policy| {
            let policy_config = policy.config(point.budget, costs.clone(), run_seed);
            let outcome = run_trial_with(&scm, &policy_config, &oracle)?;
            Ok(outcome
                .simple_regret
                .or(outcome.cumulative_regret)
                .unwrap_or(f64::NAN))
        })
        .collect()
}

fn oracle_block(
    config: &ExperimentConfig,
    points: &[SweepPoint],
) -> Result<Option<OracleBlock>, HarnessError> {
    let Some(&first) = points.first() else {
        return Ok(None);
    };
    let scm = config.build_model(&mut seed::stream(config.seed, 0, Purpose::Model))?;
    let arms = ArmSet::for_graph(scm.graph());
    let costs = config.build_costs(
        &arms,
        first,
        &mut seed::stream(config.seed, 0, Purpose::Costs),
    )?;
    let oracle = Oracle::new(&scm, &costs)?;
    let optimal_values = points
        .iter()
        .filter(|p| p.cost.is_none())
        .filter_map(|p| {
            optimal_value(&oracle.means, &costs, p.budget)
                .ok()
                .map(|v| (p.budget, v))
        })
        .collect();
    Ok(Some(OracleBlock {
        oracle,
        optimal_values,
    }))
}
