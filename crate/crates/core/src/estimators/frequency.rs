//! Arm frequencies and the infrequency thresholds built on them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::admg::{Admg, NodeId, Value};
use crate::error::{EstimatorError, ModelError};
use crate::scm::{Arm, ArmSet, CostSet, Scm};

use super::log::ObsLog;

/// Frequency of one interventional arm and the size of its node's
/// c-component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEntry {
    /// Index into the [`ArmSet`].
    pub arm: usize,
    pub q: f64,
    pub k: usize,
}

/// Frequencies of every interventional arm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyProfile {
    pub entries: Vec<FrequencyEntry>,
}

fn target(arms: &ArmSet, arm: usize) -> (NodeId, Value) {
    match arms.get(arm) {
        Arm::Intervene { node, value } => (node, value),
        Arm::Observe => unreachable!("arm 0 is the observational arm"),
    }
}

impl FrequencyProfile {
    /// Stratified estimates for every interventional arm, from the
    /// observational rounds of `log` collected with budget `budget`.
    pub fn stratified(
        log: &ObsLog,
        g: &Admg,
        arms: &ArmSet,
        budget: f64,
    ) -> Result<Self, EstimatorError> {
        let entries = arms
            .interventional()
            .map(|a| {
                let (i, x) = target(arms, a);
                let (_, k) = g.component_parents(i)?;
                Ok(FrequencyEntry {
                    arm: a,
                    q: estimate_q_hat(log, g, i, x, budget)?,
                    k,
                })
            })
            .collect::<Result<_, EstimatorError>>()?;
        Ok(FrequencyProfile { entries })
    }

    /// Unstratified estimates with every exponent set to one, for graphs
    /// without backdoor paths.
    pub fn unstratified(log: &ObsLog, arms: &ArmSet, budget: f64) -> Self {
        let entries = arms
            .interventional()
            .map(|a| {
                let (i, x) = target(arms, a);
                FrequencyEntry {
                    arm: a,
                    q: estimate_q_hat_unstratified(log, i, x, budget),
                    k: 1,
                }
            })
            .collect();
        FrequencyProfile { entries }
    }

    /// Exact frequencies under `scm`: `min_z P(X_i = x, Pa~(X_i) = z)` when
    /// `stratified`, else `P(X_i = x)` with every exponent one.
    pub fn exact(scm: &Scm, arms: &ArmSet, stratified: bool) -> Result<Self, ModelError> {
        let g = scm.graph();
        let mut entries = Vec::new();
        for a in arms.interventional() {
            let (i, x) = target(arms, a);
            let (pa, k) = g.component_parents(i)?;
            let (q, k) = if stratified {
                let mut targets = vec![i];
                targets.extend(pa.iter().copied());
                let joint = scm.joint_marginal(Arm::Observe, &targets)?;
                let strata: usize = pa.iter().map(|&p| g.domain(p)).product();
                let start = usize::from(x) * strata;
                let q = joint[start..start + strata]
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                (q, k)
            } else {
                (scm.joint_marginal(Arm::Observe, &[i])?[usize::from(x)], 1)
            };
            entries.push(FrequencyEntry { arm: a, q, k });
        }
        Ok(FrequencyProfile { entries })
    }

    /// Profile with the given frequencies, arm indices `1..`, and exponent one.
    pub fn from_frequencies(qs: &[f64]) -> Self {
        let entries = qs
            .iter()
            .enumerate()
            .map(|(n, &q)| FrequencyEntry {
                arm: n + 1,
                q,
                k: 1,
            })
            .collect();
        FrequencyProfile { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Stratified frequency estimate of `do(X_i = x)`: the smallest count of
/// observational rounds with `X_i = x` over all realizations of `i`'s
/// effective parents, scaled by `2 / budget`. Unseen realizations count zero.
pub fn estimate_q_hat(
    log: &ObsLog,
    g: &Admg,
    i: NodeId,
    x: Value,
    budget: f64,
) -> Result<f64, EstimatorError> {
    let (pa, _) = g.component_parents(i)?;
    let pa: Vec<NodeId> = pa.into_iter().collect();
    let strata = pa
        .iter()
        .try_fold(1usize, |acc, &p| acc.checked_mul(g.domain(p)));
    let mut counts: HashMap<Vec<Value>, usize> = HashMap::new();
    for &k in log.observational() {
        let values = &log.record(k).values;
        if values[i.0] == x {
            let z: Vec<Value> = pa.iter().map(|&p| values[p.0]).collect();
            *counts.entry(z).or_default() += 1;
        }
    }
    let min = match strata {
        Some(n) if counts.len() == n => counts.values().copied().min().unwrap_or(0),
        _ => 0,
    };
    Ok(2.0 * min as f64 / budget)
}

/// Unstratified frequency estimate: the number of observational rounds
/// with `X_i = x`, scaled by `2 / budget`.
pub fn estimate_q_hat_unstratified(log: &ObsLog, i: NodeId, x: Value, budget: f64) -> f64 {
    let hits = log
        .observational()
        .iter()
        .filter(|&&k| log.record(k).values[i.0] == x)
        .count();
    2.0 * hits as f64 / budget
}

/// Cost-weighted threshold: the smallest positive integer `tau` with
/// `sum of c_a over arms with q_a < (1/tau)^(1/k_a)` at most `tau`.
pub fn compute_n_of_q(profile: &FrequencyProfile, costs: &CostSet) -> usize {
    let limit = profile
        .entries
        .iter()
        .map(|e| costs.get(e.arm))
        .sum::<f64>()
        .ceil()
        .max(1.0) as usize;
    (1..=limit)
        .find(|&tau| {
            let weight: f64 = profile
                .entries
                .iter()
                .filter(|e| e.q < (1.0 / tau as f64).powf(1.0 / e.k as f64))
                .map(|e| costs.get(e.arm))
                .sum();
            weight <= tau as f64
        })
        .unwrap_or(limit)
}

/// Unweighted threshold: the smallest positive integer `tau` with at most
/// `tau` arms having `q_a < 1/tau`.
pub fn compute_m_prime(profile: &FrequencyProfile) -> usize {
    let limit = profile.len().max(1);
    (1..=limit)
        .find(|&tau| {
            let n = profile
                .entries
                .iter()
                .filter(|e| e.q < 1.0 / tau as f64)
                .count();
            n <= tau
        })
        .unwrap_or(limit)
}

/// Conditional mean of the reward given `X_i = x` over the observational
/// rounds, or `None` when no round has `X_i = x`.
pub fn conditional_mean(log: &ObsLog, i: NodeId, x: Value) -> Option<f64> {
    let (hits, n) = log
        .observational()
        .iter()
        .map(|&k| log.record(k))
        .filter(|r| r.values[i.0] == x)
        .fold((0u64, 0u64), |(h, n), r| {
            (h + u64::from(r.reward == 1), n + 1)
        });
    (n > 0).then(|| hits as f64 / n as f64)
}
