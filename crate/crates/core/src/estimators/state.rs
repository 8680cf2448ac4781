//! Per-arm estimates kept up to date across the rounds of a policy run.

use serde::{Deserialize, Serialize};

use crate::admg::Admg;
use crate::error::EstimatorError;
use crate::scm::{Arm, ArmSet};

use super::factor::Truncation;
use super::factorized::{
    build_strata, estimate_mu_ix, slice_estimates, ucb_index, ObservationalIndex,
};
use super::log::{update_mu0, ObsLog};

/// Point estimate of one arm and the number of samples behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmEstimate {
    pub mu: f64,
    /// Pulls of the arm plus, for interventional arms, its slice count.
    pub count: usize,
    /// Observational slices pooled into `mu`.
    pub slices: usize,
}

/// Factorized estimates of every arm, refreshed when the log changes.
///
/// Slice estimates depend only on the observational rounds, so they are
/// recomputed only when a new observational round arrives. Arms whose
/// effect fails the identifiability check never receive slices and are
/// listed by [`EstimatorState::unidentified`].
#[derive(Debug, Clone)]
pub struct EstimatorState {
    arms: ArmSet,
    index: ObservationalIndex,
    slices: Vec<Vec<f64>>,
    unidentified: Vec<usize>,
}

impl EstimatorState {
    pub fn new(g: &Admg, arms: &ArmSet, seed: u64) -> Result<Self, EstimatorError> {
        Truncation::check_size(g)?;
        let mut unidentified = Vec::new();
        for a in arms.interventional() {
            if let Arm::Intervene { node, .. } = arms.get(a) {
                if !g.identifiable_sufficient(node)? {
                    unidentified.push(a);
                }
            }
        }
        Ok(EstimatorState {
            arms: arms.clone(),
            index: ObservationalIndex::build(&ObsLog::new(arms.len()), g, seed),
            slices: vec![Vec::new(); arms.len()],
            unidentified,
        })
    }

    /// Brings the slice estimates in line with `log`.
    pub fn update(&mut self, g: &Admg, log: &ObsLog) -> Result<(), EstimatorError> {
        if !self.index.refresh(log, g) {
            return Ok(());
        }
        for a in self.arms.interventional() {
            let Arm::Intervene { node, value } = self.arms.get(a) else {
                continue;
            };
            let strata = build_strata(&self.index, g, node, value)?;
            self.slices[a] = slice_estimates(g, &self.index, &strata, log)?;
        }
        Ok(())
    }

    /// Slice estimates currently pooled into `arm`.
    pub fn slice_estimates(&self, arm: usize) -> &[f64] {
        &self.slices[arm]
    }

    /// Arms whose effect is not identified by the sufficient check.
    pub fn unidentified(&self) -> &[usize] {
        &self.unidentified
    }

    pub fn estimate(&self, log: &ObsLog, arm: usize) -> Result<ArmEstimate, EstimatorError> {
        if arm == 0 {
            return Ok(ArmEstimate {
                mu: update_mu0(log)?,
                count: log.count(0),
                slices: 0,
            });
        }
        let slices = &self.slices[arm];
        Ok(ArmEstimate {
            mu: estimate_mu_ix(log, arm, slices)?,
            count: log.count(arm) + slices.len(),
            slices: slices.len(),
        })
    }

    /// Upper confidence bound of `arm` at round `t`.
    pub fn ucb(&self, log: &ObsLog, arm: usize, t: f64) -> Result<f64, EstimatorError> {
        let e = self.estimate(log, arm)?;
        ucb_index(e.mu, e.count, t)
    }
}
