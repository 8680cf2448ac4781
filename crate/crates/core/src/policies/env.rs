//! The bandit environment a policy interacts with.

use crate::admg::Value;
use crate::estimators::ObsLog;
use crate::scm::{ArmSet, CostSet, Scm};
use crate::seed::{self, Purpose, StreamRng};

use super::trace::{Phase, PolicyTrace, Round};
use super::PolicyConfig;

/// Samples pulls from a model, charges their cost and records them.
pub(crate) struct Env<'a> {
    pub scm: &'a Scm,
    pub arms: ArmSet,
    pub costs: &'a CostSet,
    pub log: ObsLog,
    pub trace: PolicyTrace,
    pub remaining: f64,
    pub t: u64,
    rng: StreamRng,
    buffer: Vec<Value>,
}

impl<'a> Env<'a> {
    pub fn new(scm: &'a Scm, config: &'a PolicyConfig) -> Self {
        let arms = ArmSet::for_graph(scm.graph());
        Env {
            scm,
            log: ObsLog::new(arms.len()),
            arms,
            costs: &config.costs,
            trace: PolicyTrace::new(
                config.kind.name(),
                config.seed,
                config.budget,
                config.hash(),
            ),
            remaining: config.budget,
            t: 0,
            rng: seed::stream(config.seed, 0, Purpose::Sampling),
            buffer: Vec::new(),
        }
    }

    pub fn affordable(&self, arm: usize) -> bool {
        self.costs.get(arm) <= self.remaining
    }

    /// Pulls `arm`, charging its true cost, and returns the reward.
    pub fn pull(&mut self, arm: usize, phase: Phase) -> Value {
        let cost = self.costs.get(arm);
        debug_assert!(cost <= self.remaining, "arm {arm} is not affordable");
        self.t += 1;
        let reward = self
            .scm
            .sample_into(self.arms.get(arm), &mut self.rng, &mut self.buffer);
        let values = self.buffer[..self.scm.graph().len()].to_vec();
        self.log.push(self.t, arm, values, reward);
        self.remaining -= cost;
        self.trace.rounds.push(Round {
            t: self.t,
            arm,
            cost,
            reward,
            remaining: self.remaining,
            phase,
        });
        reward
    }

    pub fn finish(self, chosen: Option<usize>) -> PolicyTrace {
        let mut trace = self.trace;
        trace.chosen = chosen;
        trace
    }
}
