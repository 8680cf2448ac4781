//! Round-by-round record of a policy run.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::admg::Value;

/// Stage of the policy a round belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    /// One pull of every arm before the main loop.
    Init,
    /// Adaptive rounds of a cumulative-regret policy.
    Main,
    /// Observation rounds of a two-phase simple-regret policy.
    Observe,
    /// Scheduled interventional pulls of the infrequent arms.
    Explore,
    /// Extra pulls funded by the budget left after rounding.
    Leftover,
    /// A phase of successive rejects.
    Reject,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Init => "init",
            Phase::Main => "main",
            Phase::Observe => "observe",
            Phase::Explore => "explore",
            Phase::Leftover => "leftover",
            Phase::Reject => "reject",
        }
    }
}

/// One pulled round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    /// 1-based round index.
    pub t: u64,
    pub arm: usize,
    pub cost: f64,
    pub reward: Value,
    /// Budget left after this round was charged.
    pub remaining: f64,
    pub phase: Phase,
}

/// Inputs to the observation guard of the cumulative policy at one round,
/// kept so the guard can be replayed from the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardRecord {
    pub t: u64,
    /// Observational pulls before the round.
    pub observations: usize,
    pub beta: f64,
    /// Budget before the round.
    pub budget: f64,
    /// Whether the guard forced the observational arm.
    pub forced: bool,
}

impl GuardRecord {
    /// Whether an exploiting round was allowed by the guard:
    /// enough observations and enough budget for the cheapest intervention.
    pub fn exploitation_allowed(&self, min_cost: f64) -> bool {
        self.observations as f64 >= self.beta * self.beta * (self.t as f64).ln()
            && self.budget >= min_cost
    }
}

/// Estimator state of every arm at one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: u64,
    pub mu: Vec<f64>,
    pub ucb: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Everything a policy run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyTrace {
    pub policy: String,
    pub seed: u64,
    pub budget: f64,
    pub config_hash: u64,
    pub rounds: Vec<Round>,
    /// Arm returned by a simple-regret policy.
    pub chosen: Option<usize>,
    pub guards: Vec<GuardRecord>,
    pub snapshots: Vec<Snapshot>,
    /// Arms whose observational estimate was unavailable.
    pub unidentified: Vec<usize>,
    /// Arms a two-phase policy selected for direct pulls.
    pub infrequent: Vec<usize>,
}

impl PolicyTrace {
    pub fn new(policy: &str, seed: u64, budget: f64, config_hash: u64) -> Self {
        PolicyTrace {
            policy: policy.to_string(),
            seed,
            budget,
            config_hash,
            rounds: Vec::new(),
            chosen: None,
            guards: Vec::new(),
            snapshots: Vec::new(),
            unidentified: Vec::new(),
            infrequent: Vec::new(),
        }
    }

    /// Total cost charged.
    pub fn spent(&self) -> f64 {
        self.rounds.iter().map(|r| r.cost).sum()
    }

    /// Total cost charged during `phase`.
    pub fn spent_in(&self, phase: Phase) -> f64 {
        self.rounds
            .iter()
            .filter(|r| r.phase == phase)
            .map(|r| r.cost)
            .sum()
    }

    /// Number of pulls of each of `arm_count` arms.
    pub fn pull_counts(&self, arm_count: usize) -> Vec<usize> {
        let mut counts = vec![0; arm_count];
        for r in &self.rounds {
            counts[r.arm] += 1;
        }
        counts
    }

    /// Writes a `#` header line and one comma-separated line per round.
    pub fn write_lines<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "# policy={} seed={} budget={} config_hash={:016x} chosen={}",
            self.policy,
            self.seed,
            self.budget,
            self.config_hash,
            self.chosen.map_or("-".to_string(), |a| a.to_string())
        )?;
        writeln!(w, "t,arm,cost,reward,remaining,phase")?;
        for r in &self.rounds {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.t,
                r.arm,
                r.cost,
                r.reward,
                r.remaining,
                r.phase.as_str()
            )?;
        }
        Ok(())
    }
}

/// 64-bit FNV-1a hash, stable across platforms and releases.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}
