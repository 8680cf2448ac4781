//! Round-by-round record of pulls and outcomes.

use serde::{Deserialize, Serialize};

use rand::Rng;

use crate::admg::Value;
use crate::error::EstimatorError;
use crate::scm::{Arm, Scm};

/// One pulled round: the arm index, every observed value and the reward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    /// 1-based round index.
    pub round: u64,
    /// Index into the [`ArmSet`](crate::scm::ArmSet); 0 is `observe`.
    pub arm: usize,
    /// Value of every observed node, indexed by node.
    pub values: Vec<Value>,
    pub reward: Value,
}

/// Records of a run, indexed by the arm that produced them.
///
/// The record indices of arm 0 form the observational set and those of
/// every other arm its interventional set; together they partition the log.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObsLog {
    records: Vec<Record>,
    by_arm: Vec<Vec<usize>>,
    successes: Vec<u64>,
}

impl ObsLog {
    /// Empty log for an action set of `arm_count` arms.
    pub fn new(arm_count: usize) -> Self {
        ObsLog {
            records: Vec::new(),
            by_arm: vec![Vec::new(); arm_count],
            successes: vec![0; arm_count],
        }
    }

    /// Appends a record and returns its index.
    ///
    /// # Panics
    /// If `arm` is outside the action set the log was created for.
    pub fn push(&mut self, round: u64, arm: usize, values: Vec<Value>, reward: Value) -> usize {
        let k = self.records.len();
        self.by_arm[arm].push(k);
        self.successes[arm] += u64::from(reward == 1);
        self.records.push(Record {
            round,
            arm,
            values,
            reward,
        });
        k
    }

    /// Log of `rounds` observational samples from `scm`, numbered from 1,
    /// for an action set of `arm_count` arms.
    pub fn observe<R: Rng + ?Sized>(scm: &Scm, arm_count: usize, rounds: u64, rng: &mut R) -> Self {
        let mut log = ObsLog::new(arm_count);
        for t in 1..=rounds {
            let (values, reward) = scm.sample(Arm::Observe, rng);
            log.push(t, 0, values, reward);
        }
        log
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn arm_count(&self) -> usize {
        self.by_arm.len()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn record(&self, k: usize) -> &Record {
        &self.records[k]
    }

    /// Record indices of the observational rounds.
    pub fn observational(&self) -> &[usize] {
        &self.by_arm[0]
    }

    /// Record indices of the rounds that pulled `arm`.
    pub fn pulls_of(&self, arm: usize) -> &[usize] {
        &self.by_arm[arm]
    }

    /// Number of times `arm` was pulled.
    pub fn count(&self, arm: usize) -> usize {
        self.by_arm[arm].len()
    }

    /// Number of pulls of `arm` that returned reward 1.
    pub fn successes(&self, arm: usize) -> u64 {
        self.successes[arm]
    }
}

/// Empirical mean reward of the observational arm.
pub fn update_mu0(log: &ObsLog) -> Result<f64, EstimatorError> {
    let n = log.count(0);
    if n == 0 {
        return Err(EstimatorError::NoObservations);
    }
    Ok(log.successes(0) as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_partition_the_log() {
        let mut log = ObsLog::new(3);
        for (t, arm) in [0, 2, 0, 1, 2, 2].into_iter().enumerate() {
            log.push(t as u64 + 1, arm, vec![0, 1], (t % 2) as Value);
        }
        let mut all: Vec<usize> = (0..3).flat_map(|a| log.pulls_of(a).to_vec()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
        assert_eq!(log.count(2), 3);
        assert_eq!(log.successes(2), 2);
    }

    #[test]
    fn observational_mean() {
        let mut log = ObsLog::new(2);
        assert_eq!(update_mu0(&log), Err(EstimatorError::NoObservations));
        for (t, y) in [1, 0, 1, 1].into_iter().enumerate() {
            log.push(t as u64 + 1, 0, vec![], y);
        }
        log.push(5, 1, vec![], 0);
        assert_eq!(update_mu0(&log).unwrap(), 0.75);
    }

    #[test]
    fn all_zero_rewards() {
        let mut log = ObsLog::new(1);
        for t in 1..=5 {
            log.push(t, 0, vec![], 0);
        }
        assert_eq!(update_mu0(&log).unwrap(), 0.0);
    }
}
