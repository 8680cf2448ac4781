use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::admg::{Admg, NodeId, Value};
use crate::error::ModelError;

/// A bandit arm: either observe the system untouched or clamp one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arm {
    Observe,
    Intervene { node: NodeId, value: Value },
}

impl Arm {
    pub fn intervene(node: NodeId, value: Value) -> Self {
        Arm::Intervene { node, value }
    }

    /// Human-readable label such as `observe` or `do(X1=1)`.
    pub fn label(&self, g: &Admg) -> String {
        match *self {
            Arm::Observe => "observe".to_string(),
            Arm::Intervene { node, value } => format!("do({}={value})", g.name(node)),
        }
    }

    /// Inverse of [`Arm::label`].
    pub fn parse_label(label: &str, g: &Admg) -> Result<Self, ModelError> {
        let label = label.trim();
        if label == "observe" {
            return Ok(Arm::Observe);
        }
        let inner = label
            .strip_prefix("do(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| ModelError::UnknownArm(label.to_string()))?;
        let (name, value) = inner
            .split_once('=')
            .ok_or_else(|| ModelError::UnknownArm(label.to_string()))?;
        let node = g.node(name.trim())?;
        let value: Value = value
            .trim()
            .parse()
            .map_err(|_| ModelError::UnknownArm(label.to_string()))?;
        if usize::from(value) >= g.domain(node) {
            return Err(ModelError::UnknownArm(label.to_string()));
        }
        Ok(Arm::Intervene { node, value })
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arm::Observe => write!(f, "observe"),
            Arm::Intervene { node, value } => write!(f, "do({node}={value})"),
        }
    }
}

/// The action set of a graph: `observe` first, then every (node, value) pair
/// of every intervenable node in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmSet {
    arms: Vec<Arm>,
}

impl ArmSet {
    pub fn for_graph(g: &Admg) -> Self {
        let mut arms = vec![Arm::Observe];
        for &i in g.intervenable() {
            for x in 0..g.domain(i) {
                arms.push(Arm::intervene(i, x as Value));
            }
        }
        ArmSet { arms }
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn get(&self, index: usize) -> Arm {
        self.arms[index]
    }

    pub fn as_slice(&self) -> &[Arm] {
        &self.arms
    }

    pub fn iter(&self) -> impl Iterator<Item = Arm> + '_ {
        self.arms.iter().copied()
    }

    pub fn index_of(&self, arm: Arm) -> Option<usize> {
        self.arms.iter().position(|&a| a == arm)
    }

    /// Indices of the interventional arms (every arm but `observe`).
    pub fn interventional(&self) -> std::ops::Range<usize> {
        1..self.arms.len()
    }
}

/// Cost of every arm of an [`ArmSet`], indexed like it. The observational
/// arm always costs one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSet {
    costs: Vec<f64>,
}

impl CostSet {
    /// Every interventional arm costs `c`.
    pub fn uniform(arms: &ArmSet, c: f64) -> Result<Self, ModelError> {
        let mut costs = vec![c; arms.len()];
        costs[0] = 1.0;
        Self::explicit(costs)
    }

    /// Each interventional arm's cost is drawn uniformly from `choices`.
    pub fn random_from<R: Rng + ?Sized>(
        arms: &ArmSet,
        choices: &[f64],
        rng: &mut R,
    ) -> Result<Self, ModelError> {
        if choices.is_empty() {
            return Err(ModelError::InvalidCost {
                arm: "any".into(),
                cost: f64::NAN,
            });
        }
        let mut costs = vec![1.0; arms.len()];
        for c in costs.iter_mut().skip(1) {
            *c = choices[rng.gen_range(0..choices.len())];
        }
        Self::explicit(costs)
    }

    /// Costs given per arm index; `costs[0]` must be one.
    pub fn explicit(costs: Vec<f64>) -> Result<Self, ModelError> {
        for (k, &c) in costs.iter().enumerate() {
            let bad = !c.is_finite() || c <= 0.0 || (k == 0 && c != 1.0);
            if bad {
                return Err(ModelError::InvalidCost {
                    arm: format!("#{k}"),
                    cost: c,
                });
            }
        }
        if costs.is_empty() {
            return Err(ModelError::InvalidCost {
                arm: "observe".into(),
                cost: f64::NAN,
            });
        }
        Ok(CostSet { costs })
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.costs[index]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }

    /// Sum of the interventional costs.
    pub fn interventional_sum(&self) -> f64 {
        self.costs[1..].iter().sum()
    }

    /// Cheapest interventional cost, or infinity when there is none.
    pub fn min_interventional(&self) -> f64 {
        self.costs[1..]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// The common interventional cost, if all interventional arms share one.
    pub fn uniform_interventional(&self) -> Option<f64> {
        let first = *self.costs.get(1)?;
        self.costs[1..].iter().all(|&c| c == first).then_some(first)
    }

    /// Same costs with every interventional arm set to one.
    pub fn unit(&self) -> Self {
        CostSet {
            costs: vec![1.0; self.costs.len()],
        }
    }
}
