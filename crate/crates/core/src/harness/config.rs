//! Experiment configuration files.
//!
//! ```toml
//! name = "fig2_cumulative_general"
//! trials = 100
//! seed = 1
//!
//! [model]
//! kind = "xor"                 # xor | random | parallel | file
//! graph = "cumulative-n6"      # catalog name or graph file (xor, random)
//!
//! [costs]
//! kind = "random"              # uniform | random | explicit
//! choices = [2, 3]
//!
//! [sweep]
//! budgets = [500, 1000, 1500, 2500]   # or: budget = 1000, costs = [1, 2, 3]
//!
//! [[policy]]
//! kind = "cumulative-ucb"
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::admg::{catalog, parse_graph, Admg};
use crate::error::{line_column, HarnessError};
use crate::policies::{EstimatorPath, PolicyConfig, PolicyKind};
use crate::scm::{
    load_model, make_parallel_model, make_random_model, make_xor_model, ArmSet, CostSet,
    ParallelParams, Scm,
};

/// How each trial's model is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// XOR model on a graph, redrawn every trial.
    Xor { graph: String },
    /// Model with uniformly random tables, redrawn every trial.
    Random { graph: String },
    /// Parallel model; `probs` defaults to the standard setting for `n`.
    Parallel {
        n: usize,
        #[serde(default)]
        probs: Option<Vec<f64>>,
        #[serde(default)]
        epsilon: Option<f64>,
    },
    /// Fixed model read from a model file.
    File { path: String },
}

/// How interventional costs are set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CostSpec {
    Uniform {
        value: f64,
    },
    /// Drawn independently per arm and per trial from `choices`.
    Random {
        choices: Vec<f64>,
    },
    /// One cost per interventional arm, in arm order.
    Explicit {
        values: Vec<f64>,
    },
}

/// The single sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<f64>>,
    /// Fixed budget of a cost sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    /// Uniform interventional costs of a cost sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<f64>>,
}

/// Which axis a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Budget,
    Cost,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Budget => "budget",
            SweepAxis::Cost => "cost",
        }
    }
}

/// One point of a sweep: the budget and, on a cost sweep, the uniform cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub budget: f64,
    pub cost: Option<f64>,
}

impl SweepPoint {
    pub fn value(&self, axis: SweepAxis) -> f64 {
        match axis {
            SweepAxis::Budget => self.budget,
            SweepAxis::Cost => self.cost.unwrap_or(f64::NAN),
        }
    }
}

/// One policy of an experiment and its flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_normalized: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        PolicySpec {
            kind,
            cost_normalized: None,
            estimator: None,
            threshold: None,
        }
    }

    /// Name used in reports: the policy kind, plus any non-default flags.
    pub fn label(&self) -> String {
        let mut label = self.kind.name().to_string();
        if self.cost_normalized == Some(false) {
            label.push_str("+raw-index");
        }
        if self.estimator == Some(EstimatorPath::Factorized) {
            label.push_str("+factorized");
        }
        if let Some(t) = self.threshold {
            label.push_str(&format!("+t{t}"));
        }
        label
    }

    pub fn config(&self, budget: f64, costs: CostSet, seed: u64) -> PolicyConfig {
        let mut config = PolicyConfig::new(self.kind, budget, costs, seed);
        if let Some(flag) = self.cost_normalized {
            config.cost_normalized = flag;
        }
        if let Some(path) = self.estimator {
            config.estimator = path;
        }
        config.threshold = self.threshold;
        config
    }
}

/// A full experiment: model, costs, sweep, policies and trial count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// CSV output path; the JSON sidecar sits next to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub model: ModelSpec,
    pub costs: CostSpec,
    pub sweep: SweepSpec,
    #[serde(rename = "policy")]
    pub policies: Vec<PolicySpec>,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses and validates a config; relative paths resolve against `base_dir`.
    pub fn parse(source: &str, base_dir: &Path) -> Result<Self, HarnessError> {
        let mut config: ExperimentConfig = toml::from_str(source).map_err(|e| {
            let (line, column) = line_column(source, e.span().map_or(0, |s| s.start));
            HarnessError::ConfigInvalid(format!(
                "line {line}, column {column}: {}",
                e.message().trim()
            ))
        })?;
        config.base_dir = base_dir.to_path_buf();
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let source = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&source, path.parent().unwrap_or_else(|| Path::new(".")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |m: String| Err(HarnessError::ConfigInvalid(m));
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.policies.is_empty() {
            return invalid("at least one [[policy]] is required".into());
        }
        let mut labels: Vec<String> = self.policies.iter().map(PolicySpec::label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return invalid("policy entries must be distinct".into());
        }
        let positive = |xs: &[f64]| xs.iter().all(|&x| x.is_finite() && x >= 0.0);
        match (&self.sweep.budgets, &self.sweep.budget, &self.sweep.costs) {
            (Some(b), None, None) if !b.is_empty() && positive(b) => {}
            (None, Some(b), Some(c)) if !c.is_empty() && positive(&[*b]) && positive(c) => {}
            _ => return invalid(
                "sweep needs exactly one axis: `budgets = [...]`, or `budget` with `costs = [...]`"
                    .into(),
            ),
        }
        match &self.costs {
            CostSpec::Random { choices } if choices.is_empty() => {
                invalid("random costs need at least one choice".into())
            }
            _ => Ok(()),
        }
    }

    pub fn axis(&self) -> SweepAxis {
        if self.sweep.budgets.is_some() {
            SweepAxis::Budget
        } else {
            SweepAxis::Cost
        }
    }

    pub fn points(&self) -> Vec<SweepPoint> {
        match (&self.sweep.budgets, self.sweep.budget, &self.sweep.costs) {
            (Some(budgets), _, _) => budgets
                .iter()
                .map(|&budget| SweepPoint { budget, cost: None })
                .collect(),
            (None, Some(budget), Some(costs)) => costs
                .iter()
                .map(|&c| SweepPoint {
                    budget,
                    cost: Some(c),
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        self.base_dir.join(path)
    }

    /// Graph named in the model spec: a catalog name or a graph file.
    pub fn graph(&self, name: &str) -> Result<Admg, HarnessError> {
        if let Some(g) = catalog::by_name(name) {
            return Ok(g);
        }
        let path = self.resolve(name);
        let source = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        Ok(parse_graph(&source)?)
    }

    /// Whether every trial uses a freshly drawn model.
    pub fn redraws_model(&self) -> bool {
        matches!(self.model, ModelSpec::Xor { .. } | ModelSpec::Random { .. })
    }

    /// The model of one trial, drawn from `rng` when the spec is random.
    pub fn build_model<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Scm, HarnessError> {
        Ok(match &self.model {
            ModelSpec::Xor { graph } => make_xor_model(&self.graph(graph)?, rng)?,
            ModelSpec::Random { graph } => make_random_model(&self.graph(graph)?, rng)?,
            ModelSpec::Parallel { n, probs, epsilon } => {
                let mut params = ParallelParams::standard(*n);
                if let Some(p) = probs {
                    params.probs = p.clone();
                }
                if let Some(e) = epsilon {
                    params.epsilon = *e;
                }
                make_parallel_model(&params)?
            }
            ModelSpec::File { path } => load_model(&self.resolve(path))?,
        })
    }

    /// Costs of one trial at one sweep point.
    pub fn build_costs<R: Rng + ?Sized>(
        &self,
        arms: &ArmSet,
        point: SweepPoint,
        rng: &mut R,
    ) -> Result<CostSet, HarnessError> {
        if let Some(c) = point.cost {
            return Ok(CostSet::uniform(arms, c)?);
        }
        Ok(match &self.costs {
            CostSpec::Uniform { value } => CostSet::uniform(arms, *value)?,
            CostSpec::Random { choices } => CostSet::random_from(arms, choices, rng)?,
            CostSpec::Explicit { values } => {
                if values.len() + 1 != arms.len() {
                    return Err(HarnessError::ConfigInvalid(format!(
                        "explicit costs list {} values but the model has {} interventional arms",
                        values.len(),
                        arms.len() - 1
                    )));
                }
                let mut all = vec![1.0];
                all.extend(values);
                CostSet::explicit(all)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
name = "t"
trials = 3
seed = 9

[model]
kind = "parallel"
n = 3

[costs]
kind = "uniform"
value = 2

[sweep]
budgets = [10, 20]

[[policy]]
kind = "simple-budgeted"
"#;

    #[test]
    fn parses_and_lists_points() {
        let c = ExperimentConfig::parse(BASIC, Path::new(".")).unwrap();
        assert_eq!(c.axis(), SweepAxis::Budget);
        assert_eq!(c.points().len(), 2);
        assert_eq!(c.policies[0].kind, PolicyKind::SimpleBudgeted);
        let back = ExperimentConfig::parse(&c.to_toml(), Path::new(".")).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_two_axes() {
        let bad = BASIC.replace(
            "budgets = [10, 20]",
            "budgets = [10]\nbudget = 5\ncosts = [1]",
        );
        assert!(matches!(
            ExperimentConfig::parse(&bad, Path::new(".")),
            Err(HarnessError::ConfigInvalid(_))
        ));
    }

    #[test]
    fn rejects_zero_trials_and_reports_positions() {
        let bad = BASIC.replace("trials = 3", "trials = 0");
        assert!(ExperimentConfig::parse(&bad, Path::new(".")).is_err());
        let bad = BASIC.replace("kind = \"simple-budgeted\"", "kind = \"nope\"");
        match ExperimentConfig::parse(&bad, Path::new(".")) {
            Err(HarnessError::ConfigInvalid(m)) => assert!(m.starts_with("line 18"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
