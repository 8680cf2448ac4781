use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arms::Arm;
use crate::admg::{Admg, NodeId, Value};
use crate::error::ModelError;

/// Tolerance on the sum of each probability row.
pub const ROW_TOLERANCE: f64 = 1e-12;

/// A variable of the model: an observed node or a latent confounder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Observed(NodeId),
    Latent(usize),
}

/// Hidden common cause behind one bidirected edge.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentVar {
    pub name: String,
    pub between: (NodeId, NodeId),
    /// Marginal distribution over `0..probs.len()`.
    pub probs: Vec<f64>,
}

impl LatentVar {
    /// Binary latent with `P(U = 1) = p`.
    pub fn bernoulli(name: impl Into<String>, between: (NodeId, NodeId), p: f64) -> Self {
        LatentVar {
            name: name.into(),
            between,
            probs: vec![1.0 - p, p],
        }
    }
}

/// Conditional probability table of one observed node.
///
/// Rows are indexed by the parent assignment in mixed radix with the first
/// parent most significant; each row is a distribution over the node's
/// domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    parents: Vec<Var>,
    rows: Vec<Vec<f64>>,
}

impl Cpt {
    pub fn new(parents: Vec<Var>, rows: Vec<Vec<f64>>) -> Self {
        Cpt { parents, rows }
    }

    /// Parentless table.
    pub fn constant(distribution: Vec<f64>) -> Self {
        Cpt {
            parents: Vec::new(),
            rows: vec![distribution],
        }
    }

    pub fn parents(&self) -> &[Var] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

fn check_distribution(what: impl FnOnce() -> String, row: &[f64]) -> Result<(), ModelError> {
    for &p in row {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(ModelError::InvalidProbability {
                what: what(),
                value: p,
            });
        }
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(ModelError::InvalidProbability {
            what: format!("row sum of {}", what()),
            value: sum,
        });
    }
    Ok(())
}

/// Draws an index from a discrete distribution with one uniform draw.
#[inline]
pub(crate) fn draw<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Value {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, &p) in probs[..probs.len() - 1].iter().enumerate() {
        acc += p;
        if u < acc {
            return k as Value;
        }
    }
    (probs.len() - 1) as Value
}

/// Discrete structural causal model over an [`Admg`].
///
/// Each bidirected edge is backed by exactly one latent variable. Each
/// observed node's table may depend on any subset of its graph parents and
/// incident latents.
#[derive(Debug, Clone)]
pub struct Scm {
    graph: Admg,
    latents: Vec<LatentVar>,
    cpts: Vec<Cpt>,
    // Per node: slot of each table parent in the combined value vector, and
    // the mixed-radix stride of that parent.
    slots: Vec<Vec<(usize, usize)>>,
}

impl Scm {
    pub fn new(graph: Admg, latents: Vec<LatentVar>, cpts: Vec<Cpt>) -> Result<Self, ModelError> {
        let reward = graph.reward();
        if graph.domain(reward) != 2 {
            return Err(ModelError::NonBinaryReward(graph.name(reward).to_string()));
        }
        let edges = graph.bidirected_edges();
        let mut covered = vec![false; edges.len()];
        for latent in &latents {
            let (a, b) = latent.between;
            let key = if a < b { (a, b) } else { (b, a) };
            let pos = edges
                .iter()
                .position(|&e| e == key)
                .ok_or_else(|| ModelError::InvalidLatent(latent.name.clone()))?;
            if std::mem::replace(&mut covered[pos], true) || latent.probs.len() < 2 {
                return Err(ModelError::InvalidLatent(latent.name.clone()));
            }
            check_distribution(|| format!("latent `{}`", latent.name), &latent.probs)?;
        }
        if let Some(pos) = covered.iter().position(|&c| !c) {
            let (a, b) = edges[pos];
            return Err(ModelError::InvalidLatent(format!(
                "no latent for {}<->{}",
                graph.name(a),
                graph.name(b)
            )));
        }
        if cpts.len() != graph.len() {
            return Err(ModelError::InvalidCpt {
                node: "*".into(),
                reason: format!("{} tables for {} nodes", cpts.len(), graph.len()),
            });
        }

        let n = graph.len();
        let mut slots = Vec::with_capacity(n);
        for (v, cpt) in graph.nodes().zip(&cpts) {
            let invalid = |reason: String| ModelError::InvalidCpt {
                node: graph.name(v).to_string(),
                reason,
            };
            let mut domains = Vec::with_capacity(cpt.parents.len());
            let mut seen = Vec::new();
            for &p in &cpt.parents {
                if seen.contains(&p) {
                    return Err(invalid("duplicate parent".into()));
                }
                seen.push(p);
                match p {
                    Var::Observed(u) => {
                        if !graph.parents(v).contains(&u) {
                            return Err(invalid(format!("`{}` is not a parent", graph.name(u))));
                        }
                        domains.push((u.0, graph.domain(u)));
                    }
                    Var::Latent(l) => {
                        let latent = latents
                            .get(l)
                            .ok_or_else(|| invalid(format!("unknown latent #{l}")))?;
                        if latent.between.0 != v && latent.between.1 != v {
                            return Err(invalid(format!(
                                "latent `{}` does not touch this node",
                                latent.name
                            )));
                        }
                        domains.push((n + l, latent.probs.len()));
                    }
                }
            }
            let expected: usize = domains.iter().map(|&(_, d)| d).product();
            if cpt.rows.len() != expected {
                return Err(invalid(format!(
                    "{} rows, expected {expected}",
                    cpt.rows.len()
                )));
            }
            for (r, row) in cpt.rows.iter().enumerate() {
                if row.len() != graph.domain(v) {
                    return Err(invalid(format!(
                        "row {r} has {} entries, expected {}",
                        row.len(),
                        graph.domain(v)
                    )));
                }
                check_distribution(|| format!("row {r} of `{}`", graph.name(v)), row)?;
            }
            let mut stride = 1;
            let mut node_slots = vec![(0, 0); domains.len()];
            for (k, &(slot, d)) in domains.iter().enumerate().rev() {
                node_slots[k] = (slot, stride);
                stride *= d;
            }
            slots.push(node_slots);
        }
        Ok(Scm {
            graph,
            latents,
            cpts,
            slots,
        })
    }

    pub fn graph(&self) -> &Admg {
        &self.graph
    }

    pub fn latents(&self) -> &[LatentVar] {
        &self.latents
    }

    pub fn cpt(&self, v: NodeId) -> &Cpt {
        &self.cpts[v.0]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    /// Number of slots in the combined (observed then latent) value vector.
    pub(crate) fn slot_count(&self) -> usize {
        self.graph.len() + self.latents.len()
    }

    pub(crate) fn var_domain(&self, var: Var) -> usize {
        match var {
            Var::Observed(v) => self.graph.domain(v),
            Var::Latent(l) => self.latents[l].probs.len(),
        }
    }

    pub(crate) fn slot(&self, var: Var) -> usize {
        match var {
            Var::Observed(v) => v.0,
            Var::Latent(l) => self.graph.len() + l,
        }
    }

    /// Distribution of `v` given the values already stored in `values`.
    #[inline]
    pub(crate) fn row_for(&self, v: NodeId, values: &[Value]) -> &[f64] {
        let row: usize = self.slots[v.0]
            .iter()
            .map(|&(slot, stride)| usize::from(values[slot]) * stride)
            .sum();
        &self.cpts[v.0].rows[row]
    }

    /// Samples one round into `values` (resized to hold observed then latent
    /// values) and returns the reward. A clamped node consumes no randomness.
    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        arm: Arm,
        rng: &mut R,
        values: &mut Vec<Value>,
    ) -> Value {
        let n = self.graph.len();
        values.clear();
        values.resize(self.slot_count(), 0);
        for (l, latent) in self.latents.iter().enumerate() {
            values[n + l] = draw(&latent.probs, rng);
        }
        for &v in self.graph.topological_order() {
            values[v.0] = match arm {
                Arm::Intervene { node, value } if node == v => value,
                _ => draw(self.row_for(v, values), rng),
            };
        }
        values[self.graph.reward().0]
    }

    /// Samples one round and returns the observed assignment and the reward.
    pub fn sample<R: Rng + ?Sized>(&self, arm: Arm, rng: &mut R) -> (Vec<Value>, Value) {
        let mut values = Vec::new();
        let reward = self.sample_into(arm, rng, &mut values);
        values.truncate(self.graph.len());
        (values, reward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admg::{catalog, AdmgBuilder};
    use crate::seed;

    fn single_node(p: f64) -> Scm {
        let g = AdmgBuilder::new().node("Y").reward("Y").build().unwrap();
        Scm::new(g, vec![], vec![Cpt::constant(vec![1.0 - p, p])]).unwrap()
    }

    #[test]
    fn degenerate_reward_is_constant() {
        let scm = single_node(1.0);
        let mut rng = seed::from_seed(3);
        for _ in 0..100 {
            assert_eq!(scm.sample(Arm::Observe, &mut rng).1, 1);
        }
    }

    #[test]
    fn clamped_node_keeps_its_value() {
        let g = catalog::front_door();
        let (x, m) = (g.node("X").unwrap(), g.node("M").unwrap());
        let latents = vec![LatentVar::bernoulli("U", (x, g.reward()), 0.5)];
        let cpts = vec![
            Cpt::new(vec![Var::Latent(0)], vec![vec![0.9, 0.1], vec![0.2, 0.8]]),
            Cpt::new(vec![Var::Observed(x)], vec![vec![0.7, 0.3], vec![0.1, 0.9]]),
            Cpt::new(
                vec![Var::Observed(m), Var::Latent(0)],
                vec![
                    vec![0.5, 0.5],
                    vec![0.4, 0.6],
                    vec![0.3, 0.7],
                    vec![0.2, 0.8],
                ],
            ),
        ];
        let scm = Scm::new(g, latents, cpts).unwrap();
        let mut rng = seed::from_seed(11);
        for _ in 0..200 {
            let (values, _) = scm.sample(Arm::intervene(x, 1), &mut rng);
            assert_eq!(values[x.0], 1);
            assert_eq!(values.len(), 3);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let g = catalog::parallel(1);
        let x = g.node("X1").unwrap();
        let ok_x = Cpt::constant(vec![0.5, 0.5]);
        let bad_sum = Cpt::new(vec![Var::Observed(x)], vec![vec![0.5, 0.6], vec![0.5, 0.5]]);
        assert!(matches!(
            Scm::new(g.clone(), vec![], vec![ok_x.clone(), bad_sum]),
            Err(ModelError::InvalidProbability { .. })
        ));
        let wrong_rows = Cpt::new(vec![Var::Observed(x)], vec![vec![0.5, 0.5]]);
        assert!(matches!(
            Scm::new(g.clone(), vec![], vec![ok_x.clone(), wrong_rows]),
            Err(ModelError::InvalidCpt { .. })
        ));
        let not_parent = Cpt::new(vec![Var::Observed(g.reward())], vec![vec![0.5, 0.5]; 2]);
        assert!(matches!(
            Scm::new(g, vec![], vec![not_parent, ok_x]),
            Err(ModelError::InvalidCpt { .. })
        ));
    }

    #[test]
    fn every_bidirected_edge_needs_a_latent() {
        let g = catalog::front_door();
        let cpts = vec![
            Cpt::constant(vec![0.5, 0.5]),
            Cpt::new(vec![Var::Observed(NodeId(0))], vec![vec![0.5, 0.5]; 2]),
            Cpt::new(vec![Var::Observed(NodeId(1))], vec![vec![0.5, 0.5]; 2]),
        ];
        assert!(matches!(
            Scm::new(g, vec![], cpts),
            Err(ModelError::InvalidLatent(_))
        ));
    }

    #[test]
    fn equal_seeds_give_equal_streams() {
        let scm =
            crate::scm::make_parallel_model(&crate::scm::ParallelParams::standard(5)).unwrap();
        let run = |s| {
            let mut rng = seed::from_seed(s);
            (0..50)
                .map(|_| scm.sample(Arm::Observe, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }
}
