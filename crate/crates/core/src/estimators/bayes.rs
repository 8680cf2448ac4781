//! Observational estimate of an arm's mean through a Bayes net learned on
//! the target's reduced graph.

use crate::admg::{Admg, NodeId, Value};
use crate::error::EstimatorError;

use super::factor::{factorization_layouts, KeyLayout, Truncation};
use super::log::ObsLog;

/// Default count below which a table row outside the target's c-component
/// falls back to the uniform distribution: `max(1, floor(sqrt(samples)))`.
pub fn default_threshold(samples: usize) -> usize {
    ((samples as f64).sqrt().floor() as usize).max(1)
}

/// Conditional tables of every node of a reduced graph, keyed by the node's
/// conditioning-set realization.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesNet {
    graph: Admg,
    target: NodeId,
    value: Value,
    layouts: Vec<KeyLayout>,
    in_component: Vec<bool>,
    /// `tables[j][key * |dom(V_j)| + v]`.
    tables: Vec<Vec<f64>>,
}

impl BayesNet {
    /// Reduced graph the tables live on.
    pub fn graph(&self) -> &Admg {
        &self.graph
    }

    /// The target node (in the reduced graph's indexing) and its value.
    pub fn target(&self) -> (NodeId, Value) {
        (self.target, self.value)
    }

    /// Conditioning set of `j`.
    pub fn conditioning(&self, j: NodeId) -> &[NodeId] {
        &self.layouts[j.0].parents
    }

    /// `P(V_j = v | Z_j = z)` with `z` listed in conditioning order.
    pub fn prob(&self, j: NodeId, z: &[Value], v: Value) -> f64 {
        let dom = self.graph.domain(j);
        self.tables[j.0][self.layouts[j.0].key_of(z) * dom + usize::from(v)]
    }

    /// Overwrites the row for `Z_j = z`.
    pub fn set_row(&mut self, j: NodeId, z: &[Value], row: &[f64]) {
        let dom = self.graph.domain(j);
        let start = self.layouts[j.0].key_of(z) * dom;
        self.tables[j.0][start..start + dom].copy_from_slice(row);
    }

    /// Net on `h` for target `(i, x)` with every row uniform.
    pub fn uniform(h: &Admg, i: NodeId, x: Value) -> Self {
        let layouts = factorization_layouts(h);
        let component = h.c_component_of(i);
        let tables = h
            .nodes()
            .map(|j| {
                let dom = h.domain(j);
                vec![1.0 / dom as f64; layouts[j.0].key_count * dom]
            })
            .collect();
        BayesNet {
            graph: h.clone(),
            target: i,
            value: x,
            in_component: h.nodes().map(|v| component.contains(&v)).collect(),
            layouts,
            tables,
        }
    }
}

/// Learns the tables of `h`, the reduced graph of `g` for target
/// `do(X_i = x)`, from the observational rounds of `log`.
///
/// Nodes in the target's c-component get add-one smoothed tables
/// `(N_zv + 1) / (N_z + |dom|)`. Other nodes use the same rule when
/// `N_z >= threshold` and the uniform row otherwise.
pub fn learn_bayes_net(
    log: &ObsLog,
    g: &Admg,
    h: &Admg,
    i: NodeId,
    x: Value,
    threshold: usize,
) -> Result<BayesNet, EstimatorError> {
    let target = h.node(g.name(i))?;
    let original: Vec<NodeId> = h
        .nodes()
        .map(|v| g.node(h.name(v)))
        .collect::<Result<_, _>>()?;
    let mut net = BayesNet::uniform(h, target, x);
    let mut projected = vec![0 as Value; h.len()];
    let mut counts: Vec<Vec<u32>> = net.tables.iter().map(|t| vec![0; t.len()]).collect();
    for &k in log.observational() {
        let values = &log.record(k).values;
        for (slot, v) in projected.iter_mut().zip(&original) {
            *slot = values[v.0];
        }
        for j in h.nodes() {
            let dom = h.domain(j);
            let key = net.layouts[j.0].key(&projected, None);
            counts[j.0][key * dom + usize::from(projected[j.0])] += 1;
        }
    }
    for j in h.nodes() {
        let dom = h.domain(j);
        for (row, c) in net.tables[j.0].chunks_mut(dom).zip(counts[j.0].chunks(dom)) {
            let n: u32 = c.iter().sum();
            if net.in_component[j.0] || n as usize >= threshold {
                let denom = f64::from(n) + dom as f64;
                for (p, &cv) in row.iter_mut().zip(c) {
                    *p = (f64::from(cv) + 1.0) / denom;
                }
            }
        }
    }
    Ok(net)
}

/// Mean reward of the net's target arm: the truncated factorization over
/// the reduced graph, with the target read as `x` outside its c-component.
pub fn mu_from_bayes_net(net: &BayesNet) -> Result<f64, EstimatorError> {
    Truncation::check_size(&net.graph)?;
    let t = Truncation {
        graph: &net.graph,
        layouts: &net.layouts,
        in_component: &net.in_component,
        target: net.target,
        value: net.value,
    };
    Ok(t.sum(|j, key, v| {
        let dom = net.graph.domain(NodeId(j));
        net.tables[j][key * dom + usize::from(v)]
    }))
}

/// Learns the net on `g`'s reduced graph for `do(X_i = x)` and returns the
/// implied mean.
pub fn estimate_mu_bayes(
    log: &ObsLog,
    g: &Admg,
    i: NodeId,
    x: Value,
    threshold: usize,
) -> Result<f64, EstimatorError> {
    let h = g.reduced_graph_for(i)?;
    mu_from_bayes_net(&learn_bayes_net(log, g, &h, i, x, threshold)?)
}
