use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Value of a discrete variable. Domains are `0..domain_size`.
pub type Value = u8;

/// Index of an observed variable inside one [`Admg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type NodeSet = BTreeSet<NodeId>;

/// Acyclic directed mixed graph over observed variables.
///
/// Bidirected edges stand for hidden common causes. The directed part is
/// validated to be acyclic on construction and a deterministic topological
/// order (smallest index first among ready nodes) is cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admg {
    names: Vec<String>,
    domains: Vec<usize>,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
    spouses: Vec<Vec<NodeId>>,
    reward: NodeId,
    intervenable: Vec<NodeId>,
    topo: Vec<NodeId>,
}

impl Admg {
    /// Builds a graph from raw parts, validating every structural invariant.
    ///
    /// `intervenable = None` means every node except the reward.
    pub fn from_parts(
        names: Vec<String>,
        domains: Vec<usize>,
        directed: &[(NodeId, NodeId)],
        bidirected: &[(NodeId, NodeId)],
        reward: NodeId,
        intervenable: Option<Vec<NodeId>>,
    ) -> Result<Self, GraphError> {
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(GraphError::DuplicateNode(name.clone()));
            }
        }
        if domains.len() != n {
            return Err(GraphError::KeepSetInvalid(format!(
                "{} domain sizes for {} nodes",
                domains.len(),
                n
            )));
        }
        for (name, &size) in names.iter().zip(&domains) {
            if !(2..=255).contains(&size) {
                return Err(GraphError::InvalidDomain {
                    name: name.clone(),
                    size,
                });
            }
        }
        let check = |v: NodeId| -> Result<(), GraphError> {
            if v.0 < n {
                Ok(())
            } else {
                Err(GraphError::UnknownNode(v.to_string()))
            }
        };
        check(reward)?;

        let mut parents = vec![BTreeSet::new(); n];
        let mut children = vec![BTreeSet::new(); n];
        let mut spouses = vec![BTreeSet::new(); n];
        for &(a, b) in directed {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop(names[a.0].clone()));
            }
            parents[b.0].insert(a);
            children[a.0].insert(b);
        }
        for &(a, b) in bidirected {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop(names[a.0].clone()));
            }
            spouses[a.0].insert(b);
            spouses[b.0].insert(a);
        }

        let intervenable: Vec<NodeId> = match intervenable {
            Some(list) => {
                let mut set = BTreeSet::new();
                for v in list {
                    check(v)?;
                    if v == reward {
                        return Err(GraphError::RewardIntervenable(names[v.0].clone()));
                    }
                    set.insert(v);
                }
                set.into_iter().collect()
            }
            None => (0..n).map(NodeId).filter(|&v| v != reward).collect(),
        };

        let to_vec = |sets: Vec<BTreeSet<NodeId>>| -> Vec<Vec<NodeId>> {
            sets.into_iter().map(|s| s.into_iter().collect()).collect()
        };
        let mut g = Admg {
            names,
            domains,
            parents: to_vec(parents),
            children: to_vec(children),
            spouses: to_vec(spouses),
            reward,
            intervenable,
            topo: Vec::new(),
        };
        g.topo = g.compute_topological_order()?;
        Ok(g)
    }

    fn compute_topological_order(&self) -> Result<Vec<NodeId>, GraphError> {
        let n = self.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<NodeId> =
            (0..n).map(NodeId).filter(|v| indegree[v.0] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &self.children[v.0] {
                indegree[c.0] -= 1;
                if indegree[c.0] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
            return Err(GraphError::DirectedCycle(self.names[stuck].clone()));
        }
        Ok(order)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).map(NodeId)
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Result<NodeId, GraphError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(NodeId)
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    pub fn domain(&self, v: NodeId) -> usize {
        self.domains[v.0]
    }

    pub fn domains(&self) -> &[usize] {
        &self.domains
    }

    pub fn is_binary(&self) -> bool {
        self.domains.iter().all(|&d| d == 2)
    }

    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v.0]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    /// Nodes joined to `v` by a bidirected edge.
    pub fn spouses(&self, v: NodeId) -> &[NodeId] {
        &self.spouses[v.0]
    }

    pub fn reward(&self) -> NodeId {
        self.reward
    }

    pub fn intervenable(&self) -> &[NodeId] {
        &self.intervenable
    }

    pub fn is_intervenable(&self, v: NodeId) -> bool {
        self.intervenable.binary_search(&v).is_ok()
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo
    }

    pub fn directed_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes()
            .flat_map(|a| self.children[a.0].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Bidirected edges as `(a, b)` with `a < b`.
    pub fn bidirected_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes()
            .flat_map(|a| {
                self.spouses[a.0]
                    .iter()
                    .filter(move |&&b| a < b)
                    .map(move |&b| (a, b))
            })
            .collect()
    }

    pub fn has_bidirected_edges(&self) -> bool {
        self.spouses.iter().any(|s| !s.is_empty())
    }

    pub(crate) fn require_intervenable(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 >= self.len() {
            return Err(GraphError::UnknownNode(v.to_string()));
        }
        if !self.is_intervenable(v) {
            return Err(GraphError::NotIntervenable(self.names[v.0].clone()));
        }
        Ok(())
    }

    /// Formats a node set with names in alphabetical order.
    pub fn format_set(&self, set: &NodeSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|&v| self.name(v)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(", "))
    }
}

/// Name-based builder for [`Admg`].
///
/// ```
/// use causal_bandits::admg::AdmgBuilder;
///
/// let g = AdmgBuilder::new()
///     .nodes(["X", "Z", "Y"])
///     .directed("Z", "X")
///     .directed("Z", "Y")
///     .directed("X", "Y")
///     .reward("Y")
///     .build()
///     .unwrap();
/// assert_eq!(g.intervenable().len(), 2);
/// ```
#[derive(Debug, Clone, Default)]
pub struct AdmgBuilder {
    names: Vec<String>,
    domains: Vec<usize>,
    directed: Vec<(String, String)>,
    bidirected: Vec<(String, String)>,
    reward: Option<String>,
    intervenable: Option<Vec<String>>,
}

impl AdmgBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: impl Into<String>) -> Self {
        self.names.push(name.into());
        self.domains.push(2);
        self
    }

    pub fn node_with_domain(mut self, name: impl Into<String>, size: usize) -> Self {
        self.names.push(name.into());
        self.domains.push(size);
        self
    }

    pub fn nodes<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for name in names {
            self = self.node(name);
        }
        self
    }

    pub fn directed(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.directed.push((from.into(), to.into()));
        self
    }

    pub fn bidirected(mut self, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.bidirected.push((a.into(), b.into()));
        self
    }

    pub fn reward(mut self, name: impl Into<String>) -> Self {
        self.reward = Some(name.into());
        self
    }

    pub fn intervenable<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.intervenable = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn build(self) -> Result<Admg, GraphError> {
        let index: HashMap<&str, NodeId> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), NodeId(i)))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
        };
        let pairs = |edges: &[(String, String)]| -> Result<Vec<(NodeId, NodeId)>, GraphError> {
            edges
                .iter()
                .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
                .collect()
        };
        let directed = pairs(&self.directed)?;
        let bidirected = pairs(&self.bidirected)?;
        let reward_name = self
            .reward
            .as_deref()
            .ok_or_else(|| GraphError::UnknownNode("<reward not set>".to_string()))?;
        let reward = lookup(reward_name)?;
        let intervenable = match &self.intervenable {
            Some(list) => Some(
                list.iter()
                    .map(|n| lookup(n))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Admg::from_parts(
            self.names.clone(),
            self.domains.clone(),
            &directed,
            &bidirected,
            reward,
            intervenable,
        )
    }
}
