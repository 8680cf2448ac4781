//! Pooled interventional and observational estimate of an arm's mean.
//!
//! The observational rounds are dealt into one part per node. Part `j`
//! estimates `P(V_j | Z_j)` and is bucketed by the realization of `Z_j`.
//! For a target arm, every bucket the truncated factorization reads is cut
//! into `S` slices; slice `s` of every bucket yields one plug-in estimate
//! `Y^s`, and the `S` estimates are pooled with the arm's own pulls.

use crate::admg::{Admg, NodeId, Value};
use crate::error::EstimatorError;
use crate::seed::mix64;

use super::factor::{factorization_layouts, KeyLayout, Truncation};
use super::log::ObsLog;

/// Deterministic, seeded partition of the observational rounds into one
/// part per node, each part bucketed by its node's conditioning set.
///
/// Records are ordered by a seeded hash of their round index and dealt
/// round-robin, so part sizes differ by at most one. The index is rebuilt
/// from scratch whenever new observational rounds arrive.
#[derive(Debug, Clone)]
pub struct ObservationalIndex {
    seed: u64,
    observed: usize,
    domains: Vec<usize>,
    layouts: Vec<KeyLayout>,
    parts: Vec<Vec<usize>>,
    buckets: Vec<Vec<Vec<usize>>>,
}

impl ObservationalIndex {
    pub fn build(log: &ObsLog, g: &Admg, seed: u64) -> Self {
        let layouts = factorization_layouts(g);
        let mut order: Vec<(u64, usize)> = log
            .observational()
            .iter()
            .map(|&k| (mix64(seed ^ mix64(log.record(k).round)), k))
            .collect();
        order.sort_unstable();
        let mut parts = vec![Vec::new(); g.len()];
        for (n, &(_, k)) in order.iter().enumerate() {
            parts[n % g.len()].push(k);
        }
        let buckets = layouts
            .iter()
            .zip(&parts)
            .map(|(layout, part)| {
                let mut b = vec![Vec::new(); layout.key_count];
                for &k in part {
                    b[layout.key(&log.record(k).values, None)].push(k);
                }
                b
            })
            .collect();
        ObservationalIndex {
            seed,
            observed: order.len(),
            domains: g.domains().to_vec(),
            layouts,
            parts,
            buckets,
        }
    }

    /// Rebuilds the index if `log` holds observational rounds it has not seen.
    pub fn refresh(&mut self, log: &ObsLog, g: &Admg) -> bool {
        if log.count(0) == self.observed {
            return false;
        }
        *self = Self::build(log, g, self.seed);
        true
    }

    /// Number of observational rounds indexed.
    pub fn observed(&self) -> usize {
        self.observed
    }

    /// Record indices of part `j`, in hash order.
    pub fn part(&self, j: NodeId) -> &[usize] {
        &self.parts[j.0]
    }

    /// Conditioning set of node `j`.
    pub fn conditioning(&self, j: NodeId) -> &[NodeId] {
        &self.layouts[j.0].parents
    }

    /// Records of part `j` whose conditioning set takes the values
    /// `z` (listed in the order of [`ObservationalIndex::conditioning`]).
    pub fn bucket(&self, j: NodeId, z: &[Value]) -> &[usize] {
        &self.buckets[j.0][self.layouts[j.0].key_of(z)]
    }
}

/// The slice structure of one target arm `do(X_i = x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataIndex {
    target: NodeId,
    value: Value,
    in_component: Vec<bool>,
    /// Keys of every node's buckets that the truncated factorization reads.
    needed: Vec<Vec<usize>>,
    /// Smallest needed bucket per node.
    node_minima: Vec<usize>,
    slices: usize,
    identifiable: bool,
}

impl StrataIndex {
    pub fn target(&self) -> (NodeId, Value) {
        (self.target, self.value)
    }

    /// Number of slices `S`; zero means no observational contribution.
    pub fn slices(&self) -> usize {
        self.slices
    }

    /// Smallest bucket node `j` needs. For members of the target's
    /// c-component this ranges over every value of the target; for the rest
    /// the target is read at `x`.
    pub fn node_minimum(&self, j: NodeId) -> usize {
        self.node_minima[j.0]
    }

    /// Whether the target passed the identifiability check. Unidentifiable
    /// targets always have zero slices.
    pub fn is_identifiable(&self) -> bool {
        self.identifiable
    }
}

/// Slice structure of arm `do(X_i = x)` over an existing index.
pub fn build_strata(
    index: &ObservationalIndex,
    g: &Admg,
    i: NodeId,
    x: Value,
) -> Result<StrataIndex, EstimatorError> {
    let identifiable = g.identifiable_sufficient(i)?;
    let component = g.c_component_of(i);
    let in_component: Vec<bool> = g.nodes().map(|v| component.contains(&v)).collect();
    let mut needed = Vec::with_capacity(g.len());
    let mut node_minima = Vec::with_capacity(g.len());
    for j in g.nodes() {
        let layout = &index.layouts[j.0];
        let mut fixed = vec![(g.reward(), 1)];
        if !in_component[j.0] {
            fixed.push((i, x));
        }
        let keys = layout.keys_matching(g.domains(), &fixed);
        let min = keys
            .iter()
            .map(|&k| index.buckets[j.0][k].len())
            .min()
            .unwrap_or(0);
        needed.push(keys);
        node_minima.push(min);
    }
    let slices = if identifiable {
        node_minima.iter().copied().min().unwrap_or(0)
    } else {
        0
    };
    Ok(StrataIndex {
        target: i,
        value: x,
        in_component,
        needed,
        node_minima,
        slices,
        identifiable,
    })
}

/// Per-slice value counts of every needed bucket.
///
/// Within a bucket, the record of rank `r` (in hash order) belongs to slice
/// `r mod S`, so every slice of a needed bucket is non-empty.
#[derive(Debug, Clone)]
pub struct SliceTables {
    slices: usize,
    /// `counts[j][key]` holds `S * |dom(V_j)|` counts, slice-major.
    counts: Vec<Vec<Vec<u32>>>,
    domains: Vec<usize>,
}

impl SliceTables {
    pub fn build(index: &ObservationalIndex, strata: &StrataIndex, log: &ObsLog) -> Self {
        let s_count = strata.slices;
        let domains = index.domains.clone();
        let mut counts: Vec<Vec<Vec<u32>>> = index
            .buckets
            .iter()
            .map(|b| vec![Vec::new(); b.len()])
            .collect();
        if s_count > 0 {
            for (j, keys) in strata.needed.iter().enumerate() {
                let dom = domains[j];
                for &key in keys {
                    let mut c = vec![0u32; s_count * dom];
                    for (rank, &k) in index.buckets[j][key].iter().enumerate() {
                        let v = usize::from(log.record(k).values[j]);
                        c[(rank % s_count) * dom + v] += 1;
                    }
                    counts[j][key] = c;
                }
            }
        }
        SliceTables {
            slices: s_count,
            counts,
            domains,
        }
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    fn prob(&self, s: usize, j: usize, key: usize, v: Value) -> f64 {
        let dom = self.domains[j];
        let row = &self.counts[j][key][s * dom..(s + 1) * dom];
        let total: u32 = row.iter().sum();
        debug_assert!(total > 0, "slice {s} of bucket {key} of node {j} is empty");
        f64::from(row[usize::from(v)]) / f64::from(total)
    }
}

/// The plug-in estimate `Y^s` of the target arm's mean from slice `s`.
pub fn factorized_stratum_estimate(
    g: &Admg,
    index: &ObservationalIndex,
    strata: &StrataIndex,
    tables: &SliceTables,
    s: usize,
) -> Result<f64, EstimatorError> {
    if s >= strata.slices || s >= tables.slices {
        return Err(EstimatorError::EmptySlice {
            slice: s,
            slices: strata.slices.min(tables.slices),
        });
    }
    Truncation::check_size(g)?;
    let t = Truncation {
        graph: g,
        layouts: &index.layouts,
        in_component: &strata.in_component,
        target: strata.target,
        value: strata.value,
    };
    Ok(t.sum(|j, key, v| tables.prob(s, j, key, v)))
}

/// Every slice estimate `Y^1, ..., Y^S` of the target arm.
pub fn slice_estimates(
    g: &Admg,
    index: &ObservationalIndex,
    strata: &StrataIndex,
    log: &ObsLog,
) -> Result<Vec<f64>, EstimatorError> {
    if strata.slices == 0 {
        return Ok(Vec::new());
    }
    let tables = SliceTables::build(index, strata, log);
    (0..strata.slices)
        .map(|s| factorized_stratum_estimate(g, index, strata, &tables, s))
        .collect()
}

/// Pools the arm's own pulls with its slice estimates:
/// `(successes + sum of Y^s) / (pulls + S)`.
pub fn estimate_mu_ix(
    log: &ObsLog,
    arm: usize,
    slice_estimates: &[f64],
) -> Result<f64, EstimatorError> {
    let n = log.count(arm) + slice_estimates.len();
    if n == 0 {
        return Err(EstimatorError::NoEffectiveSamples);
    }
    let total = log.successes(arm) as f64 + slice_estimates.iter().sum::<f64>();
    Ok(total / n as f64)
}

/// Upper confidence bound `mu + sqrt(2 ln t / n)`.
pub fn ucb_index(mu: f64, n: usize, t: f64) -> Result<f64, EstimatorError> {
    if n == 0 {
        return Err(EstimatorError::ZeroCount);
    }
    if t.is_nan() || t < 1.0 {
        return Err(EstimatorError::ZeroRound);
    }
    Ok(mu + (2.0 * t.ln() / n as f64).sqrt())
}
