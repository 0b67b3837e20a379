//! Clustering quality on the unrestricted visibility graph: density,
//! internal/external density, modularity and a contour Rand index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dominant_sets::Decomposition;
use crate::visibility::VisibilityMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("metric needs at least 2 nodes, found {0}")]
    TooFewNodes(usize),
    #[error("modularity is undefined on an edgeless graph")]
    Edgeless,
    #[error("segmentations label {0} and {1} points")]
    LengthMismatch(usize, usize),
    #[error("decomposition covers {decomposition} nodes but the graph has {graph}")]
    SizeMismatch { decomposition: usize, graph: usize },
}

/// Which ordered pairs count in the external-density numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalPairs {
    /// Every edge not inside a single cluster, unassigned endpoints included.
    #[default]
    IncludeUnassigned,
    /// Only edges joining two different clusters.
    ClustersOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub graph_density: f64,
    pub internal_density: f64,
    pub per_cluster_internal: Vec<f64>,
    pub external_density: f64,
    /// `None` when the graph has no edges.
    pub modularity: Option<f64>,
}

/// `|E| / C(N, 2)`.
pub fn graph_density(a: &VisibilityMatrix) -> Result<f64, MetricsError> {
    let n = a.dim();
    if n < 2 {
        return Err(MetricsError::TooFewNodes(n));
    }
    Ok(a.edge_count() as f64 / (n * (n - 1) / 2) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySplit {
    pub per_cluster: Vec<f64>,
    pub internal: f64,
    pub external: f64,
}

fn check_size(a: &VisibilityMatrix, d: &Decomposition) -> Result<(), MetricsError> {
    if a.dim() != d.n {
        return Err(MetricsError::SizeMismatch {
            decomposition: d.n,
            graph: a.dim(),
        });
    }
    Ok(())
}

/// Per-cluster internal density on ordered pairs, their unweighted mean, and
/// the external density over the ordered pairs not inside one cluster.
///
/// Clusters below two members have density 0; with no clusters the mean is
/// 0; a zero external denominator gives 0.
pub fn internal_external_density(
    a: &VisibilityMatrix,
    d: &Decomposition,
    external: ExternalPairs,
) -> Result<DensitySplit, MetricsError> {
    check_size(a, d)?;
    let n = a.dim();
    let labels = d.labels();
    let k = d.k();
    let mut inside = vec![0usize; k + 1];
    let mut between = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if !a.visible(i, j) {
                continue;
            }
            let (li, lj) = (labels[i], labels[j]);
            if li == lj && li != 0 {
                inside[li] += 1;
            } else if external == ExternalPairs::IncludeUnassigned || (li != 0 && lj != 0) {
                between += 1;
            }
        }
    }
    let per_cluster: Vec<f64> = d
        .clusters
        .iter()
        .enumerate()
        .map(|(c, cl)| {
            let size = cl.len();
            if size < 2 {
                0.0
            } else {
                (2 * inside[c + 1]) as f64 / (size * (size - 1)) as f64
            }
        })
        .collect();
    let internal = if k == 0 {
        0.0
    } else {
        per_cluster.iter().sum::<f64>() / k as f64
    };
    let within_pairs: usize = d.clusters.iter().map(|c| c.len() * (c.len() - 1)).sum();
    let denom = n * (n - 1) - within_pairs;
    let external = if denom == 0 {
        0.0
    } else {
        (2 * between) as f64 / denom as f64
    };
    Ok(DensitySplit {
        per_cluster,
        internal,
        external,
    })
}

/// `Q = sum_i (e_ii - a_i^2)` with `e_ii` the fraction of edges inside
/// cluster `i` and `a_i` the fraction of edge endpoints falling in it.
pub fn modularity(a: &VisibilityMatrix, d: &Decomposition) -> Result<f64, MetricsError> {
    check_size(a, d)?;
    let m = a.edge_count();
    if m == 0 {
        return Err(MetricsError::Edgeless);
    }
    let labels = d.labels();
    let k = d.k();
    let mut inside = vec![0usize; k + 1];
    let mut endpoints = vec![0usize; k + 1];
    for (i, &li) in labels.iter().enumerate() {
        endpoints[li] += a.degree(i);
        for (j, &lj) in labels.iter().enumerate().skip(i + 1) {
            if lj == li && a.visible(i, j) {
                inside[li] += 1;
            }
        }
    }
    let m = m as f64;
    Ok((1..=k)
        .map(|c| {
            let e = inside[c] as f64 / m;
            let frac = endpoints[c] as f64 / (2.0 * m);
            e - frac * frac
        })
        .sum())
}

/// Labels with every `0` (unassigned) replaced by a fresh singleton label.
pub fn singleton_unassigned(labels: &[usize]) -> Vec<usize> {
    let mut next = labels.iter().copied().max().unwrap_or(0) + 1;
    labels
        .iter()
        .map(|&l| {
            if l == 0 {
                next += 1;
                next - 1
            } else {
                l
            }
        })
        .collect()
}

/// Fraction of unordered point pairs on which the two labelings agree.
/// Label `0` marks unassigned points, each its own segment.
pub fn rand_index(s1: &[usize], s2: &[usize]) -> Result<f64, MetricsError> {
    if s1.len() != s2.len() {
        return Err(MetricsError::LengthMismatch(s1.len(), s2.len()));
    }
    let n = s1.len();
    if n < 2 {
        return Err(MetricsError::TooFewNodes(n));
    }
    let s1 = singleton_unassigned(s1);
    let s2 = singleton_unassigned(s2);
    // Contingency counts: pairs together in both, in S1, in S2.
    let mut joint = std::collections::BTreeMap::<(usize, usize), usize>::new();
    let mut rows = std::collections::BTreeMap::<usize, usize>::new();
    let mut cols = std::collections::BTreeMap::<usize, usize>::new();
    for (&a, &b) in s1.iter().zip(&s2) {
        *joint.entry((a, b)).or_default() += 1;
        *rows.entry(a).or_default() += 1;
        *cols.entry(b).or_default() += 1;
    }
    let pairs = |c: usize| c * c.saturating_sub(1) / 2;
    let both: usize = joint.values().map(|&c| pairs(c)).sum();
    let in1: usize = rows.values().map(|&c| pairs(c)).sum();
    let in2: usize = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n);
    let agree = total + 2 * both - in1 - in2;
    Ok(agree as f64 / total as f64)
}

pub fn metrics_report(
    a: &VisibilityMatrix,
    d: &Decomposition,
    external: ExternalPairs,
) -> Result<MetricsReport, MetricsError> {
    let density = internal_external_density(a, d, external)?;
    let modularity = match modularity(a, d) {
        Ok(q) => Some(q),
        Err(MetricsError::Edgeless) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricsReport {
        graph_density: graph_density(a)?,
        internal_density: density.internal,
        per_cluster_internal: density.per_cluster,
        external_density: density.external,
        modularity,
    })
}
