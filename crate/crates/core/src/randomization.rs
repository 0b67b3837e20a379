//! Cohesiveness threshold from an ensemble of degree-preserving rewirings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusion::DiffusionMatrix;
use crate::dominant_sets::{extract_all_with, Decomposition, ReplicatorOptions};
use crate::matrix::SquareMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum RandomizationError {
    #[error("invalid null ensemble configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullEnsembleConfig {
    pub num_graphs: usize,
    pub std_multiplier: f64,
    /// Swap attempts per edge.
    pub swap_factor: usize,
    pub rng_seed: u64,
}

impl Default for NullEnsembleConfig {
    fn default() -> Self {
        Self {
            num_graphs: 250,
            std_multiplier: 2.0,
            swap_factor: 10,
            rng_seed: 0,
        }
    }
}

impl NullEnsembleConfig {
    pub fn validate(&self) -> Result<(), RandomizationError> {
        if self.num_graphs < 1 {
            return Err(RandomizationError::InvalidConfig("num_graphs must be >= 1"));
        }
        if !(self.std_multiplier > 0.0 && self.std_multiplier.is_finite()) {
            return Err(RandomizationError::InvalidConfig(
                "std_multiplier must be positive",
            ));
        }
        if self.swap_factor < 1 {
            return Err(RandomizationError::InvalidConfig(
                "swap_factor must be >= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rewired {
    pub matrix: DiffusionMatrix,
    pub swaps: usize,
    /// Fewer than two edges: nothing could be rewired.
    pub degenerate: bool,
}

/// Maslov-Sneppen double-edge swaps. Edges `(a,b)` and `(c,d)` become
/// `(a,d)` and `(c,b)` when all four endpoints differ and neither new edge
/// exists; each edge keeps its weight.
pub fn rewire_preserving_degrees(
    d: &DiffusionMatrix,
    swap_factor: usize,
    rng_seed: u64,
) -> Rewired {
    rewire_with_rng(d, swap_factor, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

fn rewire_with_rng(d: &DiffusionMatrix, swap_factor: usize, rng: &mut ChaCha8Rng) -> Rewired {
    let n = d.dim();
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = d.get(i, j);
            if w > 0 {
                edges.push((i, j, w));
            }
        }
    }
    if edges.len() < 2 {
        log::warn!("rewiring skipped: graph has {} edge(s)", edges.len());
        return Rewired {
            matrix: d.clone(),
            swaps: 0,
            degenerate: true,
        };
    }
    let mut adj = vec![false; n * n];
    for &(a, b, _) in &edges {
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    }
    let attempts = swap_factor * edges.len();
    let mut swaps = 0;
    for _ in 0..attempts {
        let e1 = rng.random_range(0..edges.len());
        let mut e2 = rng.random_range(0..edges.len() - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b, w1) = edges[e1];
        let (mut c, mut dd, w2) = edges[e2];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut dd);
        }
        if a == c || a == dd || b == c || b == dd {
            continue;
        }
        if adj[a * n + dd] || adj[c * n + b] {
            continue;
        }
        adj[a * n + b] = false;
        adj[b * n + a] = false;
        adj[c * n + dd] = false;
        adj[dd * n + c] = false;
        adj[a * n + dd] = true;
        adj[dd * n + a] = true;
        adj[c * n + b] = true;
        adj[b * n + c] = true;
        edges[e1] = (a.min(dd), a.max(dd), w1);
        edges[e2] = (c.min(b), c.max(b), w2);
        swaps += 1;
    }
    let mut m = SquareMatrix::<u32>::zeros(n);
    for &(a, b, w) in &edges {
        m.set(a, b, w);
        m.set(b, a, w);
    }
    Rewired {
        matrix: DiffusionMatrix::from_weights(m),
        swaps,
        degenerate: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Cohesiveness of every cluster from every null graph, sorted ascending.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
    pub sample_count: usize,
    pub mean: f64,
    pub std: f64,
    pub threshold: f64,
    pub std_multiplier: f64,
    /// Some null graph could not be rewired.
    pub rewire_warning: bool,
}

impl ThresholdReport {
    /// `mean + multiplier * std` with the sample (n - 1) standard deviation;
    /// `std = 0` below two samples and everything is zero with none.
    pub fn from_samples(mut samples: Vec<f64>, std_multiplier: f64) -> Self {
        samples.sort_by(f64::total_cmp);
        let count = samples.len();
        let mean = if count == 0 {
            0.0
        } else {
            samples.iter().sum::<f64>() / count as f64
        };
        let std = if count < 2 {
            0.0
        } else {
            (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        };
        Self {
            samples: Some(samples),
            sample_count: count,
            mean,
            std,
            threshold: mean + std_multiplier * std,
            std_multiplier,
            rewire_warning: false,
        }
    }

    /// Drops the raw samples (for compact records).
    pub fn summary(&self) -> Self {
        Self {
            samples: None,
            ..self.clone()
        }
    }
}

/// Rewires `d` `num_graphs` times (graph `i` uses stream `i` of the seeded
/// generator), extracts all dominant sets of each null graph and pools the
/// cluster cohesiveness values.
pub fn null_cohesiveness_samples(
    d: &DiffusionMatrix,
    cfg: &NullEnsembleConfig,
) -> Result<ThresholdReport, RandomizationError> {
    null_cohesiveness_samples_with(d, cfg, &ReplicatorOptions::default())
}

pub fn null_cohesiveness_samples_with(
    d: &DiffusionMatrix,
    cfg: &NullEnsembleConfig,
    opts: &ReplicatorOptions,
) -> Result<ThresholdReport, RandomizationError> {
    cfg.validate()?;
    let per_graph: Vec<(Vec<f64>, bool)> = (0..cfg.num_graphs)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(i as u64);
            let rewired = rewire_with_rng(d, cfg.swap_factor, &mut rng);
            let dec = extract_all_with(&rewired.matrix, opts);
            (
                dec.clusters.iter().map(|c| c.cohesiveness).collect(),
                rewired.degenerate,
            )
        })
        .collect();
    let warning = per_graph.iter().any(|(_, w)| *w);
    let samples = per_graph.into_iter().flat_map(|(s, _)| s).collect();
    let mut report = ThresholdReport::from_samples(samples, cfg.std_multiplier);
    report.rewire_warning = warning;
    Ok(report)
}

/// Keeps clusters with cohesiveness strictly above the threshold.
pub fn select_clusters(d: &Decomposition, report: &ThresholdReport) -> Decomposition {
    let mut out = d.clone();
    let mut idx = 0;
    while idx < out.clusters.len() {
        if out.clusters[idx].cohesiveness > report.threshold {
            idx += 1;
        } else {
            out.dissolve(idx);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominant_sets::{extract_all, CircularRun, Cluster};

    fn cycle(n: usize) -> DiffusionMatrix {
        DiffusionMatrix::from_weights(SquareMatrix::from_fn(n, |i, j| {
            ((i + 1) % n == j || (j + 1) % n == i) as u32
        }))
    }

    fn degrees(d: &DiffusionMatrix) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..d.dim())
            .map(|i| d.matrix().row(i).iter().filter(|&&w| w > 0).count())
            .collect();
        deg.sort_unstable();
        deg
    }

    #[test]
    fn single_edge_is_unchanged() {
        let mut m = SquareMatrix::zeros(4);
        m.set(0, 1, 3);
        m.set(1, 0, 3);
        let d = DiffusionMatrix::from_weights(m);
        let r = rewire_preserving_degrees(&d, 10, 7);
        assert!(r.degenerate);
        assert_eq!(r.matrix, d);
    }

    #[test]
    fn cycle_keeps_degrees() {
        let d = cycle(6);
        for seed in 0..20 {
            let r = rewire_preserving_degrees(&d, 10, seed);
            assert_eq!(degrees(&r.matrix), vec![2; 6]);
            assert_eq!(r.matrix.edge_count(), 6);
            assert!(r.matrix.matrix().is_symmetric());
        }
    }

    #[test]
    fn rewiring_is_deterministic_and_moves_edges() {
        let d = cycle(30);
        let a = rewire_preserving_degrees(&d, 10, 42);
        let b = rewire_preserving_degrees(&d, 10, 42);
        assert_eq!(a, b);
        assert!(a.swaps > 0);
        assert_ne!(a.matrix, d);
    }

    #[test]
    fn report_arithmetic() {
        let r = ThresholdReport::from_samples(vec![2.0, 1.0], 2.0);
        assert_eq!(r.mean, 1.5);
        assert!((r.std - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.threshold - 2.914_213_562_373_095).abs() < 1e-12);
        assert_eq!(r.samples.as_deref(), Some(&[1.0, 2.0][..]));

        let one = ThresholdReport::from_samples(vec![3.0], 2.0);
        assert_eq!((one.std, one.threshold), (0.0, 3.0));
    }

    #[test]
    fn all_zero_matrix_gives_zero_threshold() {
        let d = DiffusionMatrix::from_weights(SquareMatrix::zeros(8));
        let cfg = NullEnsembleConfig {
            num_graphs: 5,
            ..Default::default()
        };
        let r = null_cohesiveness_samples(&d, &cfg).unwrap();
        assert_eq!(r.sample_count, 0);
        assert_eq!(r.threshold, 0.0);
        assert!(r.rewire_warning);
    }

    #[test]
    fn config_validation() {
        let d = cycle(6);
        for bad in [
            NullEnsembleConfig {
                num_graphs: 0,
                ..Default::default()
            },
            NullEnsembleConfig {
                std_multiplier: 0.0,
                ..Default::default()
            },
            NullEnsembleConfig {
                swap_factor: 0,
                ..Default::default()
            },
        ] {
            assert!(null_cohesiveness_samples(&d, &bad).is_err());
        }
    }

    fn decomposition(coh: &[f64]) -> Decomposition {
        let clusters = coh
            .iter()
            .enumerate()
            .map(|(k, &c)| Cluster {
                run: CircularRun {
                    start: 4 * k,
                    len: 4,
                },
                cohesiveness: c,
            })
            .collect();
        Decomposition {
            n: 4 * coh.len(),
            clusters,
            unassigned: Vec::new(),
        }
    }

    fn report_with_threshold(t: f64) -> ThresholdReport {
        ThresholdReport {
            threshold: t,
            ..ThresholdReport::from_samples(Vec::new(), 2.0)
        }
    }

    #[test]
    fn select_examples() {
        let d = decomposition(&[3.0, 2.5, 0.4]);
        let kept = select_clusters(&d, &report_with_threshold(1.0));
        assert_eq!(kept.k(), 2);
        assert_eq!(kept.unassigned, vec![8, 9, 10, 11]);
        assert_eq!(kept.clusters, d.clusters[..2]);

        assert_eq!(select_clusters(&d, &report_with_threshold(0.0)), d);

        let none = select_clusters(&d, &report_with_threshold(5.0));
        assert_eq!(none.k(), 0);
        assert_eq!(none.unassigned, (0..12).collect::<Vec<_>>());

        // Equality with the threshold is dropped.
        assert_eq!(select_clusters(&d, &report_with_threshold(2.5)).k(), 1);
    }

    #[test]
    fn clique_in_sparse_ring_beats_null() {
        // A weight-2 clique on 0..5 inside a 24-node weight-1 ring.
        let n = 24;
        let d = DiffusionMatrix::from_weights(SquareMatrix::from_fn(n, |i, j| {
            if i != j && i < 5 && j < 5 {
                2
            } else if (i + 1) % n == j || (j + 1) % n == i {
                1
            } else {
                0
            }
        }));
        let original = extract_all(&d);
        let cfg = NullEnsembleConfig {
            num_graphs: 50,
            rng_seed: 3,
            ..Default::default()
        };
        let report = null_cohesiveness_samples(&d, &cfg).unwrap();
        assert!((original.clusters[0].cohesiveness - 1.6).abs() < 1e-12);
        assert!(
            original.clusters[0].cohesiveness > report.threshold,
            "threshold {}",
            report.threshold
        );
    }
}
