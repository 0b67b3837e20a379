//! End-to-end batch driver: one structured record (and optional SVG and
//! matrix dumps) per input contour.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{self, Contour, ContourError, ContourFormat};
use crate::diffusion::{self, DiffusionMatrix};
use crate::dominant_sets::{self, Cluster, Decomposition, ReplicatorOptions};
use crate::matrix::SquareMatrix;
use crate::metrics::{self, ExternalPairs, MetricsError, MetricsReport};
use crate::postprocess;
use crate::randomization::{self, NullEnsembleConfig, RandomizationError, ThresholdReport};
use crate::svg;
use crate::visibility::{self, RestrictedVisibility, VisibilityError, VisibilityMatrix};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Visibility(#[from] VisibilityError),
    #[error(transparent)]
    Randomization(#[from] RandomizationError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("record serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Per-shape analysis knobs; echoed into every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub sample_count: usize,
    /// Fixed neighborhood radius; estimated from the visibility profile when
    /// absent.
    pub radius: Option<usize>,
    pub std_multiplier: f64,
    pub num_random_graphs: usize,
    pub swap_factor: usize,
    pub rng_seed: u64,
    pub postprocess: bool,
    /// Adds one unit per directly visible pair to the diffusion weights.
    pub add_direct_edges: bool,
    pub external_pairs: ExternalPairs,
    pub replicator: ReplicatorOptions,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            sample_count: 200,
            radius: None,
            std_multiplier: 2.0,
            num_random_graphs: 250,
            swap_factor: 10,
            rng_seed: 0,
            postprocess: false,
            add_direct_edges: false,
            external_pairs: ExternalPairs::IncludeUnassigned,
            replicator: ReplicatorOptions::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn null_ensemble(&self) -> NullEnsembleConfig {
        NullEnsembleConfig {
            num_graphs: self.num_random_graphs,
            std_multiplier: self.std_multiplier,
            swap_factor: self.swap_factor,
            rng_seed: self.rng_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Records,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn records(self) -> bool {
        matches!(self, OutputFormat::Records | OutputFormat::Both)
    }

    pub fn svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub dump_matrices: bool,
    /// Keep the raw null cohesiveness samples in the record.
    pub verbose_samples: bool,
    pub analysis: AnalysisConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusSource {
    Estimated,
    Override,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusChoice {
    pub value: usize,
    pub source: RadiusSource,
}

/// Every intermediate product of one shape.
#[derive(Debug, Clone)]
pub struct ShapeAnalysis {
    pub contour: Contour,
    pub visibility: VisibilityMatrix,
    pub profile: visibility::OffDiagonalProfile,
    pub radius: RadiusChoice,
    pub restricted: RestrictedVisibility,
    pub diffusion: DiffusionMatrix,
    /// All extracted clusters before thresholding.
    pub extracted: Decomposition,
    pub threshold: ThresholdReport,
    /// Clusters above the threshold, after optional pruning.
    pub decomposition: Decomposition,
    pub pruned_cluster: Option<usize>,
    pub metrics: MetricsReport,
}

/// Runs every stage on an already loaded contour.
pub fn analyze_contour(c: &Contour, cfg: &AnalysisConfig) -> Result<ShapeAnalysis, PipelineError> {
    let contour = contour::resample_uniform(c, cfg.sample_count)?;
    let n = contour.len();
    let vis = visibility::build_visibility_matrix(&contour);
    let profile = visibility::off_diagonal_profile(&vis);
    let radius = match cfg.radius {
        Some(value) => RadiusChoice {
            value,
            source: RadiusSource::Override,
        },
        None => RadiusChoice {
            value: visibility::estimate_radius(&profile, n),
            source: RadiusSource::Estimated,
        },
    };
    let mask = visibility::neighborhood_mask(n, radius.value)?;
    let restricted = visibility::restrict(&vis, &mask)?;
    let diffusion = diffusion::diffuse_with(&restricted, cfg.add_direct_edges);

    let extracted = dominant_sets::extract_all_with(&diffusion, &cfg.replicator);
    let threshold = randomization::null_cohesiveness_samples_with(
        &diffusion,
        &cfg.null_ensemble(),
        &cfg.replicator,
    )?;
    let mut decomposition = randomization::select_clusters(&extracted, &threshold);
    let pruned_cluster = if cfg.postprocess && decomposition.k() > 0 {
        postprocess::prune_weakest(&mut decomposition, &vis)
    } else {
        None
    };
    let metrics = metrics::metrics_report(&vis, &decomposition, cfg.external_pairs)?;
    Ok(ShapeAnalysis {
        contour,
        visibility: vis,
        profile,
        radius,
        restricted,
        diffusion,
        extracted,
        threshold,
        decomposition,
        pruned_cluster,
        metrics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostprocessRecord {
    /// Index (in the thresholded cluster list) of the dissolved cluster.
    pub removed_cluster: Option<usize>,
}

/// Serializable summary of one shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeRecord {
    pub input: String,
    pub config: AnalysisConfig,
    pub point_count: usize,
    pub radius: RadiusChoice,
    pub extracted_count: usize,
    pub threshold: ThresholdReport,
    pub k: usize,
    pub clusters: Vec<Cluster>,
    pub unassigned: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postprocess: Option<PostprocessRecord>,
    pub metrics: MetricsReport,
}

impl ShapeRecord {
    pub fn new(input: &str, cfg: &AnalysisConfig, a: &ShapeAnalysis, verbose: bool) -> Self {
        Self {
            input: input.to_string(),
            config: cfg.clone(),
            point_count: a.contour.len(),
            radius: a.radius,
            extracted_count: a.extracted.k(),
            threshold: if verbose {
                a.threshold.clone()
            } else {
                a.threshold.summary()
            },
            k: a.decomposition.k(),
            clusters: a.decomposition.clusters.clone(),
            unassigned: a.decomposition.unassigned.clone(),
            postprocess: cfg.postprocess.then_some(PostprocessRecord {
                removed_cluster: a.pruned_cluster,
            }),
            metrics: a.metrics.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Files written for one shape.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShapeArtifacts {
    pub record: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub matrices: Vec<PathBuf>,
}

#[derive(Debug)]
pub struct ShapeOutcome {
    pub input: PathBuf,
    pub result: Result<(ShapeRecord, ShapeArtifacts), PipelineError>,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "shape".into())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let mut f = BufWriter::new(File::create(path).map_err(io_err(path))?);
    f.write_all(bytes).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}

fn dump<T: Copy + Default + std::fmt::Display>(
    path: PathBuf,
    m: &SquareMatrix<T>,
    out: &mut Vec<PathBuf>,
) -> Result<(), PipelineError> {
    write_file(&path, m.to_text().as_bytes())?;
    out.push(path);
    Ok(())
}

/// Loads, analyzes and writes one input file.
pub fn process_file(
    input: &Path,
    cfg: &PipelineConfig,
) -> Result<(ShapeRecord, ShapeArtifacts), PipelineError> {
    let file = File::open(input).map_err(io_err(input))?;
    let c = contour::load_contour(
        std::io::BufReader::new(file),
        ContourFormat::from_path(input),
    )?;
    let analysis = analyze_contour(&c, &cfg.analysis)?;
    let record = ShapeRecord::new(
        &input.to_string_lossy(),
        &cfg.analysis,
        &analysis,
        cfg.verbose_samples,
    );

    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let base = stem(input);
    let mut artifacts = ShapeArtifacts::default();
    if cfg.format.records() {
        let path = cfg.out_dir.join(format!("{base}.json"));
        write_file(&path, record.to_json()?.as_bytes())?;
        artifacts.record = Some(path);
    }
    if cfg.format.svg() {
        let path = cfg.out_dir.join(format!("{base}.svg"));
        svg::render_svg(&analysis.contour, &analysis.decomposition, &path)
            .map_err(io_err(&path))?;
        artifacts.svg = Some(path);
    }
    if cfg.dump_matrices {
        let dir = &cfg.out_dir;
        dump(
            dir.join(format!("{base}.A.txt")),
            analysis.visibility.matrix(),
            &mut artifacts.matrices,
        )?;
        dump(
            dir.join(format!("{base}.An.txt")),
            analysis.restricted.matrix(),
            &mut artifacts.matrices,
        )?;
        dump(
            dir.join(format!("{base}.D.txt")),
            analysis.diffusion.matrix(),
            &mut artifacts.matrices,
        )?;
    }
    Ok((record, artifacts))
}

/// Processes every input independently; one failure does not stop the rest.
pub fn run_pipeline(cfg: &PipelineConfig) -> Vec<ShapeOutcome> {
    cfg.inputs
        .iter()
        .map(|input| ShapeOutcome {
            input: input.clone(),
            result: process_file(input, cfg),
        })
        .collect()
}
