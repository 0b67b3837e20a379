//! Decomposition of closed 2D contours into parts.
//!
//! The pipeline turns a contour into a visibility graph restricted to a
//! circular neighborhood, diffuses it two steps, and peels off dominant sets
//! that must be runs of consecutive boundary points. How many of those runs
//! are kept is decided by comparing their cohesiveness with clusters found in
//! degree-preserving random rewirings of the same graph.
//!
//! ```text
//! load -> resample -> visibility -> restrict -> diffuse
//!      -> extract -> threshold -> (prune) -> metrics
//! ```

pub mod contour;
pub mod diffusion;
pub mod dominant_sets;
pub mod geometry;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod postprocess;
pub mod randomization;
pub mod svg;
pub mod visibility;

pub use contour::{load_contour, resample_uniform, Contour, ContourError, ContourFormat};
pub use diffusion::{diffuse, DiffusionMatrix};
pub use dominant_sets::{
    extract_all, replicator_run, CircularRun, Cluster, Decomposition, ParticipationVector,
    ReplicatorOptions, Weights,
};
pub use geometry::Point;
pub use matrix::SquareMatrix;
pub use metrics::{ExternalPairs, MetricsReport};
pub use pipeline::{analyze_contour, run_pipeline, PipelineConfig, PipelineError, ShapeRecord};
pub use randomization::{NullEnsembleConfig, ThresholdReport};
pub use visibility::{build_visibility_matrix, VisibilityMatrix};
