use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use shapeparts::pipeline::{self, AnalysisConfig, ShapeRecord};
use shapeparts::{metrics, visibility, Contour, DiffusionMatrix, Point, SquareMatrix};

create_exception!(pyshapeparts, ShapePartsError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    ShapePartsError::new_err(e.to_string())
}

fn contour(points: Vec<(f64, f64)>) -> PyResult<Contour> {
    Contour::new(points.into_iter().map(|(x, y)| Point { x, y }).collect()).map_err(err)
}

fn coords(c: &Contour) -> Vec<(f64, f64)> {
    c.points().iter().map(|p| (p.x, p.y)).collect()
}

fn rows<T: Copy + Default>(m: &SquareMatrix<T>) -> Vec<Vec<T>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

/// Reads a CSV or JSON contour file; returns its canonical (counterclockwise)
/// points.
#[pyfunction]
fn load_contour(path: std::path::PathBuf) -> PyResult<Vec<(f64, f64)>> {
    let file = std::fs::File::open(&path).map_err(err)?;
    let c = shapeparts::load_contour(
        std::io::BufReader::new(file),
        shapeparts::ContourFormat::from_path(&path),
    )
    .map_err(err)?;
    Ok(coords(&c))
}

#[pyfunction]
fn resample(points: Vec<(f64, f64)>, count: usize) -> PyResult<Vec<(f64, f64)>> {
    let c = shapeparts::resample_uniform(&contour(points)?, count).map_err(err)?;
    Ok(coords(&c))
}

#[pyfunction]
fn visibility_matrix(points: Vec<(f64, f64)>) -> PyResult<Vec<Vec<u32>>> {
    let a = shapeparts::build_visibility_matrix(&contour(points)?);
    // u8 rows would come out as bytes objects.
    Ok(rows(&a.matrix().map(u32::from)))
}

/// Neighborhood radius chosen from the off-diagonal visibility profile.
#[pyfunction]
fn estimate_radius(points: Vec<(f64, f64)>) -> PyResult<usize> {
    let c = contour(points)?;
    let a = shapeparts::build_visibility_matrix(&c);
    Ok(visibility::estimate_radius(
        &visibility::off_diagonal_profile(&a),
        c.len(),
    ))
}

/// Restricted diffusion matrix for the given radius.
#[pyfunction]
fn diffusion_matrix(points: Vec<(f64, f64)>, radius: usize) -> PyResult<Vec<Vec<u32>>> {
    let c = contour(points)?;
    let a = shapeparts::build_visibility_matrix(&c);
    let mask = visibility::neighborhood_mask(c.len(), radius).map_err(err)?;
    let an = visibility::restrict(&a, &mask).map_err(err)?;
    Ok(rows(shapeparts::diffuse(&an).matrix()))
}

/// Sequential dominant sets of a symmetric weight matrix: a list of
/// `(start, length, cohesiveness)` and the unassigned indices.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn extract(weights: Vec<Vec<u32>>) -> PyResult<(Vec<(usize, usize, f64)>, Vec<usize>)> {
    let m = SquareMatrix::from_rows(&weights).map_err(err)?;
    if !m.is_symmetric() {
        return Err(err("weights must be symmetric"));
    }
    let d = shapeparts::extract_all(&DiffusionMatrix::from_weights(m));
    let clusters = d
        .clusters
        .iter()
        .map(|c| (c.run.start, c.run.len, c.cohesiveness))
        .collect();
    Ok((clusters, d.unassigned))
}

/// Rand index of two labelings; label 0 marks unassigned points.
#[pyfunction]
fn rand_index(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    metrics::rand_index(&a, &b).map_err(err)
}

/// Full analysis of one contour; returns the result record as a dict.
#[pyfunction]
#[pyo3(signature = (
    points, *, samples = 200, radius = None, std_mult = 2.0, null_graphs = 250,
    seed = 0, postprocess = false, add_direct = false, verbose_samples = false
))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    py: Python<'_>,
    points: Vec<(f64, f64)>,
    samples: usize,
    radius: Option<usize>,
    std_mult: f64,
    null_graphs: usize,
    seed: u64,
    postprocess: bool,
    add_direct: bool,
    verbose_samples: bool,
) -> PyResult<PyObject> {
    let c = contour(points)?;
    let cfg = AnalysisConfig {
        sample_count: samples,
        radius,
        std_multiplier: std_mult,
        num_random_graphs: null_graphs,
        rng_seed: seed,
        postprocess,
        add_direct_edges: add_direct,
        ..AnalysisConfig::default()
    };
    let analysis = py
        .allow_threads(|| pipeline::analyze_contour(&c, &cfg))
        .map_err(err)?;
    let record = ShapeRecord::new("<memory>", &cfg, &analysis, verbose_samples);
    let text = record.to_json().map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pymodule]
fn pyshapeparts(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ShapePartsError", m.py().get_type::<ShapePartsError>())?;
    m.add_function(wrap_pyfunction!(load_contour, m)?)?;
    m.add_function(wrap_pyfunction!(resample, m)?)?;
    m.add_function(wrap_pyfunction!(visibility_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_radius, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(rand_index, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    Ok(())
}
