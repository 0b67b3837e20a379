use shapeparts::pipeline::{analyze_contour, AnalysisConfig, PipelineError};
use shapeparts::{Contour, ContourError, Point};

fn ellipse(a: f64, b: f64, n: usize) -> Contour {
    let pts = (0..n)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / n as f64;
            Point {
                x: a * t.cos(),
                y: b * t.sin(),
            }
        })
        .collect();
    Contour::new(pts).unwrap()
}

#[test]
fn convex_shape_has_at_most_one_part() {
    let cfg = AnalysisConfig {
        sample_count: 120,
        num_random_graphs: 60,
        ..AnalysisConfig::default()
    };
    for seed in 0..2 {
        let cfg = AnalysisConfig {
            rng_seed: seed,
            ..cfg.clone()
        };
        let a = analyze_contour(&ellipse(2.0, 1.0, 400), &cfg).unwrap();
        assert!(a.decomposition.k() <= 1, "k = {}", a.decomposition.k());
        assert_eq!(a.contour.len(), 120);
        assert_eq!(a.visibility.edge_count(), 120 * 119 / 2);
    }
}

#[test]
fn stage_errors_surface_unchanged() {
    let cfg = AnalysisConfig {
        sample_count: 4,
        ..AnalysisConfig::default()
    };
    let err = analyze_contour(&ellipse(1.0, 1.0, 50), &cfg).unwrap_err();
    assert!(
        matches!(err, PipelineError::Contour(ContourError::TargetTooSmall(4))),
        "{err:?}"
    );

    let cfg = AnalysisConfig {
        radius: Some(100),
        ..AnalysisConfig::default()
    };
    let err = analyze_contour(&ellipse(1.0, 1.0, 50), &cfg).unwrap_err();
    assert!(matches!(err, PipelineError::Visibility(_)), "{err:?}");
}
