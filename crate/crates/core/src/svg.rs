//! Standalone SVG rendering of a decomposed contour.

use std::fmt::Write as _;
use std::path::Path;

use crate::contour::Contour;
use crate::dominant_sets::Decomposition;

pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#393b79", "#637939", "#843c39",
];
pub const UNASSIGNED_COLOR: &str = "#9e9e9e";

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;
const LEGEND_ROW: f64 = 18.0;

pub fn cluster_color(idx: usize) -> &'static str {
    PALETTE[idx % PALETTE.len()]
}

/// SVG document: the closed outline, one dot per sample point colored by
/// cluster, and a legend listing each cluster's cohesiveness.
pub fn svg_document(contour: &Contour, decomp: &Decomposition) -> String {
    let pts = contour.points();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let s = (SIZE - 2.0 * MARGIN) / span;
    // SVG y grows downward.
    let map = |x: f64, y: f64| (MARGIN + (x - x0) * s, MARGIN + (y1 - y) * s);

    let legend_h = LEGEND_ROW * (decomp.k() + 1) as f64 + MARGIN;
    let height = SIZE + legend_h;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let outline: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = map(p.x, p.y);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        outline.join(" ")
    );

    let labels = decomp.labels();
    for (p, &label) in pts.iter().zip(&labels) {
        let (x, y) = map(p.x, p.y);
        let color = if label == 0 {
            UNASSIGNED_COLOR
        } else {
            cluster_color(label - 1)
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#
        );
    }

    let mut y = SIZE + LEGEND_ROW;
    for (idx, c) in decomp.clusters.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{:.2}" width="10" height="10" fill="{}"/><text x="{}" y="{y:.2}" font-family="sans-serif" font-size="12">cluster {} ({} pts, start {}): {:.4}</text>"#,
            y - 9.0,
            cluster_color(idx),
            MARGIN + 16.0,
            idx + 1,
            c.run.len,
            c.run.start,
            c.cohesiveness
        );
        y += LEGEND_ROW;
    }
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{:.2}" width="10" height="10" fill="{UNASSIGNED_COLOR}"/><text x="{}" y="{y:.2}" font-family="sans-serif" font-size="12">unassigned ({} pts)</text>"#,
        y - 9.0,
        MARGIN + 16.0,
        decomp.unassigned.len()
    );
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(contour: &Contour, decomp: &Decomposition, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, svg_document(contour, decomp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominant_sets::{CircularRun, Cluster};
    use crate::geometry::Point;

    #[test]
    fn colors_wrap_and_unassigned_is_gray() {
        assert_eq!(cluster_color(12), cluster_color(0));
        let sq = Contour::new(
            [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
                .into_iter()
                .map(Point::from)
                .collect(),
        )
        .unwrap();
        let d = Decomposition {
            n: 4,
            clusters: vec![Cluster {
                run: CircularRun { start: 1, len: 2 },
                cohesiveness: 1.25,
            }],
            unassigned: vec![0, 3],
        };
        let doc = svg_document(&sq, &d);
        assert_eq!(doc.matches("<circle").count(), 4);
        assert_eq!(doc.matches(UNASSIGNED_COLOR).count(), 3);
        assert!(doc.contains("1.2500"));
        assert!(doc.ends_with("</svg>\n"));
    }
}
