//! Closed planar contours: loading, validation, orientation and uniform
//! arc-length resampling.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{self, Point};

/// Smallest sample count accepted by [`resample_uniform`].
pub const MIN_SAMPLES: usize = 8;
/// Parameter slack used by the self-intersection sweep.
pub const INTERSECTION_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ContourError {
    #[error("contour parse error: {0}")]
    Parse(String),
    #[error("contour needs at least 3 distinct points, found {0}")]
    TooFewPoints(usize),
    #[error("contour has zero enclosed area")]
    Degenerate,
    #[error("contour self-intersects: edge {first} meets edge {second}")]
    SelfIntersecting { first: usize, second: usize },
    #[error("resample target {0} is below the minimum of {MIN_SAMPLES}")]
    TargetTooSmall(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContourFormat {
    Csv,
    Json,
}

impl ContourFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ContourFormat::Json,
            _ => ContourFormat::Csv,
        }
    }
}

/// A simple, counterclockwise closed polygon. Edge `i` joins point `i` to
/// point `(i + 1) % len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct JsonContour {
    points: Vec<[f64; 2]>,
}

impl Contour {
    /// Validates and canonicalizes a ring of points.
    ///
    /// A repeated closing point and consecutive duplicates are dropped,
    /// clockwise input is reversed (keeping the first point first), and
    /// self-intersecting rings are rejected.
    pub fn new(points: Vec<Point>) -> Result<Self, ContourError> {
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(ContourError::Parse("non-finite coordinate".into()));
        }
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(ContourError::TooFewPoints(pts.len()));
        }
        let area2 = geometry::signed_area2(&pts);
        if area2 == 0.0 {
            return Err(ContourError::Degenerate);
        }
        if area2 < 0.0 {
            pts[1..].reverse();
        }
        check_simple(&pts)?;
        Ok(Self { points: pts })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * geometry::signed_area2(&self.points)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].distance(self.points[(i + 1) % n]))
            .sum()
    }

    /// Same ring starting at point `shift`.
    pub fn rotate_start(&self, shift: usize) -> Contour {
        let mut points = self.points.clone();
        points.rotate_left(shift % self.points.len());
        Contour { points }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ContourError> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wtr.write_record(["x", "y"]).map_err(csv_err)?;
        for p in &self.points {
            wtr.write_record([p.x.to_string(), p.y.to_string()])
                .map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), ContourError> {
        let doc = JsonContour {
            points: self.points.iter().map(|p| [p.x, p.y]).collect(),
        };
        serde_json::to_writer(w, &doc).map_err(|e| ContourError::Parse(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> ContourError {
    ContourError::Parse(e.to_string())
}

/// Reads a contour from CSV (`x,y` per line, optional `x,y` header) or JSON
/// (`{"points": [[x, y], ...]}`).
pub fn load_contour<R: Read>(source: R, format: ContourFormat) -> Result<Contour, ContourError> {
    let points = match format {
        ContourFormat::Csv => parse_csv(source)?,
        ContourFormat::Json => {
            let doc: JsonContour =
                serde_json::from_reader(source).map_err(|e| ContourError::Parse(e.to_string()))?;
            doc.points
                .into_iter()
                .map(|[x, y]| Point::new(x, y))
                .collect()
        }
    };
    Contour::new(points)
}

fn parse_csv<R: Read>(source: R) -> Result<Vec<Point>, ContourError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);
    let mut points = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != 2 {
            return Err(ContourError::Parse(format!(
                "line {}: expected 2 fields, found {}",
                idx + 1,
                record.len()
            )));
        }
        if idx == 0 && record[0].eq_ignore_ascii_case("x") && record[1].eq_ignore_ascii_case("y") {
            continue;
        }
        let coord = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| ContourError::Parse(format!("line {}: bad number {s:?}", idx + 1)))
        };
        points.push(Point::new(coord(&record[0])?, coord(&record[1])?));
    }
    Ok(points)
}

/// Pairwise edge sweep. Non-adjacent edges may not touch at all; adjacent
/// edges may only share their common vertex.
fn check_simple(points: &[Point]) -> Result<(), ContourError> {
    let n = points.len();
    let norm = geometry::normalize(points);
    let edge = |i: usize| (norm[i], norm[(i + 1) % n]);
    for i in 0..n {
        let (p, q) = edge(i);
        for j in i + 1..n {
            let (r, s) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let bad = if adjacent {
                folds_back(p, q, r, s, j == i + 1)
            } else {
                segments_meet(p, q, r, s)
            };
            if bad {
                return Err(ContourError::SelfIntersecting {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

/// Intersection test on segment parameters with [`INTERSECTION_EPS`] slack.
fn segments_meet(p: geometry::Point, q: Point, r: Point, s: Point) -> bool {
    let d1 = q.minus(p);
    let d2 = s.minus(r);
    let denom = d1.x * d2.y - d1.y * d2.x;
    let w = r.minus(p);
    if denom.abs() <= geometry::ORIENT_EPS {
        // Parallel: only collinear overlap counts.
        if geometry::orient(p, q, r) != 0 {
            return false;
        }
        let len2 = d1.dot(d1);
        let t0 = w.dot(d1) / len2;
        let t1 = s.minus(p).dot(d1) / len2;
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        return hi >= -INTERSECTION_EPS && lo <= 1.0 + INTERSECTION_EPS;
    }
    let t = (w.x * d2.y - w.y * d2.x) / denom;
    let u = (w.x * d1.y - w.y * d1.x) / denom;
    (-INTERSECTION_EPS..=1.0 + INTERSECTION_EPS).contains(&t)
        && (-INTERSECTION_EPS..=1.0 + INTERSECTION_EPS).contains(&u)
}

/// Adjacent edges overlap beyond their shared vertex (a zero-width spike).
fn folds_back(p: Point, q: Point, r: Point, s: Point, forward: bool) -> bool {
    // forward: q == r is the shared vertex; otherwise s == p.
    let (shared, a, b) = if forward { (q, p, s) } else { (p, q, r) };
    geometry::orient(a, shared, b) == 0 && a.minus(shared).dot(b.minus(shared)) > 0.0
}

/// Resamples the ring to `target` points at equal arc-length spacing, starting
/// at the first point and interpolating linearly along edges.
pub fn resample_uniform(c: &Contour, target: usize) -> Result<Contour, ContourError> {
    if target < MIN_SAMPLES {
        return Err(ContourError::TargetTooSmall(target));
    }
    let pts = c.points();
    let n = pts.len();
    let perimeter = c.perimeter();
    let step = perimeter / target as f64;

    let mut out = Vec::with_capacity(target);
    out.push(pts[0]);
    let mut edge = 0;
    let mut edge_start = 0.0;
    let mut edge_len = pts[0].distance(pts[1 % n]);
    for k in 1..target {
        let s = step * k as f64;
        while edge_start + edge_len < s && edge < n - 1 {
            edge_start += edge_len;
            edge += 1;
            edge_len = pts[edge].distance(pts[(edge + 1) % n]);
        }
        let a = pts[edge];
        let b = pts[(edge + 1) % n];
        let t = ((s - edge_start) / edge_len).clamp(0.0, 1.0);
        out.push(if t == 1.0 { b } else { a.lerp(b, t) });
    }
    Contour::new(out)
}
