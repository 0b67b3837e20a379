//! Planar predicates shared by contour validation and visibility.
//!
//! All predicates expect coordinates already mapped into the unit box by
//! [`normalize`]; the orientation tolerance is absolute in that frame.

use serde::{Deserialize, Serialize};

/// Determinants with magnitude at or below this are treated as collinear.
pub const ORIENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn minus(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Maps points into `[0, 1]^2` by translating the bounding-box corner to the
/// origin and scaling by the smallest power of two covering the extent.
///
/// Power-of-two scaling is exact, so integer fixtures that differ by integer
/// translation or power-of-two scaling normalize to identical coordinates.
pub fn normalize(points: &[Point]) -> Vec<Point> {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y);
    let scale = if extent > 0.0 && extent.is_finite() {
        let exp = extent.log2().ceil() as i32;
        // log2 rounding can land one short of covering the extent.
        let exp = if 2f64.powi(exp) < extent {
            exp + 1
        } else {
            exp
        };
        2f64.powi(-exp)
    } else {
        1.0
    };
    points
        .iter()
        .map(|p| Point::new((p.x - min_x) * scale, (p.y - min_y) * scale))
        .collect()
}

/// Sign of the turn `a -> b -> c`: `1` left (counterclockwise), `-1` right,
/// `0` collinear within [`ORIENT_EPS`].
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if det > ORIENT_EPS {
        1
    } else if det < -ORIENT_EPS {
        -1
    } else {
        0
    }
}

/// Twice the signed area (shoelace); positive for counterclockwise rings.
pub fn signed_area2(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let p = points[i];
            let q = points[(i + 1) % n];
            p.x * q.y - q.x * p.y
        })
        .sum()
}

/// `c` collinear with segment `a-b` lies within its bounding box.
#[inline]
fn within_box(a: Point, b: Point, c: Point) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

#[inline]
pub fn on_segment(a: Point, b: Point, c: Point) -> bool {
    orient(a, b, c) == 0 && within_box(a, b, c)
}

/// Segments `p-q` and `r-s` cross at a single interior point of both.
#[inline]
pub fn properly_cross(p: Point, q: Point, r: Point, s: Point) -> bool {
    let o1 = orient(p, q, r);
    let o2 = orient(p, q, s);
    let o3 = orient(r, s, p);
    let o4 = orient(r, s, q);
    o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4
}

/// Closed segments `p-q` and `r-s` share at least one point.
pub fn segments_touch(p: Point, q: Point, r: Point, s: Point) -> bool {
    let o1 = orient(p, q, r);
    let o2 = orient(p, q, s);
    let o3 = orient(r, s, p);
    let o4 = orient(r, s, q);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && within_box(p, q, r))
        || (o2 == 0 && within_box(p, q, s))
        || (o3 == 0 && within_box(r, s, p))
        || (o4 == 0 && within_box(r, s, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Classifies `p` against the closed ring `poly` (either orientation).
pub fn locate(poly: &[Point], p: Point) -> Location {
    let n = poly.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let o = orient(a, b, p);
        if o == 0 && within_box(a, b, p) {
            return Location::Boundary;
        }
        if a.y <= p.y {
            if b.y > p.y && o > 0 {
                winding += 1;
            }
        } else if b.y <= p.y && o < 0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}
