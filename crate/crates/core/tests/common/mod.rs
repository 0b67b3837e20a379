#![allow(dead_code)]

use std::f64::consts::PI;

use shapeparts::{Contour, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Left,
    Right,
    Neck,
}

/// Two circular lobes joined by a straight neck of constant width.
#[derive(Debug, Clone, Copy)]
pub struct Dumbbell {
    /// (center x, radius); both centers lie on y = 0.
    pub left: (f64, f64),
    pub right: (f64, f64),
    pub half_width: f64,
}

impl Dumbbell {
    /// Unit lobes a quarter apart joined by a narrow neck.
    pub fn standard() -> Self {
        Self {
            left: (-1.125, 1.0),
            right: (1.125, 1.0),
            half_width: 0.06,
        }
    }

    fn neck_span(&self) -> (f64, f64) {
        let w2 = self.half_width * self.half_width;
        let (lc, lr) = self.left;
        let (rc, rr) = self.right;
        (lc + (lr * lr - w2).sqrt(), rc - (rr * rr - w2).sqrt())
    }

    /// Dense counter-clockwise outline with spacing close to `step`,
    /// starting at the upper left junction.
    pub fn outline(&self, step: f64) -> Contour {
        let w = self.half_width;
        let (lc, lr) = self.left;
        let (rc, rr) = self.right;
        let (lx, rx) = self.neck_span();
        let la = (w / lr).asin();
        let ra = (w / rr).asin();
        let mut pts = Vec::new();
        let arc = |cx: f64, r: f64, from: f64, to: f64, pts: &mut Vec<Point>| {
            let k = ((to - from) * r / step).ceil() as usize;
            for s in 0..k {
                let t = from + (to - from) * s as f64 / k as f64;
                pts.push(Point {
                    x: cx + r * t.cos(),
                    y: r * t.sin(),
                });
            }
        };
        let line = |a: Point, b: Point, pts: &mut Vec<Point>| {
            let k = (a.distance(b) / step).ceil() as usize;
            for s in 0..k {
                pts.push(a.lerp(b, s as f64 / k as f64));
            }
        };
        arc(lc, lr, la, 2.0 * PI - la, &mut pts);
        line(Point { x: lx, y: -w }, Point { x: rx, y: -w }, &mut pts);
        arc(rc, rr, PI + ra, 3.0 * PI - ra, &mut pts);
        line(Point { x: rx, y: w }, Point { x: lx, y: w }, &mut pts);
        Contour::new(pts).expect("dumbbell outline is simple")
    }

    /// Classifies a point lying on the outline; the straight neck edges
    /// (junctions included) are `Neck`.
    pub fn part(&self, p: Point) -> Part {
        let (lx, rx) = self.neck_span();
        if (p.y.abs() - self.half_width).abs() < 1e-9 && p.x >= lx - 1e-9 && p.x <= rx + 1e-9 {
            Part::Neck
        } else if p.x < 0.0 {
            Part::Left
        } else {
            Part::Right
        }
    }
}
