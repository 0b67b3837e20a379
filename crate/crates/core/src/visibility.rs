//! Visibility graph of a contour, circular neighborhood restriction and
//! radius estimation from the off-diagonal profile.

use rayon::prelude::*;
use thiserror::Error;

use crate::contour::Contour;
use crate::geometry::{self, Location, Point};
use crate::matrix::{MatrixError, SquareMatrix};

#[derive(Debug, Error)]
pub enum VisibilityError {
    #[error("radius {radius} outside legal range 1..={max} for {n} points")]
    RadiusOutOfRange { radius: usize, max: usize, n: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix is not a valid visibility matrix: {0}")]
    Invalid(&'static str),
}

/// Largest legal neighborhood radius for `n` contour points.
pub fn max_radius(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// Circular index distance between `i` and `j` on a ring of `n` points.
#[inline]
pub fn circular_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

/// Symmetric 0/1 matrix of mutually visible contour points.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityMatrix(SquareMatrix<u8>);

impl VisibilityMatrix {
    /// Wraps a matrix after checking symmetry, binary entries and a zero
    /// diagonal.
    pub fn from_matrix(m: SquareMatrix<u8>) -> Result<Self, VisibilityError> {
        let n = m.dim();
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(VisibilityError::Invalid("non-zero diagonal"));
            }
            for j in 0..n {
                if m.get(i, j) > 1 {
                    return Err(VisibilityError::Invalid("entry outside {0, 1}"));
                }
            }
        }
        if !m.is_symmetric() {
            return Err(VisibilityError::Invalid("not symmetric"));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &SquareMatrix<u8> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn visible(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j) == 1
    }

    /// Number of unordered visible pairs.
    pub fn edge_count(&self) -> usize {
        let n = self.dim();
        (0..n)
            .map(|i| self.0.row(i)[i + 1..].iter().filter(|&&v| v == 1).count())
            .sum()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.0.row(i).iter().filter(|&&v| v == 1).count()
    }
}

/// Builds the visibility matrix: `A[i][j] = 1` iff the segment between points
/// `i` and `j` lies in the closed region bounded by the contour.
pub fn build_visibility_matrix(c: &Contour) -> VisibilityMatrix {
    let pts = geometry::normalize(c.points());
    let n = pts.len();
    let rows: Vec<Vec<u8>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0u8; n];
            for (j, cell) in row.iter_mut().enumerate().skip(i + 1) {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent || segment_inside(&pts, i, j) {
                    *cell = 1;
                }
            }
            row
        })
        .collect();
    let mut m = SquareMatrix::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i + 1) {
            if v == 1 {
                m.set(i, j, 1);
                m.set(j, i, 1);
            }
        }
    }
    VisibilityMatrix(m)
}

/// Segment `i-j` is inside the closed polygon.
///
/// Any proper crossing with an edge rules it out. Otherwise the segment is
/// split at every polygon vertex lying on it; between those splits the
/// boundary cannot meet the open pieces, so each piece is entirely inside or
/// entirely outside and its midpoint decides.
fn segment_inside(pts: &[Point], i: usize, j: usize) -> bool {
    let n = pts.len();
    let a = pts[i];
    let b = pts[j];
    for k in 0..n {
        let k1 = (k + 1) % n;
        if k == i || k == j || k1 == i || k1 == j {
            continue;
        }
        if geometry::properly_cross(a, b, pts[k], pts[k1]) {
            return false;
        }
    }

    let dir = b.minus(a);
    let len2 = dir.dot(dir);
    let mut cuts = vec![0.0, 1.0];
    for (k, &p) in pts.iter().enumerate() {
        if k != i && k != j && geometry::on_segment(a, b, p) {
            cuts.push((p.minus(a).dot(dir) / len2).clamp(0.0, 1.0));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .all(|w| geometry::locate(pts, a.lerp(b, 0.5 * (w[0] + w[1]))) != Location::Outside)
}

/// Circulant band `T[i][j] = 1` iff the circular distance is at most the
/// radius (diagonal included).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodMask {
    radius: usize,
    n: usize,
}

impl NeighborhoodMask {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        circular_distance(i, j, self.n) <= self.radius
    }

    pub fn to_matrix(&self) -> SquareMatrix<u8> {
        SquareMatrix::from_fn(self.n, |i, j| self.contains(i, j) as u8)
    }
}

pub fn neighborhood_mask(n: usize, radius: usize) -> Result<NeighborhoodMask, VisibilityError> {
    let max = max_radius(n);
    if radius < 1 || radius > max {
        return Err(VisibilityError::RadiusOutOfRange { radius, max, n });
    }
    Ok(NeighborhoodMask { radius, n })
}

/// Visibility restricted to pairs within the neighborhood radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedVisibility {
    matrix: SquareMatrix<u8>,
    radius: usize,
}

impl RestrictedVisibility {
    /// Wraps an externally built 0/1 matrix (symmetric, zero diagonal).
    pub fn from_parts(matrix: SquareMatrix<u8>, radius: usize) -> Result<Self, VisibilityError> {
        let checked = VisibilityMatrix::from_matrix(matrix)?;
        Ok(Self {
            matrix: checked.0,
            radius,
        })
    }

    pub fn matrix(&self) -> &SquareMatrix<u8> {
        &self.matrix
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn as_visibility(&self) -> VisibilityMatrix {
        VisibilityMatrix(self.matrix.clone())
    }
}

/// Elementwise product of `A` and the mask.
pub fn restrict(
    a: &VisibilityMatrix,
    mask: &NeighborhoodMask,
) -> Result<RestrictedVisibility, VisibilityError> {
    if a.dim() != mask.dim() {
        return Err(MatrixError::DimensionMismatch {
            left: a.dim(),
            right: mask.dim(),
        }
        .into());
    }
    let matrix = SquareMatrix::from_fn(a.dim(), |i, j| a.0.get(i, j) * mask.contains(i, j) as u8);
    Ok(RestrictedVisibility {
        matrix,
        radius: mask.radius,
    })
}

/// `s(n)` for `n = 1..=N/2`: visible upper-triangle pairs whose index offset
/// is `n` or `N - n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffDiagonalProfile(Vec<usize>);

impl OffDiagonalProfile {
    /// `s(n)`, 1-based in `n`.
    pub fn at(&self, n: usize) -> usize {
        self.0[n - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn from_values(values: Vec<usize>) -> Self {
        Self(values)
    }
}

pub fn off_diagonal_profile(a: &VisibilityMatrix) -> OffDiagonalProfile {
    let n = a.dim();
    let half = n / 2;
    let mut s = vec![0usize; half];
    for i in 0..n {
        for j in i + 1..n {
            if a.visible(i, j) {
                let d = j - i;
                if (1..=half).contains(&d) {
                    s[d - 1] += 1;
                } else if (1..=half).contains(&(n - d)) {
                    s[n - d - 1] += 1;
                }
            }
        }
    }
    OffDiagonalProfile(s)
}

/// Lower bound for radius search: `ceil(N / 20)`.
pub fn default_min_radius(n: usize) -> usize {
    n.div_ceil(20)
}

/// Smallest strict local minimum of the profile at or above `ceil(N/20)`,
/// falling back to `floor(N/8)`.
pub fn estimate_radius(profile: &OffDiagonalProfile, n: usize) -> usize {
    estimate_radius_from(profile, n, default_min_radius(n))
}

pub fn estimate_radius_from(profile: &OffDiagonalProfile, n: usize, min_radius: usize) -> usize {
    let s = profile.values();
    let lo = min_radius.max(2);
    (lo..s.len())
        .find(|&r| s[r - 1] < s[r - 2] && s[r - 1] < s[r])
        .unwrap_or_else(|| (n / 8).clamp(1, max_radius(n).max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn contour(coords: &[(f64, f64)]) -> Contour {
        Contour::new(coords.iter().map(|&p| Point::from(p)).collect()).unwrap()
    }

    fn regular(n: usize) -> Contour {
        Contour::new(
            (0..n)
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / n as f64;
                    Point::new(a.cos(), a.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn convex_octagon_sees_everything() {
        let a = build_visibility_matrix(&regular(8));
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(a.visible(i, j), i != j);
            }
        }
    }

    #[test]
    fn l_shape_blocks_reflex_pair() {
        let l = contour(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]);
        let a = build_visibility_matrix(&l);
        // (2,1) and (1,2) straddle the notch.
        assert!(!a.visible(2, 4));
        // The reflex corner sees everything else.
        for j in [0, 1, 2, 4, 5] {
            assert!(a.visible(3, j));
        }
        // (2,0) to (0,2) passes through the reflex vertex (1,1): grazing is allowed.
        assert!(a.visible(1, 5));
        assert!(a.matrix().is_symmetric());
    }

    #[test]
    fn chords_through_notch_apex() {
        // Square with a triangular notch cut down from the top edge to (2,2).
        let c = contour(&[
            (0., 0.),
            (4., 0.),
            (4., 4.),
            (3., 4.),
            (2., 2.),
            (1., 4.),
            (0., 4.),
        ]);
        let a = build_visibility_matrix(&c);
        // Both diagonals graze the apex and stay inside.
        assert!(a.visible(0, 2));
        assert!(a.visible(6, 1));
        // Across the notch opening is entirely outside.
        assert!(!a.visible(5, 3));
        // (4,4) to (0,4) runs along the top through the notch.
        assert!(!a.visible(2, 6));
    }

    #[test]
    fn mask_rows() {
        let m = neighborhood_mask(5, 1).unwrap().to_matrix();
        assert_eq!(m.row(0), &[1, 1, 0, 0, 1]);
        let m = neighborhood_mask(6, 2).unwrap().to_matrix();
        assert_eq!(m.row(0), &[1, 1, 1, 0, 1, 1]);
        let m = neighborhood_mask(20, 4).unwrap().to_matrix();
        for i in 0..20 {
            assert_eq!(m.row(i).iter().map(|&v| v as usize).sum::<usize>(), 9);
        }
    }

    #[test]
    fn mask_radius_range() {
        assert!(neighborhood_mask(10, 0).is_err());
        assert!(neighborhood_mask(10, 4).is_ok());
        assert!(matches!(
            neighborhood_mask(10, 5),
            Err(VisibilityError::RadiusOutOfRange { max: 4, .. })
        ));
    }

    #[test]
    fn restrict_convex_to_cycle() {
        let a = build_visibility_matrix(&regular(5));
        let r = restrict(&a, &neighborhood_mask(5, 1).unwrap()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expect = circular_distance(i, j, 5) == 1;
                assert_eq!(r.matrix().get(i, j) == 1, expect);
            }
        }
    }

    #[test]
    fn restrict_near_identity_mask() {
        let a = build_visibility_matrix(&regular(12));
        let r = restrict(&a, &neighborhood_mask(12, 5).unwrap()).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let expected = if circular_distance(i, j, 12) == 6 {
                    0
                } else {
                    a.matrix().get(i, j)
                };
                assert_eq!(r.matrix().get(i, j), expected);
            }
        }
    }

    #[test]
    fn restrict_dimension_mismatch() {
        let a = build_visibility_matrix(&regular(8));
        assert!(matches!(
            restrict(&a, &neighborhood_mask(10, 2).unwrap()),
            Err(VisibilityError::Matrix(
                MatrixError::DimensionMismatch { .. }
            ))
        ));
    }

    #[test]
    fn profile_convex_and_cycle() {
        for n in [8, 9, 20, 33] {
            let p = off_diagonal_profile(&build_visibility_matrix(&regular(n)));
            assert_eq!(p.len(), n / 2);
            for d in 1..=n / 2 {
                // Offsets n and N - n coincide at d = N/2 for even N.
                let expect = if 2 * d == n { n / 2 } else { n };
                assert_eq!(p.at(d), expect, "n={n} d={d}");
            }
        }
        let cycle = restrict(
            &build_visibility_matrix(&regular(5)),
            &neighborhood_mask(5, 1).unwrap(),
        )
        .unwrap()
        .as_visibility();
        let p = off_diagonal_profile(&cycle);
        assert_eq!(p.values(), &[5, 0]);
    }

    #[test]
    fn radius_rules() {
        let flat = OffDiagonalProfile::from_values(vec![200; 100]);
        assert_eq!(estimate_radius(&flat, 200), 25);

        let mut single = vec![100usize; 100];
        single[16] = 90; // s(17)
        assert_eq!(
            estimate_radius(&OffDiagonalProfile::from_values(single), 200),
            17
        );

        let mut two = vec![100usize; 100];
        two[10] = 95; // s(11)
        two[22] = 50; // s(23)
        assert_eq!(
            estimate_radius(&OffDiagonalProfile::from_values(two), 200),
            11
        );

        // Minima below ceil(N/20) are ignored.
        let mut low = vec![100usize; 100];
        low[4] = 10; // s(5)
        low[29] = 60; // s(30)
        assert_eq!(
            estimate_radius(&OffDiagonalProfile::from_values(low), 200),
            30
        );
    }
}
