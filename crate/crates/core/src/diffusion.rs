//! Two-step diffusion of the restricted visibility graph.

use crate::matrix::SquareMatrix;
use crate::visibility::RestrictedVisibility;

/// Weighted graph of length-2 path counts with the diagonal cleared.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix {
    matrix: SquareMatrix<u32>,
    radius: Option<usize>,
}

impl DiffusionMatrix {
    /// Wraps an arbitrary symmetric weight matrix, clearing its diagonal.
    /// Used for rewired null graphs and synthetic inputs.
    pub fn from_weights(mut matrix: SquareMatrix<u32>) -> Self {
        for i in 0..matrix.dim() {
            matrix.set(i, i, 0);
        }
        debug_assert!(matrix.is_symmetric());
        Self {
            matrix,
            radius: None,
        }
    }

    pub fn matrix(&self) -> &SquareMatrix<u32> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.matrix.get(i, j)
    }

    /// Radius of the restricted visibility this was derived from, if any.
    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    /// Unordered pairs with non-zero weight.
    pub fn edge_count(&self) -> usize {
        let n = self.dim();
        (0..n)
            .map(|i| {
                self.matrix.row(i)[i + 1..]
                    .iter()
                    .filter(|&&w| w > 0)
                    .count()
            })
            .sum()
    }

    pub fn cyclic_shift(&self, shift: usize) -> Self {
        Self {
            matrix: self.matrix.cyclic_shift(shift),
            radius: self.radius,
        }
    }
}

/// `D = A_n^2` with a zero diagonal.
pub fn diffuse(an: &RestrictedVisibility) -> DiffusionMatrix {
    diffuse_with(an, false)
}

/// As [`diffuse`]; with `add_direct` each directly visible pair gets one
/// extra unit (`D + A_n`).
pub fn diffuse_with(an: &RestrictedVisibility, add_direct: bool) -> DiffusionMatrix {
    let a = an.matrix();
    let n = a.dim();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&k| a.get(i, k) == 1).collect())
        .collect();
    let mut m = SquareMatrix::<u32>::zeros(n);
    for i in 0..n {
        for &k in &neighbors[i] {
            for &j in &neighbors[k] {
                if j > i {
                    m.set(i, j, m.get(i, j) + 1);
                }
            }
        }
        if add_direct {
            for &j in &neighbors[i] {
                if j > i {
                    m.set(i, j, m.get(i, j) + 1);
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            m.set(j, i, m.get(i, j));
        }
    }
    DiffusionMatrix {
        matrix: m,
        radius: Some(an.radius()),
    }
}
