//! Dense square matrices with a plain-text dump format.
//!
//! The text format is the number of rows on the first line followed by one
//! line per row of space-separated entries.

use std::fmt::Display;
use std::io::{BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix text parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::default(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds from row vectors; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn principal(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    /// Relabels node `i` as `(i + shift) % n`.
    pub fn cyclic_shift(&self, shift: usize) -> Self {
        let n = self.n;
        if n == 0 {
            return self.clone();
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set((i + shift) % n, (j + shift) % n, self.get(i, j));
            }
        }
        out
    }
}

impl<T: Copy + Default + PartialEq> SquareMatrix<T> {
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T: Copy + Default + Display> SquareMatrix<T> {
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.n)?;
        for i in 0..self.n {
            let mut first = true;
            for v in self.row(i) {
                if !first {
                    w.write_all(b" ")?;
                }
                write!(w, "{v}")?;
                first = false;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("matrix text is ASCII")
    }
}

impl<T: Copy + Default + FromStr> SquareMatrix<T> {
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, MatrixError> {
        let mut lines = reader
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let (_, header) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let header = header?;
        let n: usize = header.trim().parse().map_err(|_| MatrixError::Parse {
            line: 1,
            message: format!("expected dimension, found {header:?}"),
        })?;
        let mut data = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let v = tok.parse::<T>().map_err(|_| MatrixError::Parse {
                    line: idx + 1,
                    message: format!("bad entry {tok:?}"),
                })?;
                data.push(v);
            }
            if data.len() - before != n {
                return Err(MatrixError::Parse {
                    line: idx + 1,
                    message: format!("expected {n} entries, found {}", data.len() - before),
                });
            }
            rows += 1;
        }
        if rows != n {
            return Err(MatrixError::Parse {
                line: rows + 1,
                message: format!("expected {n} rows, found {rows}"),
            });
        }
        Ok(Self { n, data })
    }
}
