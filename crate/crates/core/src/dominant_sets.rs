//! Sequential dominant-set extraction.
//!
//! Each round runs discrete replicator dynamics on the residual weight
//! matrix from the barycenter, keeps the longest circular run of consecutive
//! contour indices inside the converged support, and removes that run from
//! the residual. Runs of fewer than [`MIN_CLUSTER_SIZE`] nodes are marked
//! unassigned instead of becoming clusters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusion::DiffusionMatrix;
use crate::matrix::SquareMatrix;

/// Runs shorter than this are not reported as clusters.
pub const MIN_CLUSTER_SIZE: usize = 4;
/// Tolerance on `sum(x) == 1` for participation vectors.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DominantSetError {
    #[error("dimension mismatch: matrix is {matrix}, vector is {vector}")]
    DimensionMismatch { matrix: usize, vector: usize },
    #[error("vector is not on the simplex (sum {sum}, min {min})")]
    NotOnSimplex { sum: f64, min: f64 },
    #[error(
        "objective vanished at iteration {iteration}: no cohesive set under the current support"
    )]
    NoCohesiveSet { iteration: usize },
    #[error("support is empty")]
    EmptySupport,
    #[error("weights must be symmetric, finite and non-negative")]
    InvalidWeights,
}

/// Symmetric non-negative weights with a zero diagonal, stored densely by
/// rows. Weights that are all exact in single precision (every diffusion
/// matrix) are kept as `f32` to halve memory traffic; arithmetic is `f64`.
#[derive(Debug, Clone)]
pub struct Weights {
    n: usize,
    vals: Storage,
}

#[derive(Debug, Clone)]
enum Storage {
    Single(Vec<f32>),
    Double(Vec<f64>),
}

impl Weights {
    pub fn from_dense(m: &SquareMatrix<f64>) -> Result<Self, DominantSetError> {
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 || v != m.get(j, i) {
                    return Err(DominantSetError::InvalidWeights);
                }
            }
        }
        Ok(Self::build(n, |i, j| m.get(i, j)))
    }

    pub fn from_diffusion(d: &DiffusionMatrix) -> Self {
        Self::build(d.dim(), |i, j| d.get(i, j) as f64)
    }

    /// Principal submatrix of `d` on `active` (local index `a` is node
    /// `active[a]`).
    pub fn principal(d: &DiffusionMatrix, active: &[usize]) -> Self {
        Self::build(active.len(), |a, b| d.get(active[a], active[b]) as f64)
    }

    fn build(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut vals = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                vals.push(if i == j { 0.0 } else { f(i, j) });
            }
        }
        let vals = if vals.iter().all(|&v| (v as f32) as f64 == v) {
            Storage::Single(vals.into_iter().map(|v| v as f32).collect())
        } else {
            Storage::Double(vals)
        };
        Self { n, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Principal submatrix on the local indices `keep`.
    fn gather(&self, keep: &[usize]) -> Self {
        fn pick<T: Copy>(v: &[T], n: usize, keep: &[usize]) -> Vec<T> {
            keep.iter()
                .flat_map(|&i| keep.iter().map(move |&j| v[i * n + j]))
                .collect()
        }
        let vals = match &self.vals {
            Storage::Single(v) => Storage::Single(pick(v, self.n, keep)),
            Storage::Double(v) => Storage::Double(pick(v, self.n, keep)),
        };
        Self {
            n: keep.len(),
            vals,
        }
    }

    fn mul_into(&self, x: &[f64], out: &mut [f64]) {
        if self.n == 0 {
            return;
        }
        match &self.vals {
            Storage::Single(v) => mul_dispatch(v, self.n, x, out),
            Storage::Double(v) => mul_dispatch(v, self.n, x, out),
        }
    }
}

/// Non-negative vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipationVector(Vec<f64>);

impl ParticipationVector {
    pub fn new(values: Vec<f64>) -> Result<Self, DominantSetError> {
        let sum: f64 = values.iter().sum();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if values.is_empty() || (sum - 1.0).abs() >= SIMPLEX_TOL || min < 0.0 || !sum.is_finite() {
            return Err(DominantSetError::NotOnSimplex { sum, min });
        }
        Ok(Self(values))
    }

    /// Barycenter `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Uniform `1/|members|` on `members`, zero elsewhere.
    pub fn uniform_on(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let members: Vec<usize> = members.into_iter().collect();
        let mut v = vec![0.0; n];
        let w = 1.0 / members.len() as f64;
        for i in members {
            v[i] = w;
        }
        Self(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `x^T W x`.
pub fn objective(w: &Weights, x: &ParticipationVector) -> Result<f64, DominantSetError> {
    if w.dim() != x.len() {
        return Err(DominantSetError::DimensionMismatch {
            matrix: w.dim(),
            vector: x.len(),
        });
    }
    let mut y = vec![0.0; x.len()];
    w.mul_into(x.values(), &mut y);
    Ok(dot(x.values(), &y))
}

const LANES: usize = 16;

#[inline(always)]
fn dot_lanes<T: Copy + Into<f64>>(a: &[T], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; LANES];
    let split = a.len() / LANES * LANES;
    let (ac, ar) = a.split_at(split);
    let (bc, br) = b[..a.len()].split_at(split);
    for (p, q) in ac.chunks_exact(LANES).zip(bc.chunks_exact(LANES)) {
        for k in 0..LANES {
            acc[k] += p[k].into() * q[k];
        }
    }
    let mut width = LANES;
    while width > 1 {
        width /= 2;
        for k in 0..width {
            acc[k] += acc[k + width];
        }
    }
    acc[0] + ar.iter().zip(br).map(|(&p, q)| p.into() * q).sum::<f64>()
}

#[inline(always)]
fn mul_rows<T: Copy + Into<f64>>(vals: &[T], n: usize, x: &[f64], out: &mut [f64]) {
    for (o, row) in out.iter_mut().zip(vals.chunks_exact(n)) {
        *o = dot_lanes(row, x);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn mul_rows_avx2<T: Copy + Into<f64>>(vals: &[T], n: usize, x: &[f64], out: &mut [f64]) {
    mul_rows(vals, n, x, out)
}

fn mul_dispatch<T: Copy + Into<f64>>(vals: &[T], n: usize, x: &[f64], out: &mut [f64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { mul_rows_avx2(vals, n, x, out) };
        }
    }
    mul_rows(vals, n, x, out)
}

/// Dot product with a fixed lane-wise summation order, so every code path
/// (and every machine) rounds identically. No fused multiply-add is used.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    dot_lanes(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicatorOptions {
    /// Stop once one step improves the objective by less than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ReplicatorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub x: ParticipationVector,
    pub objective: f64,
    pub iterations: usize,
}

/// Discrete replicator dynamics `x_i <- x_i (Wx)_i / x^T W x`.
pub fn replicator_run(
    w: &Weights,
    x0: &ParticipationVector,
    opts: &ReplicatorOptions,
) -> Result<Equilibrium, DominantSetError> {
    replicator_run_observed(w, x0, opts, |_, _, _| {})
}

/// As [`replicator_run`], calling `observe(iteration, x, objective)` for the
/// starting point and after every step.
pub fn replicator_run_observed(
    w: &Weights,
    x0: &ParticipationVector,
    opts: &ReplicatorOptions,
    mut observe: impl FnMut(usize, &[f64], f64),
) -> Result<Equilibrium, DominantSetError> {
    let n = w.dim();
    if x0.len() != n {
        return Err(DominantSetError::DimensionMismatch {
            matrix: n,
            vector: x0.len(),
        });
    }
    let mut full = x0.values().to_vec();
    let mut y = vec![0.0; n];
    w.mul_into(&full, &mut y);
    let mut j = dot(&full, &y);
    if j <= 0.0 {
        return Err(DominantSetError::NoCohesiveSet { iteration: 0 });
    }
    observe(0, &full, j);
    // Zero coordinates stay zero, so the iteration runs on the survivors
    // (`alive`, with weights `wc`) and is re-gathered as they thin out.
    let mut alive: Vec<usize> = (0..n).collect();
    let mut wc = std::borrow::Cow::Borrowed(w);
    let mut x = full.clone();
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut sum = 0.0;
        let mut live = 0;
        for (xi, yi) in x.iter_mut().zip(&y) {
            let v = *xi * yi / j;
            // Subnormals are flushed to zero; arithmetic on them is very slow.
            *xi = if v < f64::MIN_POSITIVE { 0.0 } else { v };
            sum += *xi;
            live += (*xi > 0.0) as usize;
        }
        for xi in x.iter_mut() {
            *xi /= sum;
        }
        if live * 4 <= alive.len() * 3 {
            let keep: Vec<usize> = (0..alive.len()).filter(|&a| x[a] > 0.0).collect();
            for (a, &g) in alive.iter().enumerate() {
                if x[a] == 0.0 {
                    full[g] = 0.0;
                }
            }
            wc = std::borrow::Cow::Owned(wc.gather(&keep));
            x = keep.iter().map(|&a| x[a]).collect();
            alive = keep.iter().map(|&a| alive[a]).collect();
            y.truncate(alive.len());
        }
        wc.mul_into(&x, &mut y);
        let next = dot(&x, &y);
        if next <= 0.0 {
            return Err(DominantSetError::NoCohesiveSet {
                iteration: iterations,
            });
        }
        for (&g, &v) in alive.iter().zip(&x) {
            full[g] = v;
        }
        observe(iterations, &full, next);
        let gain = next - j;
        j = next;
        if gain < opts.tol {
            break;
        }
    }
    Ok(Equilibrium {
        x: ParticipationVector(full),
        objective: j,
        iterations,
    })
}

/// Default support threshold `1/(10n)`.
pub fn default_support_eps(n: usize) -> f64 {
    0.1 / n as f64
}

/// Indices whose participation exceeds `eps`.
pub fn support(x: &ParticipationVector, eps: f64) -> Result<Vec<usize>, DominantSetError> {
    let s: Vec<usize> = x
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > eps)
        .map(|(i, _)| i)
        .collect();
    if s.is_empty() {
        Err(DominantSetError::EmptySupport)
    } else {
        Ok(s)
    }
}

/// A run of `len` consecutive indices starting at `start`, modulo the ring size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularRun {
    pub start: usize,
    #[serde(rename = "length")]
    pub len: usize,
}

impl CircularRun {
    pub fn members(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |k| (start + k) % n)
    }

    pub fn contains(&self, i: usize, n: usize) -> bool {
        (i + n - self.start) % n < self.len
    }

    pub fn shifted(&self, shift: usize, n: usize) -> Self {
        Self {
            start: (self.start + shift) % n,
            len: self.len,
        }
    }
}

/// Longest run of consecutive indices (wrapping from `n - 1` to `0`) inside
/// `indices`; equal lengths go to the smaller start. Returns the run and the
/// indices left over.
pub fn longest_circular_run(indices: &[usize], n: usize) -> (CircularRun, Vec<usize>) {
    let mut member = vec![false; n];
    for &i in indices {
        member[i] = true;
    }
    if member.iter().all(|&m| m) {
        return (CircularRun { start: 0, len: n }, Vec::new());
    }
    let mut best = CircularRun { start: 0, len: 0 };
    for start in 0..n {
        if !member[start] || member[(start + n - 1) % n] {
            continue;
        }
        let mut len = 0;
        while member[(start + len) % n] {
            len += 1;
        }
        if len > best.len || (len == best.len && start < best.start) {
            best = CircularRun { start, len };
        }
    }
    let mut rest: Vec<usize> = indices
        .iter()
        .copied()
        .filter(|&i| !best.contains(i, n))
        .collect();
    rest.sort_unstable();
    rest.dedup();
    (best, rest)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    #[serde(flatten)]
    pub run: CircularRun,
    pub cohesiveness: f64,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.run.len
    }

    pub fn is_empty(&self) -> bool {
        self.run.len == 0
    }

    pub fn members(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.run.members(n)
    }
}

/// Clusters in extraction order plus the nodes left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: usize,
    pub clusters: Vec<Cluster>,
    /// Sorted ascending.
    pub unassigned: Vec<usize>,
}

impl Decomposition {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            clusters: Vec::new(),
            unassigned: (0..n).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Label per node: `0` unassigned, `c + 1` for cluster `c`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (c, cl) in self.clusters.iter().enumerate() {
            for i in cl.members(self.n) {
                labels[i] = c + 1;
            }
        }
        labels
    }

    /// Moves cluster `idx` into the unassigned set.
    pub fn dissolve(&mut self, idx: usize) {
        let cl = self.clusters.remove(idx);
        self.unassigned.extend(cl.members(self.n));
        self.unassigned.sort_unstable();
    }
}

/// Uniform-`1/N_c` cohesiveness of `members` under `d`.
pub fn cohesiveness(d: &DiffusionMatrix, members: &[usize]) -> f64 {
    let nc = members.len() as f64;
    let total: f64 = members
        .iter()
        .map(|&i| members.iter().map(|&j| d.get(i, j) as f64).sum::<f64>())
        .sum();
    total / (nc * nc)
}

/// Peels off sequentially constrained dominant sets until every node is in
/// a cluster or unassigned.
pub fn extract_all(d: &DiffusionMatrix) -> Decomposition {
    extract_all_with(d, &ReplicatorOptions::default())
}

pub fn extract_all_with(d: &DiffusionMatrix, opts: &ReplicatorOptions) -> Decomposition {
    let n = d.dim();
    let mut active: Vec<usize> = (0..n).collect();
    let mut clusters = Vec::new();
    let mut unassigned = Vec::new();
    while !active.is_empty() {
        let w = Weights::principal(d, &active);
        let m = active.len();
        let found = replicator_run(&w, &ParticipationVector::uniform(m), opts)
            .and_then(|eq| support(&eq.x, default_support_eps(m)));
        let local = match found {
            Ok(s) => s,
            Err(_) => {
                unassigned.extend_from_slice(&active);
                break;
            }
        };
        let nodes: Vec<usize> = local.iter().map(|&a| active[a]).collect();
        let (run, _rejected) = longest_circular_run(&nodes, n);
        let members: Vec<usize> = run.members(n).collect();
        if run.len >= MIN_CLUSTER_SIZE {
            clusters.push(Cluster {
                run,
                cohesiveness: cohesiveness(d, &members),
            });
        } else {
            unassigned.extend_from_slice(&members);
        }
        active.retain(|&i| !run.contains(i, n));
    }
    unassigned.sort_unstable();
    Decomposition {
        n,
        clusters,
        unassigned,
    }
}
