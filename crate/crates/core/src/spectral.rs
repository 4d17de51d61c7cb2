//! Perron-Frobenius eigenvalue of dense nonnegative matrices.
//!
//! The matrix is split into irreducible blocks and each block is solved by
//! power iteration on the shifted matrix `B + σI` with L1-normalised iterates,
//! starting from the uniform vector. Shifting by a positive multiple of the
//! identity moves the dominant eigenvalue of an irreducible nonnegative matrix
//! strictly ahead of every other eigenvalue on its circle, so periodic blocks
//! (bipartite cycles, for instance) converge instead of oscillating. The
//! reported radius is the dominant eigenvalue of the shifted block minus `σ`.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};

/// Dense square matrix with nonnegative entries and one label per row/column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonnegativeMatrix {
    dim: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

impl NonnegativeMatrix {
    pub fn zeros(labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        Self::check_labels(&labels)?;
        Ok(NonnegativeMatrix {
            dim,
            entries: vec![0.0; dim * dim],
            labels,
        })
    }

    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        let mut m = Self::zeros(labels)?;
        if rows.len() != m.dim || rows.iter().any(|r| r.len() != m.dim) {
            return Err(Error::InvalidArgument(format!(
                "matrix must be {0}x{0} to match its labels",
                m.dim
            )));
        }
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) = {v} is not a finite nonnegative number"
                    )));
                }
                m.entries[i * m.dim + j] = v;
            }
        }
        Ok(m)
    }

    /// Rows with numeric labels `0..n`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(rows, labels)
    }

    fn check_labels(labels: &[String]) -> Result<()> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("duplicate matrix label {}", w[0])));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] += v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// `c · self`, for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor {c} must be finite and nonnegative"
            )));
        }
        let mut m = self.clone();
        m.entries.iter_mut().for_each(|v| *v *= c);
        Ok(m)
    }

    /// `self + c·I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.entries[i * self.dim + i] += c;
        }
        m
    }

    /// `Pᵀ M P` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.dim;
        let mut m = self.clone();
        for i in 0..n {
            m.labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                m.entries[perm[i] * n + perm[j]] = self.entries[i * n + j];
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub radius: f64,
    pub iterations: u64,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Error)]
#[error("power iteration stopped at residual {:.3e} after {} iterations", .0.residual, .0.iterations)]
pub struct NotConverged(pub SpectralResult);

impl From<NotConverged> for Error {
    fn from(e: NotConverged) -> Self {
        Error::NotConverged {
            component: 0,
            result: e.0,
        }
    }
}

/// Shift for the power iteration on an irreducible block: the geometric mean
/// of the smallest and the largest row sum, both of which bracket its
/// spectral radius, so the shifted eigenvalue stays on the radius' scale.
fn shift(rows: &[Vec<(usize, f64)>]) -> f64 {
    let sums = rows.iter().map(|r| r.iter().map(|&(_, v)| v).sum::<f64>());
    let (lo, hi) = sums.fold((f64::INFINITY, 0f64), |(lo, hi), s| (lo.min(s), hi.max(s)));
    (lo * hi).sqrt()
}

/// Irreducible blocks of the positive-entry graph that contain at least one
/// entry, as sparse rows indexed within the block.
fn irreducible_blocks(m: &NonnegativeMatrix) -> Vec<Vec<Vec<(usize, f64)>>> {
    let n = m.dim;
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) > 0.0 {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
    }
    let mut blocks = Vec::new();
    for comp in tarjan_scc(&g) {
        let mut states: Vec<usize> = comp.into_iter().map(NodeIndex::index).collect();
        states.sort_unstable();
        let rows: Vec<Vec<(usize, f64)>> = states
            .iter()
            .map(|&i| {
                states
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &j)| Some((k, m.get(i, j))).filter(|&(_, v)| v > 0.0))
                    .collect()
            })
            .collect();
        if rows.iter().any(|r| !r.is_empty()) {
            blocks.push(rows);
        }
    }
    blocks
}

/// Shifted power iteration on one irreducible block. Every iterate is
/// positive, so `min (Bx)ᵢ/xᵢ ≤ ρ(B) ≤ max (Bx)ᵢ/xᵢ`; the iteration stops when
/// this bracket is narrower than `tolerance · radius`.
fn block_radius(rows: &[Vec<(usize, f64)>], config: &SolverConfig) -> Result<SpectralResult, NotConverged> {
    let n = rows.len();
    let sigma = shift(rows);
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut result = SpectralResult {
        radius: 0.0,
        iterations: 0,
        residual: f64::INFINITY,
        converged: false,
    };
    for it in 1..=config.max_iterations {
        let (mut lo, mut hi) = (f64::INFINITY, 0f64);
        for (i, row) in rows.iter().enumerate() {
            y[i] = sigma * x[i] + row.iter().map(|&(j, v)| v * x[j]).sum::<f64>();
            let ratio = y[i] / x[i];
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        let mu: f64 = y.iter().sum();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / mu;
        }
        let radius = 0.5 * (lo + hi) - sigma;
        let residual = (hi - lo) / radius;
        result = SpectralResult {
            radius,
            iterations: it,
            residual,
            converged: residual <= config.tolerance,
        };
        if result.converged {
            return Ok(result);
        }
    }
    Err(NotConverged(result))
}

/// Spectral radius of `m` to relative accuracy `config.tolerance`: the
/// largest radius over the irreducible blocks of `m`.
///
/// A matrix without cycles (the all-zero matrix, strictly triangular ones)
/// has radius 0. When the iteration budget runs out on some block the partial
/// result is returned inside [`NotConverged`].
pub fn spectral_radius(m: &NonnegativeMatrix, config: &SolverConfig) -> Result<SpectralResult, NotConverged> {
    let mut total = SpectralResult {
        radius: 0.0,
        iterations: 0,
        residual: 0.0,
        converged: true,
    };
    for block in irreducible_blocks(m) {
        let r = block_radius(&block, config).map_err(|NotConverged(r)| {
            NotConverged(SpectralResult {
                iterations: total.iterations + r.iterations,
                ..r
            })
        })?;
        total.iterations += r.iterations;
        total.residual = total.residual.max(r.residual);
        total.radius = total.radius.max(r.radius);
    }
    Ok(total)
}

/// Radii of `m` and of `c · m`.
pub fn scale_check(m: &NonnegativeMatrix, c: f64, config: &SolverConfig) -> Result<(SpectralResult, SpectralResult)> {
    let base = spectral_radius(m, config)?;
    let scaled = spectral_radius(&m.scaled(c)?, config)?;
    Ok((base, scaled))
}
