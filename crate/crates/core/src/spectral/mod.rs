//! Laplacian Hamiltonians and continuous-time quantum walk propagation.
//!
//! With ħ = 1, a state evolves as `ψ(t) = exp(−iHt) ψ(0)` where
//! `H = γ(D − A)`. Propagation uses a Chebyshev expansion by default; the
//! dense eigendecomposition in [`dense`] is the reference it is checked
//! against.

mod chebyshev;
pub mod dense;

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticePatch;

pub use chebyshev::{bessel_j_sequence, ChebyshevPropagator};
pub use dense::{dense_propagator, unitarity_defect, DenseSpectrum, DEFAULT_DENSE_CAP};

/// Tolerance on `‖ψ‖² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Sparse `γ(D − A)` over a vertex set.
///
/// Neighbor lists are sorted, so every product is evaluated in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    gamma: f64,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

/// Builds `γ(D − A)` for the graph on `num_vertices` vertices with the
/// given undirected edges. Isolated vertices get all-zero rows.
pub fn laplacian(num_vertices: usize, edges: &[(usize, usize)], gamma: f64) -> Result<Hamiltonian> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(
            "gamma",
            format!("must be a positive finite rate, got {gamma}"),
        ));
    }
    let mut lists = vec![Vec::new(); num_vertices];
    for &(a, b) in edges {
        if a >= num_vertices || b >= num_vertices || a == b {
            return Err(Error::invalid(
                "edges",
                format!("bad edge ({a}, {b}) for {num_vertices} vertices"),
            ));
        }
        lists[a].push(b);
        lists[b].push(a);
    }
    let mut offsets = Vec::with_capacity(num_vertices + 1);
    let mut neighbors = Vec::with_capacity(2 * edges.len());
    offsets.push(0);
    for mut nb in lists {
        nb.sort_unstable();
        let before = nb.len();
        nb.dedup();
        if nb.len() != before {
            return Err(Error::invalid("edges", "repeated edge"));
        }
        neighbors.extend(nb);
        offsets.push(neighbors.len());
    }
    Ok(Hamiltonian {
        gamma,
        offsets,
        neighbors,
    })
}

impl Hamiltonian {
    pub fn from_patch(patch: &LatticePatch, gamma: f64) -> Result<Self> {
        laplacian(patch.len(), patch.edges(), gamma)
    }

    pub fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn row_neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.dim()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Matrix entry `H[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.gamma * self.degree(i) as f64
        } else if self.row_neighbors(i).binary_search(&j).is_ok() {
            -self.gamma
        } else {
            0.0
        }
    }

    /// Gershgorin upper bound on the spectrum, `2γ · max degree`.
    pub fn spectral_bound(&self) -> f64 {
        2.0 * self.gamma * self.max_degree() as f64
    }

    /// `out = (H − shift) · x · scale`.
    pub(crate) fn apply_shifted(
        &self,
        x: &[Complex64],
        out: &mut [Complex64],
        shift: f64,
        scale: f64,
    ) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &j in self.row_neighbors(i) {
                acc += x[j];
            }
            let diag = self.gamma * self.degree(i) as f64 - shift;
            *o = (x[i] * diag - acc * self.gamma) * scale;
        }
    }

    /// `H · x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        self.apply_shifted(x, &mut out, 0.0, 1.0);
        out
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

/// Normalized amplitude vector over vertices at a given time (units of 1/γ).
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl WaveState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `|amplitude|²` per vertex.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }
}

/// The walker sits entirely on `origin` at time zero.
pub fn localized_state(dim: usize, origin: usize) -> Result<WaveState> {
    if origin >= dim {
        return Err(Error::invalid(
            "origin",
            format!("vertex {origin} outside dimension {dim}"),
        ));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[origin] = Complex64::new(1.0, 0.0);
    Ok(WaveState {
        amplitudes,
        time: 0.0,
    })
}

pub fn probabilities(psi: &WaveState) -> Vec<f64> {
    psi.probabilities()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Chebyshev,
    Dense,
}

/// `exp(−iH·dt) ψ` via the Chebyshev expansion.
pub fn evolve(h: &Hamiltonian, psi: &WaveState, dt: f64) -> Result<WaveState> {
    evolve_with(h, psi, dt, Backend::Chebyshev)
}

pub fn evolve_with(
    h: &Hamiltonian,
    psi: &WaveState,
    dt: f64,
    backend: Backend,
) -> Result<WaveState> {
    if psi.dim() != h.dim() {
        return Err(Error::invalid(
            "psi",
            format!("dimension {} vs Hamiltonian {}", psi.dim(), h.dim()),
        ));
    }
    match backend {
        Backend::Chebyshev => ChebyshevPropagator::new(h, dt)?.apply(psi),
        Backend::Dense => Ok(DenseSpectrum::new(h)?.evolve(psi, dt)),
    }
}

/// Writes `vertex_id,x,y,probability`, one row per vertex.
pub fn write_distribution_csv<W: Write>(
    mut w: W,
    patch: &LatticePatch,
    probs: &[f64],
) -> Result<()> {
    if probs.len() != patch.len() {
        return Err(Error::invalid(
            "probabilities",
            "length differs from vertex count",
        ));
    }
    writeln!(w, "vertex_id,x,y,probability")?;
    for (v, (p, [x, y])) in probs.iter().zip(patch.positions()).enumerate() {
        writeln!(w, "{v},{x},{y},{p:.15e}")?;
    }
    Ok(())
}
