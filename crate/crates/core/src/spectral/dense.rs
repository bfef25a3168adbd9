//! Exact propagation by full symmetric eigendecomposition, `U = V·exp(−iΛt)·Vᵀ`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{Hamiltonian, WaveState};
use crate::error::{Error, Result};

/// Largest dimension the dense path accepts by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Eigendecomposition of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl DenseSpectrum {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        Self::with_cap(h, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(h: &Hamiltonian, cap: usize) -> Result<Self> {
        if h.dim() > cap {
            return Err(Error::ResourceLimit(format!(
                "dense propagation of dimension {} exceeds cap {cap}",
                h.dim()
            )));
        }
        let eig = SymmetricEigen::new(h.to_dense());
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        let v = self.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let mut scaled = v.clone();
        for (mut col, &lambda) in scaled.column_iter_mut().zip(self.eigenvalues.iter()) {
            col *= Complex64::from_polar(1.0, -lambda * t);
        }
        scaled * v.transpose()
    }

    pub fn evolve(&self, psi: &WaveState, t: f64) -> WaveState {
        let v = &self.eigenvectors;
        let re = DVector::from_iterator(psi.dim(), psi.amplitudes.iter().map(|z| z.re));
        let im = DVector::from_iterator(psi.dim(), psi.amplitudes.iter().map(|z| z.im));
        let (pr, pi) = (v.tr_mul(&re), v.tr_mul(&im));
        let coeffs: Vec<Complex64> = pr
            .iter()
            .zip(pi.iter())
            .zip(self.eigenvalues.iter())
            .map(|((&a, &b), &lambda)| {
                Complex64::new(a, b) * Complex64::from_polar(1.0, -lambda * t)
            })
            .collect();
        let cr = DVector::from_iterator(coeffs.len(), coeffs.iter().map(|z| z.re));
        let ci = DVector::from_iterator(coeffs.len(), coeffs.iter().map(|z| z.im));
        let (outr, outi) = (v * cr, v * ci);
        let amplitudes = outr
            .iter()
            .zip(outi.iter())
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        WaveState {
            amplitudes,
            time: psi.time + t,
        }
    }
}

/// Full `N × N` propagator `exp(−iHt)`; dimension capped at [`DEFAULT_DENSE_CAP`].
pub fn dense_propagator(h: &Hamiltonian, t: f64) -> Result<DMatrix<Complex64>> {
    Ok(DenseSpectrum::new(h)?.propagator(t))
}

/// Largest `|(U†U − I)ᵢⱼ|`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}
