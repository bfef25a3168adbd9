//! Continuous-time quantum walks on square, Ammann-Beenker and Penrose
//! patches, with bond-disorder percolation ensembles.
//!
//! The crate is split along the simulation pipeline:
//!
//! - [`lattice`] builds finite patches (exact substitution arithmetic for the
//!   quasicrystals), hop-distance zones and vertex classes.
//! - [`spectral`] forms the Laplacian Hamiltonian `H = γ(D − A)` and applies
//!   `exp(−iHt)` with a Chebyshev expansion, validated against a dense
//!   eigendecomposition.
//! - [`percolation`] removes random edge fractions, runs walks and aggregates
//!   seeded ensembles into escape-mass time series and fraction sweeps.

pub mod error;
pub mod lattice;
pub mod percolation;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{Family, LatticePatch};
pub use spectral::{Hamiltonian, WaveState};
