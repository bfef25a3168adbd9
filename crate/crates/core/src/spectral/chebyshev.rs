//! Chebyshev expansion of `exp(−iHt)`.
//!
//! With the spectrum of `H` inside `[0, E]` (Gershgorin), write
//! `H = c + r·H̃` with `c = r = E/2`, so `H̃` has spectrum in `[−1, 1]` and
//!
//! ```text
//! exp(−iHt) = exp(−ict) · Σₖ (2 − δₖ₀) (−i)ᵏ Jₖ(rt) Tₖ(H̃)
//! ```
//!
//! The Bessel coefficients decay super-exponentially once `k > rt`, so the
//! series is cut where they drop below [`COEFFICIENT_FLOOR`]. Long steps are
//! split so `rt` stays at most [`MAX_STEP_ARGUMENT`].

use num_complex::Complex64;

use super::{Hamiltonian, WaveState};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped.
pub const COEFFICIENT_FLOOR: f64 = 1e-20;
/// Largest Bessel argument handled in one sub-step.
pub const MAX_STEP_ARGUMENT: f64 = 100.0;
/// Per-application tolerance on norm drift.
const STEP_NORM_TOLERANCE: f64 = 1e-12;

/// `J₀(x) … J_K(x)` for `x ≥ 0`, truncated once terms fall below
/// [`COEFFICIENT_FLOOR`], computed by Miller's downward recurrence and
/// normalized with `J₀ + 2ΣJ₂ₖ = 1`.
///
/// Fails if the identity `J₀² + 2ΣJₖ² = 1` is violated by more than 1e-13.
pub fn bessel_j_sequence(x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::invalid(
            "x",
            format!("Bessel argument must be finite and >= 0, got {x}"),
        ));
    }
    if x == 0.0 {
        return Ok(vec![1.0]);
    }
    let mut start = (x + 30.0 + 25.0 * x.cbrt()).ceil() as usize;
    start += start % 2;
    let mut j = vec![0.0f64; start + 2];
    j[start] = 1.0;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in &mut j[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    for v in &mut j {
        *v /= norm;
    }
    let last = j
        .iter()
        .rposition(|v| v.abs() > COEFFICIENT_FLOOR)
        .unwrap_or(0);
    if start - last < 10 {
        return Err(Error::Accuracy(format!(
            "Bessel recurrence start {start} too close to cutoff {last}"
        )));
    }
    j.truncate(last + 1);
    let sum_sq = j[0] * j[0] + 2.0 * j.iter().skip(1).map(|v| v * v).sum::<f64>();
    if (sum_sq - 1.0).abs() > 1e-13 {
        return Err(Error::Accuracy(format!(
            "Bessel sum rule off by {:e} at x = {x}",
            sum_sq - 1.0
        )));
    }
    Ok(j)
}

/// Precomputed expansion of `exp(−iH·dt)` for repeated application.
#[derive(Clone, Debug)]
pub struct ChebyshevPropagator<'h> {
    h: &'h Hamiltonian,
    dt: f64,
    substeps: usize,
    center: f64,
    half_width: f64,
    coefficients: Vec<Complex64>,
    phase: Complex64,
}

impl<'h> ChebyshevPropagator<'h> {
    pub fn new(h: &'h Hamiltonian, dt: f64) -> Result<Self> {
        if !dt.is_finite() {
            return Err(Error::invalid(
                "dt",
                format!("time step must be finite, got {dt}"),
            ));
        }
        let half_width = h.spectral_bound() / 2.0;
        let center = half_width;
        let reach = half_width * dt.abs();
        let substeps = ((reach / MAX_STEP_ARGUMENT).ceil() as usize).max(1);
        let step = dt / substeps as f64;
        let bessel = bessel_j_sequence(half_width * step.abs())?;
        // (−i·sign(dt))ᵏ, since Jₖ(−x) = (−1)ᵏ Jₖ(x).
        let rot = Complex64::new(0.0, -step.signum());
        let mut power = Complex64::new(1.0, 0.0);
        let coefficients = bessel
            .iter()
            .enumerate()
            .map(|(k, &jk)| {
                let c = power * jk * if k == 0 { 1.0 } else { 2.0 };
                power *= rot;
                c
            })
            .collect();
        let phase = Complex64::from_polar(1.0, -center * step);
        Ok(Self {
            h,
            dt,
            substeps,
            center,
            half_width,
            coefficients,
            phase,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of `H̃` products per application.
    pub fn matvecs(&self) -> usize {
        self.substeps * self.coefficients.len().saturating_sub(1)
    }

    pub fn apply(&self, psi: &WaveState) -> Result<WaveState> {
        let mut amps = psi.amplitudes.clone();
        let before = psi.norm_sqr();
        if self.half_width > 0.0 {
            for _ in 0..self.substeps {
                amps = self.step(&amps);
            }
        }
        let out = WaveState {
            amplitudes: amps,
            time: psi.time + self.dt,
        };
        let drift = (out.norm_sqr() - before).abs();
        if drift > STEP_NORM_TOLERANCE * self.substeps as f64 {
            return Err(Error::Accuracy(format!(
                "Chebyshev step drifted norm by {drift:e}"
            )));
        }
        Ok(out)
    }

    fn step(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = psi.len();
        let zero = Complex64::new(0.0, 0.0);
        let inv = 1.0 / self.half_width;
        let mut acc: Vec<Complex64> = psi.iter().map(|&z| z * self.coefficients[0]).collect();
        if self.coefficients.len() > 1 {
            let mut prev = psi.to_vec();
            let mut cur = vec![zero; n];
            self.h.apply_shifted(&prev, &mut cur, self.center, inv);
            let mut next = vec![zero; n];
            for (a, &t) in acc.iter_mut().zip(&cur) {
                *a += t * self.coefficients[1];
            }
            for &ck in &self.coefficients[2..] {
                // T_{k+1} = 2 H̃ T_k − T_{k−1}
                self.h
                    .apply_shifted(&cur, &mut next, self.center, 2.0 * inv);
                for ((nx, &pv), a) in next.iter_mut().zip(&prev).zip(acc.iter_mut()) {
                    *nx -= pv;
                    *a += *nx * ck;
                }
                std::mem::swap(&mut prev, &mut cur);
                std::mem::swap(&mut cur, &mut next);
            }
        }
        for a in &mut acc {
            *a *= self.phase;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series for Jₖ(x), fine for small arguments.
    fn bessel_series(k: usize, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(k as i32) / (1..=k).map(|i| i as f64).product::<f64>();
        let mut sum = term;
        for m in 1..60 {
            term *= -(x * x / 4.0) / (m as f64 * (m + k) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        for &x in &[0.1, 1.0, 2.5, 7.0] {
            let j = bessel_j_sequence(x).unwrap();
            for k in 0..12 {
                let got = j.get(k).copied().unwrap_or(0.0);
                assert!((got - bessel_series(k, x)).abs() < 1e-13, "J_{k}({x})");
            }
        }
    }

    #[test]
    fn known_values_at_large_argument() {
        // J₀(100) and J₁(100) from standard tables.
        let j = bessel_j_sequence(100.0).unwrap();
        assert!((j[0] - 0.019_985_850_304_223_122).abs() < 1e-13);
        assert!((j[1] - (-0.077_145_352_014_112_16)).abs() < 1e-13);
        assert!(j.len() > 100);
    }

    #[test]
    fn zero_argument_and_bad_input() {
        assert_eq!(bessel_j_sequence(0.0).unwrap(), vec![1.0]);
        assert!(bessel_j_sequence(-1.0).is_err());
        assert!(bessel_j_sequence(f64::NAN).is_err());
    }
}
