//! Exact coordinates for the quasicrystal generators.
//!
//! Every vertex of an Ammann-Beenker patch lies in the ring Z[ζ₈] and every
//! vertex of a Penrose patch in Z[ω₅]. Both rings are free Z-modules of rank
//! four, so a point is stored as four integer coefficients and deduplication
//! is exact hashing. The inflation factors (1+√2 and φ) are units in their
//! rings, so scaling by them and by their inverses never leaves the ring.

use std::ops::{Add, Mul, Neg, Sub};

/// `c₀ + c₁ζ + c₂ζ² + c₃ζ³` with `ζ = exp(iπ/4)` and `ζ⁴ = −1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z8(pub [i64; 4]);

/// `c₀ + c₁ω + c₂ω² + c₃ω³` with `ω = exp(2πi/5)` and `1 + ω + ω² + ω³ + ω⁴ = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z5(pub [i64; 4]);

fn poly_mul(a: &[i64; 4], b: &[i64; 4]) -> [i64; 7] {
    let mut p = [0i64; 7];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    p
}

fn coords(c: &[i64; 4], step: f64) -> (f64, f64) {
    let mut x = 0.0;
    let mut y = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        if ck != 0 {
            let (s, co) = (step * k as f64).sin_cos();
            x += ck as f64 * co;
            y += ck as f64 * s;
        }
    }
    (x, y)
}

macro_rules! ring_ops {
    ($t:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                let mut c = self.0;
                for (ci, oi) in c.iter_mut().zip(o.0) {
                    *ci += oi;
                }
                $t(c)
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self + (-o)
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.map(|c| -c))
            }
        }

        impl $t {
            pub const ZERO: $t = $t([0; 4]);
            pub const ONE: $t = $t([1, 0, 0, 0]);

            pub fn pow(self, n: usize) -> $t {
                (0..n).fold($t::ONE, |acc, _| acc * self)
            }
        }
    };
}

ring_ops!(Z8);
ring_ops!(Z5);

impl Mul for Z8 {
    type Output = Z8;
    fn mul(self, o: Z8) -> Z8 {
        let p = poly_mul(&self.0, &o.0);
        Z8([p[0] - p[4], p[1] - p[5], p[2] - p[6], p[3]])
    }
}

impl Mul for Z5 {
    type Output = Z5;
    fn mul(self, o: Z5) -> Z5 {
        let p = poly_mul(&self.0, &o.0);
        // ω⁵ = 1 folds degrees 5 and 6 down, then ω⁴ = −(1 + ω + ω² + ω³).
        let q = [p[0] + p[5], p[1] + p[6], p[2], p[3], p[4]];
        Z5([q[0] - q[4], q[1] - q[4], q[2] - q[4], q[3] - q[4]])
    }
}

impl Z8 {
    /// The silver ratio 1 + √2 = 1 + ζ − ζ³.
    pub const SILVER: Z8 = Z8([1, 1, 0, -1]);
    /// √2 − 1, the inverse of [`Z8::SILVER`].
    pub const SILVER_INV: Z8 = Z8([-1, 1, 0, -1]);
    /// √2 = ζ − ζ³.
    pub const SQRT2: Z8 = Z8([0, 1, 0, -1]);

    /// Unit vector at `k · 45°`.
    pub fn unit(k: i32) -> Z8 {
        let k = k.rem_euclid(8) as usize;
        let mut c = [0; 4];
        if k < 4 {
            c[k] = 1;
        } else {
            c[k - 4] = -1;
        }
        Z8(c)
    }

    pub fn to_xy(self) -> (f64, f64) {
        coords(&self.0, std::f64::consts::FRAC_PI_4)
    }
}

impl Z5 {
    /// The golden ratio φ = −ω² − ω³.
    pub const GOLDEN: Z5 = Z5([0, 0, -1, -1]);
    /// 1/φ = φ − 1.
    pub const GOLDEN_INV: Z5 = Z5([-1, 0, -1, -1]);

    /// Unit vector at `k · 36°`, i.e. `exp(iπ/5)ᵏ = (−ω³)ᵏ`.
    pub fn unit(k: i32) -> Z5 {
        let k = k.rem_euclid(10);
        let power = (3 * k).rem_euclid(5) as usize;
        let omega_pow = if power < 4 {
            let mut c = [0; 4];
            c[power] = 1;
            Z5(c)
        } else {
            Z5([-1, -1, -1, -1])
        };
        if k % 2 == 0 {
            omega_pow
        } else {
            -omega_pow
        }
    }

    pub fn to_xy(self) -> (f64, f64) {
        coords(&self.0, 2.0 * std::f64::consts::PI / 5.0)
    }
}
