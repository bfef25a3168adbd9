//! Penrose rhomb patches by Robinson-triangle subdivision.
//!
//! Each rhomb is carried as two mirror-image half-rhomb triangles: thin
//! halves (36°-72°-72°) and thick halves (108°-36°-36°). A triangle `(a, b, c)`
//! has its rhomb sides on `c–a` and `a–b`; `b–c` is the rhomb diagonal.
//! Points stay in Z[ω₅] and the final patch is scaled by φᵏ so edges have
//! unit length.

use super::cyclotomic::Z5;
use super::{ExactGraph, Family, GenerationParams, LatticePatch, DEDUP_TOLERANCE};
use crate::error::{Error, Result};

/// Memory guard; iteration 11 has roughly 230k vertices.
pub const MAX_PENROSE_ITERATIONS: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Half {
    Thin,
    Thick,
}

#[derive(Clone, Copy, Debug)]
struct Triangle {
    kind: Half,
    a: Z5,
    b: Z5,
    c: Z5,
}

/// Five thick rhombs with their acute corners at the origin.
fn sun() -> Vec<Triangle> {
    let mut out = Vec::with_capacity(10);
    for k in 0..5 {
        let left = Z5::unit(2 * k - 1);
        let right = Z5::unit(2 * k + 1);
        let tip = left + right;
        for side in [left, right] {
            out.push(Triangle {
                kind: Half::Thick,
                a: side,
                b: tip,
                c: Z5::ZERO,
            });
        }
    }
    out
}

fn subdivide(tris: &[Triangle]) -> Vec<Triangle> {
    let inv = Z5::GOLDEN_INV;
    let mut out = Vec::with_capacity(tris.len() * 3);
    for t in tris {
        let Triangle { a, b, c, .. } = *t;
        match t.kind {
            Half::Thin => {
                let p = a + (b - a) * inv;
                out.push(Triangle {
                    kind: Half::Thin,
                    a: c,
                    b: p,
                    c: b,
                });
                out.push(Triangle {
                    kind: Half::Thick,
                    a: p,
                    b: c,
                    c: a,
                });
            }
            Half::Thick => {
                let q = b + (a - b) * inv;
                let r = b + (c - b) * inv;
                out.push(Triangle {
                    kind: Half::Thick,
                    a: r,
                    b: c,
                    c: a,
                });
                out.push(Triangle {
                    kind: Half::Thick,
                    a: q,
                    b: r,
                    c: b,
                });
                out.push(Triangle {
                    kind: Half::Thin,
                    a: r,
                    b: q,
                    c: a,
                });
            }
        }
    }
    out
}

/// Builds the patch obtained by subdividing the five-rhomb sun
/// `iterations` times, rescaled to unit edge length.
pub fn build_penrose(iterations: usize) -> Result<LatticePatch> {
    if iterations > MAX_PENROSE_ITERATIONS {
        return Err(Error::ResourceLimit(format!(
            "Penrose iterations {iterations} exceed cap {MAX_PENROSE_ITERATIONS}"
        )));
    }
    let mut tris = sun();
    for _ in 0..iterations {
        tris = subdivide(&tris);
    }
    let scale = Z5::GOLDEN.pow(iterations);
    let mut g = ExactGraph::new();
    for t in &tris {
        let (a, b, c) = (t.a * scale, t.b * scale, t.c * scale);
        g.edge(c, a);
        g.edge(a, b);
    }
    let params = GenerationParams {
        size: None,
        iterations: Some(iterations),
        dedup_tolerance: DEDUP_TOLERANCE,
        seed_patch: "penrose-sun".into(),
    };
    g.into_patch(Family::Penrose, params, Z5::to_xy)
}
