//! Ammann-Beenker patches by silver-ratio substitution.
//!
//! Tiles are 45° rhombs and half-squares (isosceles right triangles). Each
//! step scales the plane by λ = 1 + √2 and dissects every scaled tile into
//! unit tiles, so edge lengths stay exactly 1 and coordinates stay in Z[ζ₈].
//!
//! A scaled unit edge (length λ) splits into a unit segment and a half-square
//! hypotenuse (length √2). Which end carries the unit segment is the edge's
//! marking. Rhombs carry it at both acute corners. Half-squares carry it at
//! the right angle on one leg (`near`) and at the far end of the other leg
//! (`far`), which makes them chiral.

use super::cyclotomic::Z8;
use super::{ExactGraph, Family, GenerationParams, LatticePatch, DEDUP_TOLERANCE};
use crate::error::{Error, Result};

/// Memory guard; iteration 6 already has about 650k vertices.
pub const MAX_AMMANN_BEENKER_ITERATIONS: usize = 6;

/// Rhomb with an acute corner at `origin` and sides along `unit(a)`, `unit(b)`.
#[derive(Clone, Copy, Debug)]
struct Rhomb {
    origin: Z8,
    a: i32,
    b: i32,
}

/// Half-square with its right angle at `apex` and legs along `unit(near)`
/// and `unit(far)`.
#[derive(Clone, Copy, Debug)]
struct HalfSquare {
    apex: Z8,
    near: i32,
    far: i32,
}

#[derive(Default)]
struct Tiles {
    rhombs: Vec<Rhomb>,
    halves: Vec<HalfSquare>,
}

fn u(k: i32) -> Z8 {
    Z8::unit(k)
}

/// Eight rhombs around a central vertex, ringed by eight squares.
fn seed() -> Tiles {
    let mut t = Tiles::default();
    for k in 0..8 {
        t.rhombs.push(Rhomb {
            origin: Z8::ZERO,
            a: k,
            b: k + 1,
        });
        // The square at u(k) is cut along its diagonal from u(k) outward.
        let v = u(k);
        t.halves.push(HalfSquare {
            apex: v + u(k + 1),
            near: k + 5,
            far: k - 1,
        });
        t.halves.push(HalfSquare {
            apex: v + u(k - 1),
            near: k + 3,
            far: k + 1,
        });
    }
    t
}

fn substitute(tiles: &Tiles) -> Tiles {
    let lambda = Z8::SILVER;
    let mut out = Tiles {
        rhombs: Vec::with_capacity(3 * tiles.rhombs.len() + 2 * tiles.halves.len()),
        halves: Vec::with_capacity(4 * tiles.rhombs.len() + 3 * tiles.halves.len()),
    };
    for r in &tiles.rhombs {
        let s = if (r.b - r.a).rem_euclid(8) == 1 {
            1
        } else {
            -1
        };
        let i = r.a;
        let o = r.origin * lambda;
        let (a, c) = (u(i), u(i + s));
        let p = o + lambda * a;
        let q = o + lambda * (a + c);
        let y = q - a - c;
        out.rhombs.extend([
            Rhomb {
                origin: o,
                a: i,
                b: i + s,
            },
            Rhomb {
                origin: q,
                a: i + 4,
                b: i + s + 4,
            },
            Rhomb {
                origin: p,
                a: i + 3 * s,
                b: i + 2 * s,
            },
        ]);
        out.halves.extend([
            HalfSquare {
                apex: o + a + c,
                near: i + s + 4,
                far: i - s,
            },
            HalfSquare {
                apex: o + a + c,
                near: i + 4,
                far: i + 2 * s,
            },
            HalfSquare {
                apex: y,
                near: i,
                far: i + 2 * s + 4,
            },
            HalfSquare {
                apex: y,
                near: i + s,
                far: i + 3 * s,
            },
        ]);
    }
    for t in &tiles.halves {
        let h = if (t.far - t.near).rem_euclid(8) == 2 {
            1
        } else {
            -1
        };
        let pa = t.near;
        let c = t.apex * lambda;
        let a = u(pa);
        let d = u(pa + h);
        out.rhombs.extend([
            Rhomb {
                origin: c,
                a: pa,
                b: pa + h,
            },
            Rhomb {
                origin: c + d,
                a: pa + 3 * h,
                b: pa + 2 * h,
            },
        ]);
        out.halves.extend([
            HalfSquare {
                apex: c + d,
                near: pa + 3 * h,
                far: pa + h + 4,
            },
            HalfSquare {
                apex: c + a + d,
                near: pa + h + 4,
                far: pa - h,
            },
            HalfSquare {
                apex: c + d,
                near: pa + 2 * h,
                far: pa,
            },
        ]);
    }
    out
}

/// Builds the patch obtained by substituting the eight-fold seed
/// `iterations` times. Edges are rhomb sides and half-square legs; the
/// diagonal shared by two half-squares is not an edge.
pub fn build_ammann_beenker(iterations: usize) -> Result<LatticePatch> {
    if iterations > MAX_AMMANN_BEENKER_ITERATIONS {
        return Err(Error::ResourceLimit(format!(
            "Ammann-Beenker iterations {iterations} exceed cap {MAX_AMMANN_BEENKER_ITERATIONS}"
        )));
    }
    let mut tiles = seed();
    for _ in 0..iterations {
        tiles = substitute(&tiles);
    }
    let mut g = ExactGraph::new();
    for r in &tiles.rhombs {
        let corners = [
            r.origin,
            r.origin + u(r.a),
            r.origin + u(r.a) + u(r.b),
            r.origin + u(r.b),
        ];
        for k in 0..4 {
            g.edge(corners[k], corners[(k + 1) % 4]);
        }
    }
    for t in &tiles.halves {
        g.edge(t.apex, t.apex + u(t.near));
        g.edge(t.apex, t.apex + u(t.far));
    }
    let params = GenerationParams {
        size: None,
        iterations: Some(iterations),
        dedup_tolerance: DEDUP_TOLERANCE,
        seed_patch: "ab-eightfold-star".into(),
    };
    g.into_patch(Family::AmmannBeenker, params, Z8::to_xy)
}
