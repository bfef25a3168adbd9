use serde::{Deserialize, Serialize};

use super::{LatticePatch, SpatialIndex, DEDUP_TOLERANCE};

/// Local environment of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexClass {
    pub label: String,
    pub degree: usize,
    /// Angles between consecutive incident edges in degrees, sorted ascending.
    pub star_signature: Vec<u32>,
    pub interior: bool,
}

/// Labels every vertex by its star of incident edges.
///
/// A vertex is interior when every angular sector between consecutive edges
/// is closed by a rhomb (or square) face present in the patch. Interior
/// labels look like `AB:d5:s(45,45,90,90,90)`; everything else is
/// `boundary:<degree>`.
pub fn classify_vertices(patch: &LatticePatch) -> Vec<VertexClass> {
    let family = patch.family();
    let unit = family.angle_unit();
    let slots = (360 / unit) as i64;
    let index = SpatialIndex::new(patch.positions(), 0.5);
    let pos = patch.positions();

    (0..patch.len())
        .map(|v| {
            let [vx, vy] = pos[v];
            let mut star: Vec<(i64, usize)> = patch
                .neighbors(v)
                .iter()
                .map(|&w| {
                    let deg = (pos[w][1] - vy).atan2(pos[w][0] - vx).to_degrees();
                    ((deg / unit as f64).round() as i64).rem_euclid(slots)
                })
                .zip(patch.neighbors(v).iter().copied())
                .collect();
            star.sort_unstable();
            let degree = star.len();
            let mut gaps = Vec::with_capacity(degree);
            let mut closed = degree >= 3;
            for k in 0..degree {
                let (d1, w1) = star[k];
                let (d2, w2) = star[(k + 1) % degree];
                let gap = (d2 - d1).rem_euclid(slots);
                let gap = if gap == 0 { slots } else { gap };
                gaps.push(gap as u32 * unit);
                if closed {
                    closed = 2 * gap < slots && {
                        let far = [pos[w1][0] + pos[w2][0] - vx, pos[w1][1] + pos[w2][1] - vy];
                        index
                            .find(far, DEDUP_TOLERANCE)
                            .is_some_and(|f| patch.has_edge(f, w1) && patch.has_edge(f, w2))
                    };
                }
            }
            gaps.sort_unstable();
            let label = if closed {
                let s: Vec<String> = gaps.iter().map(u32::to_string).collect();
                format!("{}:d{}:s({})", family.tag(), degree, s.join(","))
            } else {
                format!("boundary:{degree}")
            };
            VertexClass {
                label,
                degree,
                star_signature: gaps,
                interior: closed,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_square;

    #[test]
    fn three_by_three_square() {
        let p = build_square(3).unwrap();
        let classes = classify_vertices(&p);
        assert_eq!(classes[4].label, "SQ:d4:s(90,90,90,90)");
        assert!(classes[4].interior);
        for corner in [0, 2, 6, 8] {
            assert_eq!(classes[corner].label, "boundary:2");
            assert_eq!(classes[corner].degree, 2);
        }
        assert_eq!(classes[1].label, "boundary:3");
    }

    #[test]
    fn degree_matches_signature_length() {
        let p = build_square(6).unwrap();
        for c in classify_vertices(&p) {
            assert_eq!(c.degree, c.star_signature.len());
            assert_eq!(c.star_signature.iter().sum::<u32>(), 360);
        }
    }
}
