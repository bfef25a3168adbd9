use std::collections::VecDeque;

use super::LatticePatch;
use crate::error::{Error, Result};

/// Breadth-first hop counts from `origin`; `None` for unreachable vertices.
///
/// # Panics
///
/// If `origin` is not a vertex of the patch.
pub fn hop_distances(patch: &LatticePatch, origin: usize) -> Vec<Option<usize>> {
    assert!(
        origin < patch.len(),
        "origin {origin} outside patch of {} vertices",
        patch.len()
    );
    let mut dist = vec![None; patch.len()];
    dist[origin] = Some(0);
    let mut queue = VecDeque::from([origin]);
    while let Some(v) = queue.pop_front() {
        let next = dist[v].map(|d| d + 1);
        for &w in patch.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices within a hop radius of an origin on the pristine patch.
///
/// Membership is fixed at construction; later edge removal does not touch it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopZone {
    origin: usize,
    radius: usize,
    inside: Vec<bool>,
}

impl HopZone {
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn contains(&self, v: usize) -> bool {
        self.inside[v]
    }

    pub fn membership(&self) -> &[bool] {
        &self.inside
    }

    pub fn inside_count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }
}

pub fn make_zone(patch: &LatticePatch, origin: usize, radius: i64) -> Result<HopZone> {
    if radius < 0 {
        return Err(Error::invalid(
            "zone_radius",
            format!("must be >= 0, got {radius}"),
        ));
    }
    if origin >= patch.len() {
        return Err(Error::invalid(
            "origin",
            format!("vertex {origin} not in patch of {}", patch.len()),
        ));
    }
    let radius = radius as usize;
    let inside = hop_distances(patch, origin)
        .into_iter()
        .map(|d| d.is_some_and(|d| d <= radius))
        .collect();
    Ok(HopZone {
        origin,
        radius,
        inside,
    })
}

/// Vertex closest to the centroid of all positions; near-ties (within 1e-9)
/// go to the lowest id.
pub fn center_vertex(patch: &LatticePatch) -> Result<usize> {
    if patch.is_empty() {
        return Err(Error::invalid("patch", "empty patch has no center"));
    }
    let n = patch.len() as f64;
    let (sx, sy) = patch
        .positions()
        .iter()
        .fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
    let (cx, cy) = (sx / n, sy / n);
    let mut best = (f64::INFINITY, 0);
    for (v, p) in patch.positions().iter().enumerate() {
        let d = (p[0] - cx).hypot(p[1] - cy);
        if d < best.0 - 1e-9 {
            best = (d, v);
        }
    }
    Ok(best.1)
}
