//! Finite lattice patches and their graph-level properties.

mod ammann_beenker;
mod classify;
pub mod cyclotomic;
mod io;
mod penrose;
mod spatial;
mod zone;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ammann_beenker::{build_ammann_beenker, MAX_AMMANN_BEENKER_ITERATIONS};
pub use classify::{classify_vertices, VertexClass};
pub use io::PatchDocument;
pub use penrose::{build_penrose, MAX_PENROSE_ITERATIONS};
pub use spatial::SpatialIndex;
pub use zone::{center_vertex, hop_distances, make_zone, HopZone};

/// Distance below which two points are the same vertex, in edge lengths.
pub const DEDUP_TOLERANCE: f64 = 1e-6;

/// Largest side length accepted by [`build_square`].
pub const MAX_SQUARE_SIZE: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Square,
    AmmannBeenker,
    Penrose,
}

impl Family {
    /// Angular quantum of edge directions, in degrees.
    pub fn angle_unit(self) -> u32 {
        match self {
            Family::Square => 90,
            Family::AmmannBeenker => 45,
            Family::Penrose => 36,
        }
    }

    /// Short prefix used in vertex class labels.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Square => "SQ",
            Family::AmmannBeenker => "AB",
            Family::Penrose => "P",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Square => "square",
            Family::AmmannBeenker => "ammann-beenker",
            Family::Penrose => "penrose",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "square" | "sq" => Ok(Family::Square),
            "ammann-beenker" | "ammann_beenker" | "ab" => Ok(Family::AmmannBeenker),
            "penrose" | "p" => Ok(Family::Penrose),
            other => Err(Error::invalid(
                "family",
                format!("unknown lattice family {other:?}"),
            )),
        }
    }
}

/// How a patch was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    pub dedup_tolerance: f64,
    pub seed_patch: String,
}

impl GenerationParams {
    pub fn describe(&self) -> String {
        match (self.size, self.iterations) {
            (Some(n), _) => format!("size={n}"),
            (None, Some(k)) => format!("iterations={k}"),
            (None, None) => "imported".to_string(),
        }
    }
}

/// A finite graph with planar vertex positions in units of the edge length.
///
/// Vertex ids are dense (`0..len`), edges are stored once as `(i, j)` with
/// `i < j` in lexicographic order, and the adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePatch {
    family: Family,
    params: GenerationParams,
    positions: Vec<[f64; 2]>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl LatticePatch {
    /// Builds a patch from raw parts, normalizing the edge list.
    ///
    /// Rejects out-of-range ids, self-loops and repeated edges.
    pub fn new(
        family: Family,
        params: GenerationParams,
        positions: Vec<[f64; 2]>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = positions.len();
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::MalformedPatch(format!(
                    "edge ({a}, {b}) references a missing vertex"
                )));
            }
            if a == b {
                return Err(Error::MalformedPatch(format!("self-loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedPatch(format!("duplicate edge {:?}", w[0])));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &list {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(Self {
            family,
            params,
            positions,
            edges: list,
            adjacency,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &GenerationParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> [f64; 2] {
        self.positions[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency
            .get(a)
            .is_some_and(|nb| nb.binary_search(&b).is_ok())
    }

    pub fn edge_length(&self, (a, b): (usize, usize)) -> f64 {
        let [ax, ay] = self.positions[a];
        let [bx, by] = self.positions[b];
        (ax - bx).hypot(ay - by)
    }

    /// Whether every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        self.is_empty() || hop_distances(self, 0).iter().all(Option::is_some)
    }

    /// Measures the geometric invariants every generated patch must satisfy.
    pub fn geometry_report(&self) -> GeometryReport {
        let max_edge_length_error = self
            .edges
            .iter()
            .map(|&e| (self.edge_length(e) - 1.0).abs())
            .fold(0.0, f64::max);
        let index = SpatialIndex::new(&self.positions, 0.5);
        GeometryReport {
            max_edge_length_error,
            min_vertex_separation: index.min_separation(),
            connected: self.is_connected(),
        }
    }

    /// Fails unless edges have unit length, vertices are distinct and the
    /// graph is connected, all within [`DEDUP_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        let report = self.geometry_report();
        if report.max_edge_length_error >= DEDUP_TOLERANCE {
            return Err(Error::MalformedPatch(format!(
                "edge length deviates from 1 by {:e}",
                report.max_edge_length_error
            )));
        }
        if report.min_vertex_separation <= DEDUP_TOLERANCE {
            return Err(Error::MalformedPatch(format!(
                "vertices closer than tolerance ({:e})",
                report.min_vertex_separation
            )));
        }
        if !report.connected {
            return Err(Error::MalformedPatch("patch is not connected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryReport {
    pub max_edge_length_error: f64,
    /// Smallest distance between two vertices closer than 0.5, or infinity.
    pub min_vertex_separation: f64,
    pub connected: bool,
}

/// Builds an `n × n` grid with vertex `y·n + x` at `(x, y)`.
pub fn build_square(n: usize) -> Result<LatticePatch> {
    if n == 0 {
        return Err(Error::invalid("size", "square patch needs n >= 1"));
    }
    if n > MAX_SQUARE_SIZE {
        return Err(Error::ResourceLimit(format!(
            "square size {n} exceeds cap {MAX_SQUARE_SIZE}"
        )));
    }
    let id = |x: usize, y: usize| y * n + x;
    let positions = (0..n * n)
        .map(|v| [(v % n) as f64, (v / n) as f64])
        .collect();
    let mut edges = Vec::with_capacity(2 * n * (n - 1));
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < n {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let params = GenerationParams {
        size: Some(n),
        iterations: None,
        dedup_tolerance: DEDUP_TOLERANCE,
        seed_patch: "grid".into(),
    };
    LatticePatch::new(Family::Square, params, positions, edges)
}

/// Collects exactly-keyed vertices and edges, then numbers the vertices in
/// (y, x) order of their floating-point positions.
pub(crate) struct ExactGraph<K> {
    ids: HashMap<K, usize>,
    keys: Vec<K>,
    edges: Vec<(usize, usize)>,
}

impl<K: Copy + Eq + Hash> ExactGraph<K> {
    pub(crate) fn new() -> Self {
        Self {
            ids: HashMap::new(),
            keys: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub(crate) fn vertex(&mut self, key: K) -> usize {
        let next = self.keys.len();
        *self.ids.entry(key).or_insert_with(|| {
            self.keys.push(key);
            next
        })
    }

    pub(crate) fn edge(&mut self, a: K, b: K) {
        let (a, b) = (self.vertex(a), self.vertex(b));
        self.edges.push((a.min(b), a.max(b)));
    }

    pub(crate) fn into_patch(
        mut self,
        family: Family,
        params: GenerationParams,
        to_xy: impl Fn(K) -> (f64, f64),
    ) -> Result<LatticePatch> {
        let coords: Vec<[f64; 2]> = self.keys.iter().map(|&k| to_xy(k).into()).collect();
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&a, &b| {
            coords[a][1]
                .total_cmp(&coords[b][1])
                .then(coords[a][0].total_cmp(&coords[b][0]))
        });
        let mut relabel = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let positions = order.iter().map(|&old| coords[old]).collect();
        self.edges.sort_unstable();
        self.edges.dedup();
        let edges = self
            .edges
            .into_iter()
            .map(|(a, b)| (relabel[a], relabel[b]));
        LatticePatch::new(family, params, positions, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_counts() {
        for (n, v, e) in [(1, 1, 0), (2, 4, 4), (3, 9, 12), (65, 4225, 8320)] {
            let p = build_square(n).unwrap();
            assert_eq!((p.len(), p.edges().len()), (v, e), "n = {n}");
            assert!(p.is_connected());
        }
        assert!(matches!(
            build_square(0),
            Err(Error::InvalidParameter { name: "size", .. })
        ));
    }

    #[test]
    fn square_geometry_is_clean() {
        let p = build_square(7).unwrap();
        p.validate().unwrap();
        assert_eq!(p.degree(0), 2);
        assert_eq!(p.degree(3 * 7 + 3), 4);
    }

    #[test]
    fn rejects_bad_edges() {
        let params = GenerationParams {
            size: None,
            iterations: None,
            dedup_tolerance: DEDUP_TOLERANCE,
            seed_patch: "test".into(),
        };
        let pos = vec![[0.0, 0.0], [1.0, 0.0]];
        assert!(LatticePatch::new(Family::Square, params.clone(), pos.clone(), [(0, 0)]).is_err());
        assert!(LatticePatch::new(Family::Square, params.clone(), pos.clone(), [(0, 2)]).is_err());
        assert!(LatticePatch::new(
            Family::Square,
            params.clone(),
            pos.clone(),
            [(0, 1), (1, 0)]
        )
        .is_err());
        let ok = LatticePatch::new(Family::Square, params, pos, [(1, 0)]).unwrap();
        assert_eq!(ok.edges(), &[(0, 1)]);
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Square, Family::AmmannBeenker, Family::Penrose] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("hexagonal".parse::<Family>().is_err());
    }
}
