use std::collections::HashMap;

/// Uniform-grid bucket index over planar points.
pub struct SpatialIndex<'a> {
    points: &'a [[f64; 2]],
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl<'a> SpatialIndex<'a> {
    pub fn new(points: &'a [[f64; 2]], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self {
            points,
            cell,
            buckets,
        }
    }

    fn key(p: &[f64; 2], cell: f64) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn around(&self, p: &[f64; 2]) -> impl Iterator<Item = usize> + '_ {
        let (kx, ky) = Self::key(p, self.cell);
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (kx + dx, ky + dy)))
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
    }

    /// Lowest-id point within `tol` of `p` (`tol` must not exceed the cell size).
    pub fn find(&self, p: [f64; 2], tol: f64) -> Option<usize> {
        self.around(&p)
            .filter(|&i| {
                let q = self.points[i];
                (q[0] - p[0]).hypot(q[1] - p[1]) <= tol
            })
            .min()
    }

    /// Smallest distance between two distinct points that share a
    /// neighborhood; infinity if no two points are within one cell.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            for j in self.around(p) {
                if j > i {
                    let q = self.points[j];
                    best = best.min((q[0] - p[0]).hypot(q[1] - p[1]));
                }
            }
        }
        best
    }
}
