//! Reference implementations used only by tests. Nothing here calls into the
//! crate's tiling, graph or propagation code.
#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use std::collections::{BTreeSet, VecDeque};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// `r + s·√D` with rational parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad<const D: i64> {
    pub r: Q,
    pub s: Q,
}

impl<const D: i64> Quad<D> {
    pub fn new(r: Q, s: Q) -> Self {
        Self { r, s }
    }
    pub fn int(n: i64) -> Self {
        Self::new(q(n, 1), q(0, 1))
    }
    pub fn zero() -> Self {
        Self::int(0)
    }
    pub fn to_f64(self) -> f64 {
        let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
        f(self.r) + f(self.s) * (D as f64).sqrt()
    }
}

impl<const D: i64> Add for Quad<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.r + o.r, self.s + o.s)
    }
}
impl<const D: i64> Sub for Quad<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.r - o.r, self.s - o.s)
    }
}
impl<const D: i64> Neg for Quad<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.r, -self.s)
    }
}
impl<const D: i64> Mul for Quad<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.r * o.r + self.s * o.s * D, self.r * o.s + self.s * o.r)
    }
}

/// A plane point with coordinates `(x, y·k)` for a fixed real `k` per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt<const D: i64> {
    pub x: Quad<D>,
    pub y: Quad<D>,
}

impl<const D: i64> Add for Pt<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Pt {
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }
}
impl<const D: i64> Sub for Pt<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Pt {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }
}
impl<const D: i64> Neg for Pt<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Pt {
            x: -self.x,
            y: -self.y,
        }
    }
}
impl<const D: i64> Pt<D> {
    fn scale(self, k: Quad<D>) -> Self {
        Pt {
            x: self.x * k,
            y: self.y * k,
        }
    }
}

/// Vertices and undirected edges of an exact tiling.
pub struct ExactTiling<const D: i64> {
    pub vertices: BTreeSet<Pt<D>>,
    pub edges: BTreeSet<(Pt<D>, Pt<D>)>,
}

impl<const D: i64> ExactTiling<D> {
    fn new() -> Self {
        Self {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }
    fn edge(&mut self, a: Pt<D>, b: Pt<D>) {
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert(if a < b { (a, b) } else { (b, a) });
    }
}

// ---------------------------------------------------------------- Ammann-Beenker

pub type P2 = Pt<2>;

fn rot45(v: P2, sign: i64) -> P2 {
    let h = Quad::<2>::new(q(0, 1), q(1, 2));
    let sg = Quad::<2>::int(sign);
    Pt {
        x: h * (v.x - sg * v.y),
        y: h * (sg * v.x + v.y),
    }
}

fn rot45n(v: P2, sign: i64, n: i32) -> P2 {
    (0..n.rem_euclid(8)).fold(v, |w, _| rot45(w, sign))
}

fn ab_unit(k: i32) -> P2 {
    rot45n(
        Pt {
            x: Quad::int(1),
            y: Quad::zero(),
        },
        1,
        k,
    )
}

enum AbTile {
    /// Corner and the two side vectors leaving it.
    Rhomb(P2, P2, P2),
    /// Right-angle corner, marked leg, other leg.
    Half(P2, P2, P2),
}

fn ab_seed() -> Vec<AbTile> {
    let mut t = Vec::new();
    let o = Pt {
        x: Quad::zero(),
        y: Quad::zero(),
    };
    for k in 0..8 {
        t.push(AbTile::Rhomb(o, ab_unit(k), ab_unit(k + 1)));
        t.push(AbTile::Half(
            ab_unit(k) + ab_unit(k + 1),
            ab_unit(k + 5),
            ab_unit(k - 1),
        ));
        t.push(AbTile::Half(
            ab_unit(k) + ab_unit(k - 1),
            ab_unit(k + 3),
            ab_unit(k + 1),
        ));
    }
    t
}

fn ab_deflate(tiles: &[AbTile]) -> Vec<AbTile> {
    let lam = Quad::<2>::new(q(1, 1), q(1, 1));
    let mut out = Vec::with_capacity(tiles.len() * 7);
    for t in tiles {
        match *t {
            AbTile::Rhomb(o, a, c) => {
                let s = if rot45(a, 1) == c { 1 } else { -1 };
                assert_eq!(rot45(a, s), c, "rhomb sides are not 45° apart");
                let r = |n| rot45n(a, s, n);
                let o = o.scale(lam);
                let p = o + a.scale(lam);
                let qq = o + (a + c).scale(lam);
                let y = qq - a - c;
                out.push(AbTile::Rhomb(o, a, c));
                out.push(AbTile::Rhomb(qq, -a, -c));
                out.push(AbTile::Rhomb(p, r(3), r(2)));
                out.push(AbTile::Half(o + a + c, -c, r(-1)));
                out.push(AbTile::Half(o + a + c, -a, r(2)));
                out.push(AbTile::Half(y, a, -r(2)));
                out.push(AbTile::Half(y, c, r(3)));
            }
            AbTile::Half(apex, a, far) => {
                let h = if rot45n(a, 1, 2) == far { 1 } else { -1 };
                assert_eq!(
                    rot45n(a, h, 2),
                    far,
                    "half-square legs are not perpendicular"
                );
                let r = |n| rot45n(a, h, n);
                let c = apex.scale(lam);
                let d = r(1);
                out.push(AbTile::Rhomb(c, a, d));
                out.push(AbTile::Rhomb(c + d, r(3), r(2)));
                out.push(AbTile::Half(c + d, r(3), -r(1)));
                out.push(AbTile::Half(c + a + d, -r(1), r(-1)));
                out.push(AbTile::Half(c + d, r(2), a));
            }
        }
    }
    out
}

pub fn ammann_beenker(iterations: usize) -> ExactTiling<2> {
    let mut tiles = ab_seed();
    for _ in 0..iterations {
        tiles = ab_deflate(&tiles);
    }
    let mut g = ExactTiling::new();
    for t in &tiles {
        match *t {
            AbTile::Rhomb(o, a, c) => {
                g.edge(o, o + a);
                g.edge(o + a, o + a + c);
                g.edge(o + a + c, o + c);
                g.edge(o + c, o);
            }
            AbTile::Half(apex, n, f) => {
                g.edge(apex, apex + n);
                g.edge(apex, apex + f);
            }
        }
    }
    g
}

pub fn ab_length_sq(a: P2, b: P2) -> Quad<2> {
    let d = b - a;
    d.x * d.x + d.y * d.y
}

pub fn ab_xy(p: P2) -> [f64; 2] {
    [p.x.to_f64(), p.y.to_f64()]
}

// ---------------------------------------------------------------- Penrose
//
// Points store (x, y / sin 36°), both in Q(√5).

pub type P5 = Pt<5>;

fn sin36_sq() -> Quad<5> {
    Quad::new(q(10, 16), q(-2, 16))
}

fn rot36(v: P5) -> P5 {
    let c = Quad::<5>::new(q(1, 4), q(1, 4));
    Pt {
        x: v.x * c - v.y * sin36_sq(),
        y: v.x + v.y * c,
    }
}

fn pen_unit(k: i32) -> P5 {
    (0..k.rem_euclid(10)).fold(
        Pt {
            x: Quad::int(1),
            y: Quad::zero(),
        },
        |w, _| rot36(w),
    )
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Acute,
    Obtuse,
}

pub fn penrose(iterations: usize) -> ExactTiling<5> {
    let phi = Quad::<5>::new(q(1, 2), q(1, 2));
    let inv = Quad::<5>::new(q(-1, 2), q(1, 2));
    let origin = Pt {
        x: Quad::zero(),
        y: Quad::zero(),
    };
    let mut tris: Vec<(Kind, P5, P5, P5)> = Vec::new();
    for k in 0..5 {
        let (l, r) = (pen_unit(2 * k - 1), pen_unit(2 * k + 1));
        tris.push((Kind::Obtuse, l, l + r, origin));
        tris.push((Kind::Obtuse, r, l + r, origin));
    }
    for _ in 0..iterations {
        let mut next = Vec::with_capacity(tris.len() * 3);
        for &(kind, a, b, c) in &tris {
            match kind {
                Kind::Acute => {
                    let p = a + (b - a).scale(inv);
                    next.push((Kind::Acute, c, p, b));
                    next.push((Kind::Obtuse, p, c, a));
                }
                Kind::Obtuse => {
                    let qq = b + (a - b).scale(inv);
                    let r = b + (c - b).scale(inv);
                    next.push((Kind::Obtuse, r, c, a));
                    next.push((Kind::Obtuse, qq, r, b));
                    next.push((Kind::Acute, r, qq, a));
                }
            }
        }
        tris = next;
    }
    let scale = (0..iterations).fold(Quad::int(1), |s, _| s * phi);
    let mut g = ExactTiling::new();
    for &(_, a, b, c) in &tris {
        let (a, b, c) = (a.scale(scale), b.scale(scale), c.scale(scale));
        g.edge(c, a);
        g.edge(a, b);
    }
    g
}

pub fn pen_length_sq(a: P5, b: P5) -> Quad<5> {
    let d = b - a;
    d.x * d.x + d.y * d.y * sin36_sq()
}

pub fn pen_xy(p: P5) -> [f64; 2] {
    let s36 = (36f64).to_radians().sin();
    [p.x.to_f64(), p.y.to_f64() * s36]
}

// ---------------------------------------------------------------- graphs

/// All-pairs hop counts by Floyd-Warshall; `usize::MAX` when unreachable.
pub fn hop_matrix(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    for row in &mut d {
        for x in row.iter_mut() {
            if *x >= inf {
                *x = usize::MAX;
            }
        }
    }
    d
}

pub fn components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

pub fn dense_laplacian(n: usize, edges: &[(usize, usize)], gamma: f64) -> Vec<Vec<f64>> {
    let mut h = vec![vec![0.0; n]; n];
    for &(a, b) in edges {
        h[a][a] += gamma;
        h[b][b] += gamma;
        h[a][b] -= gamma;
        h[b][a] -= gamma;
    }
    h
}

/// Cyclic Jacobi eigen-decomposition; returns (eigenvalues, eigenvectors as
/// columns of `v`).
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akr) = (a[k][p], a[k][r]);
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let (apk, ark) = (a[p][k], a[r][k]);
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
                for row in v.iter_mut() {
                    let (vkp, vkr) = (row[p], row[r]);
                    row[p] = c * vkp - s * vkr;
                    row[r] = s * vkp + c * vkr;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// `|⟨v| exp(−iHt) |origin⟩|²` for every `v`, from a Jacobi decomposition.
pub fn dense_probabilities(h: Vec<Vec<f64>>, origin: usize, t: f64) -> Vec<f64> {
    let (lam, v) = jacobi_eigen(h);
    let n = lam.len();
    (0..n)
        .map(|i| {
            let amp: Complex64 = (0..n)
                .map(|k| Complex64::from_polar(v[i][k] * v[origin][k], -lam[k] * t))
                .sum();
            amp.norm_sqr()
        })
        .collect()
}

/// Square grid with the same vertex numbering as the crate (`y·n + x`).
pub fn grid_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for y in 0..n {
        for x in 0..n {
            let v = y * n + x;
            if x + 1 < n {
                e.push((v, v + 1));
            }
            if y + 1 < n {
                e.push((v, v + n));
            }
        }
    }
    e.sort_unstable();
    e
}

pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Edge-disorder ensemble on an `n × n` grid computed from scratch: partial
/// Fisher-Yates removal keyed by the shared per-trial seed, dense Jacobi
/// propagation, Floyd-Warshall zone. Returns per-trial escape masses.
pub fn brute_force_escape(
    n: usize,
    origin: usize,
    zone_radius: usize,
    f: f64,
    trials: usize,
    base_seed: u64,
    t: f64,
    seed_of: impl Fn(u64, u64) -> u64,
) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let all = grid_edges(n);
    let dist = hop_matrix(n * n, &all);
    let k = (f * all.len() as f64).round_ties_even() as usize;
    (0..trials)
        .map(|i| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed_of(base_seed, i as u64));
            let mut order: Vec<usize> = (0..all.len()).collect();
            for j in 0..k {
                let pick = rng.random_range(j..order.len());
                order.swap(j, pick);
            }
            let kept: Vec<(usize, usize)> = order[k..].iter().map(|&e| all[e]).collect();
            let p = dense_probabilities(dense_laplacian(n * n, &kept, 1.0), origin, t);
            (0..n * n)
                .filter(|&v| dist[origin][v] > zone_radius)
                .map(|v| p[v])
                .sum()
        })
        .collect()
}
