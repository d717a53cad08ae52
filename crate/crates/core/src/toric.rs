//! Reflexive polygons, smooth toric weak Fano surfaces, divisor classes and
//! line-bundle cohomology.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{self, Point};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("need at least 3 boundary points, got {0}")]
    TooFew(usize),
    #[error("non-smooth boundary pair at index {0}")]
    NonSmooth(usize),
    #[error("sequence does not close")]
    DoesNotClose,
    #[error("not reflexive: {0}")]
    NotReflexive(String),
    #[error("unknown polygon label `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Boundary lattice points `v_1, …, v_k` of a convex lattice polygon with the
/// origin as its only interior lattice point, counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ReflexivePolygon {
    points: Vec<Point>,
}

impl ReflexivePolygon {
    pub fn new(points: Vec<Point>) -> Result<Self, ToricError> {
        let k = points.len();
        if k < 3 {
            return Err(ToricError::TooFew(k));
        }
        for i in 0..k {
            if lattice::det2(points[i], points[(i + 1) % k]) != 1 {
                return Err(ToricError::NonSmooth(i));
            }
        }
        let hull = lattice::convex_hull(&points);
        if hull.len() < 3 {
            return Err(ToricError::NotReflexive("degenerate hull".into()));
        }
        let boundary: BTreeSet<Point> = lattice::boundary_points(&hull).into_iter().collect();
        let given: BTreeSet<Point> = points.iter().copied().collect();
        if boundary != given || given.len() != k {
            return Err(ToricError::NotReflexive(
                "points are not the boundary lattice points of their hull".into(),
            ));
        }
        if lattice::interior_points(&hull) != vec![[0, 0]] {
            return Err(ToricError::NotReflexive(
                "origin is not the unique interior point".into(),
            ));
        }
        // Unimodular consecutive cones around the origin wind exactly once
        // when the points are the hull boundary; check the winding anyway.
        let twice_area: i64 = (0..k).map(|i| lattice::det2(points[i], points[(i + 1) % k])).sum();
        if twice_area != lattice::twice_area(&hull) {
            return Err(ToricError::NotReflexive("points are not in cyclic order".into()));
        }
        Ok(ReflexivePolygon { points })
    }

    /// Boundary points of the hull of `vertices`, counter-clockwise, with the
    /// unique interior point translated to the origin.
    pub fn from_vertices(vertices: &[Point]) -> Result<Self, ToricError> {
        let hull = lattice::convex_hull(vertices);
        let interior = lattice::interior_points(&hull);
        if interior.len() != 1 {
            return Err(ToricError::NotReflexive(format!(
                "{} interior points",
                interior.len()
            )));
        }
        let c = interior[0];
        let hull: Vec<Point> = hull.iter().map(|&p| lattice::sub(p, c)).collect();
        Self::new(lattice::boundary_points(&hull))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn vertices(&self) -> Vec<Point> {
        lattice::convex_hull(&self.points)
    }

    pub fn a_sequence(&self) -> Vec<i64> {
        a_sequence(&self.points).expect("validated polygon")
    }

    /// Reference label `3a` … `9a`.
    pub fn label(&self) -> &'static str {
        let a = self.a_sequence();
        REFERENCE
            .iter()
            .find(|(_, v)| {
                let r = ReflexivePolygon::from_vertices(v).unwrap();
                dihedral_equal(&r.a_sequence(), &a)
            })
            .map(|(l, _)| *l)
            .expect("every reflexive polygon has a reference label")
    }

    /// The same polygon with its point list rotated to start at index `r`.
    pub fn rotated(&self, r: usize) -> ReflexivePolygon {
        let mut points = self.points.clone();
        let k = points.len();
        points.rotate_left(r % k);
        ReflexivePolygon { points }
    }
}

/// `a_i` with `v_{i−1} + a_i v_i + v_{i+1} = 0`.
pub fn a_sequence(points: &[Point]) -> Result<Vec<i64>, ToricError> {
    let k = points.len();
    if k < 3 {
        return Err(ToricError::TooFew(k));
    }
    (0..k)
        .map(|i| {
            let v = points[i];
            let w = lattice::add(points[(i + k - 1) % k], points[(i + 1) % k]);
            let w = [-w[0], -w[1]];
            let n = lattice::dot(v, v);
            if n == 0 || lattice::det2(v, w) != 0 || lattice::dot(w, v) % n != 0 {
                return Err(ToricError::NonSmooth(i));
            }
            Ok(lattice::dot(w, v) / n)
        })
        .collect()
}

/// Runs `v_{i+1} = −v_{i−1} − a_i v_i` from `v_1 = (1,0)`, `v_2 = (0,1)`.
pub fn polygon_from_sequence(seq: &[i64]) -> Result<ReflexivePolygon, ToricError> {
    let k = seq.len();
    if k < 3 {
        return Err(ToricError::TooFew(k));
    }
    let mut v: Vec<Point> = vec![[1, 0], [0, 1]];
    for i in 1..=k {
        let (prev, cur) = (v[i - 1], v[i]);
        v.push([
            -prev[0] - seq[i % k] * cur[0],
            -prev[1] - seq[i % k] * cur[1],
        ]);
    }
    if v[k] != v[0] || v[k + 1] != v[1] {
        return Err(ToricError::DoesNotClose);
    }
    v.truncate(k);
    ReflexivePolygon::new(v)
}

/// Whether two sequences agree up to rotation and reversal.
pub fn dihedral_equal(s: &[i64], t: &[i64]) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let n = s.len();
    if n == 0 {
        return true;
    }
    let rev: Vec<i64> = t.iter().rev().copied().collect();
    (0..n).any(|r| {
        (0..n).all(|i| s[i] == t[(i + r) % n]) || (0..n).all(|i| s[i] == rev[(i + r) % n])
    })
}

/// Lexicographically smallest rotation or reflection of a sequence.
pub fn dihedral_canonical(s: &[i64]) -> Vec<i64> {
    let n = s.len();
    let rev: Vec<i64> = s.iter().rev().copied().collect();
    (0..n)
        .flat_map(|r| {
            [
                (0..n).map(|i| s[(i + r) % n]).collect::<Vec<_>>(),
                (0..n).map(|i| rev[(i + r) % n]).collect(),
            ]
        })
        .min()
        .unwrap_or_default()
}

pub type Matrix = [[i64; 2]; 2];

pub fn apply(m: &Matrix, p: Point) -> Point {
    [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
}

/// A unimodular affine map `p ↦ M p + t` sending the strictly convex lattice
/// polygon `a` (vertices in cyclic order) onto `b`, if one exists.
pub fn affine_map(a: &[Point], b: &[Point]) -> Option<(Matrix, Point)> {
    let n = a.len();
    if n != b.len() || n == 0 {
        return None;
    }
    if n < 3 {
        // Segments or points: compare lattice lengths.
        let len = |p: &[Point]| {
            if p.len() == 2 {
                let d = lattice::sub(p[1], p[0]);
                d[0].gcd(&d[1])
            } else {
                0
            }
        };
        return (len(a) == len(b)).then_some(([[1, 0], [0, 1]], lattice::sub(b[0], a[0])));
    }
    let e1 = lattice::sub(a[1], a[0]);
    let e2 = lattice::sub(a[n - 1], a[0]);
    let det = lattice::det2(e1, e2);
    for r in 0..n {
        for dir in [1, n - 1] {
            let f1 = lattice::sub(b[(r + dir) % n], b[r]);
            let f2 = lattice::sub(b[(r + n * 2 - dir) % n], b[r]);
            // Solve M [e1 e2] = [f1 f2].
            let num = [
                [f1[0] * e2[1] - f2[0] * e1[1], f2[0] * e1[0] - f1[0] * e2[0]],
                [f1[1] * e2[1] - f2[1] * e1[1], f2[1] * e1[0] - f1[1] * e2[0]],
            ];
            if num.iter().flatten().any(|x| x % det != 0) {
                continue;
            }
            let m = [
                [num[0][0] / det, num[0][1] / det],
                [num[1][0] / det, num[1][1] / det],
            ];
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() != 1 {
                continue;
            }
            let t = lattice::sub(b[r], apply(&m, a[0]));
            let image: BTreeSet<Point> = a.iter().map(|&p| lattice::add(apply(&m, p), t)).collect();
            let target: BTreeSet<Point> = b.iter().copied().collect();
            if image == target {
                return Some((m, t));
            }
        }
    }
    None
}

/// Unimodular equivalence of lattice polygons given by any point sets.
pub fn unimodular_equivalent(a: &[Point], b: &[Point]) -> bool {
    affine_map(&lattice::convex_hull(a), &lattice::convex_hull(b)).is_some()
}

/// Vertices of one representative of each of the 16 reflexive polygons.
pub const REFERENCE: [(&str, &[Point]); 16] = [
    ("3a", &[[-1, -1], [1, 0], [0, 1]]),
    ("4a", &[[0, -1], [1, 0], [0, 1], [-1, 0]]),
    ("4b", &[[1, -1], [0, 1], [-1, 0], [0, -1]]),
    ("4c", &[[1, -1], [0, 1], [-1, -1]]),
    ("5a", &[[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1]]),
    ("5b", &[[1, -1], [0, 1], [-1, 0], [-1, -1]]),
    ("6a", &[[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]),
    ("6b", &[[1, 0], [0, 1], [-1, 1], [-1, -1], [0, -1]]),
    ("6c", &[[1, 0], [0, 1], [-2, -1], [0, -1]]),
    ("6d", &[[0, 1], [-2, -1], [1, -1]]),
    ("7a", &[[1, 0], [0, 1], [-1, 1], [-1, -1], [1, -1]]),
    ("7b", &[[1, 0], [0, 1], [-2, -1], [1, -1]]),
    ("8a", &[[1, 1], [-1, 1], [-1, -1], [1, -1]]),
    ("8b", &[[0, 1], [-1, 1], [-1, -1], [2, -1]]),
    ("8c", &[[0, 1], [-2, -1], [2, -1]]),
    ("9a", &[[-1, 2], [-1, -1], [2, -1]]),
];

pub fn polygon_by_label(label: &str) -> Result<ReflexivePolygon, ToricError> {
    REFERENCE
        .iter()
        .find(|(l, _)| *l == label)
        .map(|(_, v)| ReflexivePolygon::from_vertices(v).expect("reference polygons are reflexive"))
        .ok_or_else(|| ToricError::UnknownLabel(label.to_string()))
}

/// Angular order key of a nonzero vector: half-plane, then cross product.
fn half(p: Point) -> u8 {
    if p[1] > 0 || (p[1] == 0 && p[0] > 0) {
        0
    } else {
        1
    }
}

fn angle_less(a: Point, b: Point) -> bool {
    let (ha, hb) = (half(a), half(b));
    ha < hb || (ha == hb && lattice::det2(a, b) > 0)
}

/// All reflexive polygons with boundary points in `[−4,4]²`, one per
/// unimodular class, labelled and in reference order.
///
/// Boundary point sequences are enumerated directly: consecutive points span
/// unimodular cones around the origin, turn left (or go straight), and wind
/// once, which is exactly the boundary of a convex lattice polygon whose only
/// interior lattice point is the origin.
pub fn enumerate_reflexive() -> Vec<(&'static str, ReflexivePolygon)> {
    const R: i64 = 4;
    let prim: Vec<Point> = (-R..=R)
        .flat_map(|x| (-R..=R).map(move |y| [x, y]))
        .filter(|&[x, y]| x.gcd(&y) == 1)
        .collect();
    let mut classes: Vec<(Vec<i64>, ReflexivePolygon)> = Vec::new();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    for &start in &prim {
        let mut path = vec![start];
        extend(&prim, &mut path, &mut |poly: &[Point]| {
            let a = a_sequence(poly).expect("unimodular cones");
            let key = dihedral_canonical(&a);
            if seen.insert(key.clone()) {
                classes.push((key, ReflexivePolygon::new(poly.to_vec()).expect("valid")));
            }
        });
    }
    let mut out: Vec<(&'static str, ReflexivePolygon)> =
        classes.into_iter().map(|(_, p)| (p.label(), p)).collect();
    out.sort_by_key(|(l, _)| *l);
    out
}

fn turns_left(a: Point, b: Point, c: Point) -> bool {
    lattice::det2(lattice::sub(b, a), lattice::sub(c, b)) >= 0
}

fn extend(prim: &[Point], path: &mut Vec<Point>, emit: &mut dyn FnMut(&[Point])) {
    let start = path[0];
    let last = *path.last().unwrap();
    if path.len() >= 3
        && lattice::det2(last, start) == 1
        && turns_left(path[path.len() - 2], last, start)
        && turns_left(last, start, path[1])
    {
        emit(path);
    }
    if path.len() == 12 {
        return;
    }
    for &next in prim {
        if lattice::det2(last, next) != 1 || !angle_less(start, next) || !angle_less(last, next) {
            continue;
        }
        if path.len() >= 2 && !turns_left(path[path.len() - 2], last, next) {
            continue;
        }
        path.push(next);
        extend(prim, path, emit);
        path.pop();
    }
}

/// A smooth complete toric surface given by the rays of a reflexive polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricSurface {
    pub rays: Vec<Point>,
    pub a: Vec<i64>,
}

/// Coefficient vector over the rays.
pub type Divisor = Vec<i64>;

impl ToricSurface {
    pub fn new(polygon: &ReflexivePolygon) -> Self {
        ToricSurface {
            rays: polygon.points().to_vec(),
            a: polygon.a_sequence(),
        }
    }

    pub fn k(&self) -> usize {
        self.rays.len()
    }

    pub fn canonical(&self) -> Divisor {
        vec![-1; self.k()]
    }

    pub fn check(&self, d: &[i64]) -> Result<(), ToricError> {
        if d.len() != self.k() {
            return Err(ToricError::WrongLength {
                expected: self.k(),
                got: d.len(),
            });
        }
        Ok(())
    }

    /// `E_i·E_i = a_i`, `E_i·E_{i±1} = 1`, zero otherwise.
    pub fn intersection(&self, d: &[i64], e: &[i64]) -> i64 {
        let k = self.k();
        (0..k)
            .map(|i| {
                let next = (i + 1) % k;
                let prev = (i + k - 1) % k;
                d[i] * (e[i] * self.a[i] + e[next] + e[prev])
            })
            .sum()
    }

    pub fn chi(&self, d: &[i64]) -> i64 {
        let k = self.canonical();
        let num = self.intersection(d, d) - self.intersection(d, &k);
        debug_assert!(num % 2 == 0);
        1 + num / 2
    }

    /// Bounding box `[x0, x1] × [y0, y1]` of all pairwise intersections of the
    /// lines `⟨m, v_r⟩ = −d_r`, inflated by 1.
    fn window(&self, d: &[i64]) -> [i64; 4] {
        let k = self.k();
        let (mut x0, mut x1, mut y0, mut y1) = (0i64, 0i64, 0i64, 0i64);
        let mut first = true;
        for r in 0..k {
            for s in r + 1..k {
                let (u, v) = (self.rays[r], self.rays[s]);
                let det = lattice::det2(u, v);
                if det == 0 {
                    continue;
                }
                // ⟨m,u⟩ = −d_r, ⟨m,v⟩ = −d_s.
                let (br, bs) = (-d[r], -d[s]);
                let mx_num = br * v[1] - bs * u[1];
                let my_num = bs * u[0] - br * v[0];
                let (lo_x, hi_x) = floor_ceil(mx_num, det);
                let (lo_y, hi_y) = floor_ceil(my_num, det);
                if first {
                    (x0, x1, y0, y1) = (lo_x, hi_x, lo_y, hi_y);
                    first = false;
                } else {
                    x0 = x0.min(lo_x);
                    x1 = x1.max(hi_x);
                    y0 = y0.min(lo_y);
                    y1 = y1.max(hi_y);
                }
            }
        }
        [x0 - 1, x1 + 1, y0 - 1, y1 + 1]
    }

    /// Indices `r` with `⟨m, v_r⟩ ≥ −d_r`.
    fn satisfied(&self, d: &[i64], m: Point) -> Vec<bool> {
        self.rays
            .iter()
            .zip(d)
            .map(|(&v, &dr)| lattice::dot(m, v) >= -dr)
            .collect()
    }

    pub fn h0(&self, d: &[i64]) -> i64 {
        let [x0, x1, y0, y1] = self.window(d);
        let mut count = 0;
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self
                    .rays
                    .iter()
                    .zip(d)
                    .all(|(&v, &dr)| v[0] * x + v[1] * y >= -dr)
                {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn h2(&self, d: &[i64]) -> i64 {
        let kd: Divisor = d.iter().map(|x| -1 - x).collect();
        self.h0(&kd)
    }

    pub fn h1(&self, d: &[i64]) -> i64 {
        let h1 = self.h0(d) + self.h2(d) - self.chi(d);
        assert!(h1 >= 0, "negative h1 for {d:?}");
        h1
    }

    pub fn cohomology(&self, d: &[i64]) -> [i64; 3] {
        let h0 = self.h0(d);
        let h2 = self.h2(d);
        [h0, h0 + h2 - self.chi(d), h2]
    }

    /// `h¹` from the satisfied-index patterns: each `m` whose pattern splits
    /// into `c ≥ 2` cyclic arcs contributes `c − 1`.
    pub fn h1_direct(&self, d: &[i64]) -> i64 {
        let [x0, x1, y0, y1] = self.window(d);
        let mut total = 0;
        for x in x0..=x1 {
            for y in y0..=y1 {
                let s = self.satisfied(d, [x, y]);
                let arcs = count_arcs(&s);
                if arcs >= 2 {
                    total += arcs as i64 - 1;
                }
            }
        }
        total
    }

    /// `m` with `d − e = (⟨m, v_r⟩)_r`, if the classes are linearly equivalent.
    pub fn equivalence(&self, d: &[i64], e: &[i64]) -> Option<Point> {
        let diff: Vec<i64> = d.iter().zip(e).map(|(x, y)| x - y).collect();
        let m = self.solve_pair(diff[0], diff[1]);
        self.rays
            .iter()
            .zip(&diff)
            .all(|(&v, &x)| lattice::dot(m, v) == x)
            .then_some(m)
    }

    /// `m` with `⟨m, v_0⟩ = x` and `⟨m, v_1⟩ = y`; exact since `det(v_0, v_1) = 1`.
    fn solve_pair(&self, x: i64, y: i64) -> Point {
        let (u, v) = (self.rays[0], self.rays[1]);
        [x * v[1] - y * u[1], y * u[0] - x * v[0]]
    }

    /// The representative of the class of `d` with `d_0 = d_1 = 0`.
    pub fn normalize(&self, d: &[i64]) -> Divisor {
        let m = self.solve_pair(d[0], d[1]);
        self.rays
            .iter()
            .zip(d)
            .map(|(&v, &x)| x - lattice::dot(m, v))
            .collect()
    }

    pub fn principal(&self, m: Point) -> Divisor {
        self.rays.iter().map(|&v| lattice::dot(m, v)).collect()
    }
}

fn floor_ceil(num: i64, den: i64) -> (i64, i64) {
    (Integer::div_floor(&num, &den), -Integer::div_floor(&-num, &den))
}

/// Number of maximal cyclic runs of `true`; a full circle counts as one.
pub fn count_arcs(s: &[bool]) -> usize {
    let n = s.len();
    if s.iter().all(|&b| b) {
        return 1;
    }
    (0..n).filter(|&i| s[i] && !s[(i + n - 1) % n]).count()
}

/// A failed vanishing condition between `L_i` and `L_j` (0-based indices into
/// the periodic extension).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalFailure {
    pub i: i64,
    pub j: i64,
    /// `"Ext1"`, `"Ext2"` or `"Hom"`.
    pub kind: &'static str,
    pub dimension: i64,
}

/// `d_{i}` of the periodic extension `d_{i+k} = d_i − K`.
pub fn periodic(classes: &[Divisor], i: i64) -> Divisor {
    let k = classes.len() as i64;
    let (q, r) = Integer::div_mod_floor(&i, &k);
    classes[r as usize].iter().map(|x| x + q).collect()
}

/// Checks forward higher-Ext vanishing in both directions within one period
/// and backward Hom vanishing, returning every violation.
pub fn is_cyclic_strong_exceptional(s: &ToricSurface, classes: &[Divisor]) -> Vec<ExceptionalFailure> {
    let k = classes.len() as i64;
    let mut out = Vec::new();
    let diff = |a: &Divisor, b: &Divisor| -> Divisor { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    for i in 0..k {
        let di = periodic(classes, i);
        for j in i..i + k {
            let dj = periodic(classes, j);
            for (from, to, dd) in [(i, j, diff(&dj, &di)), (j, i, diff(&di, &dj))] {
                let [_, h1, h2] = s.cohomology(&dd);
                if h1 != 0 {
                    out.push(ExceptionalFailure { i: from, j: to, kind: "Ext1", dimension: h1 });
                }
                if h2 != 0 {
                    out.push(ExceptionalFailure { i: from, j: to, kind: "Ext2", dimension: h2 });
                }
            }
        }
        for j in i - k..i {
            let dj = periodic(classes, j);
            let h0 = s.h0(&diff(&dj, &di));
            if h0 != 0 {
                out.push(ExceptionalFailure { i, j, kind: "Hom", dimension: h0 });
            }
        }
    }
    out
}

/// An ordering of `classes` under which they form a cyclic strongly
/// exceptional sequence, as indices into `classes`. Tries orders depth-first,
/// pruning prefixes that already violate a pairwise vanishing.
pub fn exceptional_order(s: &ToricSurface, classes: &[Divisor]) -> Option<Vec<usize>> {
    let k = classes.len();
    let pair_ok = |earlier: &Divisor, later: &Divisor| {
        let fwd: Divisor = later.iter().zip(earlier).map(|(x, y)| x - y).collect();
        let bwd: Divisor = fwd.iter().map(|x| -x).collect();
        let [_, f1, f2] = s.cohomology(&fwd);
        let [b0, b1, b2] = s.cohomology(&bwd);
        f1 == 0 && f2 == 0 && b0 == 0 && b1 == 0 && b2 == 0
    };
    let mut ok = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            ok[i][j] = i != j && pair_ok(&classes[i], &classes[j]);
        }
    }
    fn dfs(
        s: &ToricSurface,
        classes: &[Divisor],
        ok: &[Vec<bool>],
        order: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let k = classes.len();
        if order.len() == k {
            let seq: Vec<Divisor> = order.iter().map(|&i| classes[i].clone()).collect();
            return is_cyclic_strong_exceptional(s, &seq).is_empty();
        }
        for next in 0..k {
            if used[next] || !order.iter().all(|&p| ok[p][next]) {
                continue;
            }
            used[next] = true;
            order.push(next);
            if dfs(s, classes, ok, order, used) {
                return true;
            }
            order.pop();
            used[next] = false;
        }
        false
    }
    let mut order = Vec::with_capacity(k);
    let mut used = vec![false; k];
    dfs(s, classes, &ok, &mut order, &mut used).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> ReflexivePolygon {
        ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]).unwrap()
    }

    #[test]
    fn a_sequences_by_substitution() {
        let tri = ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap();
        assert_eq!(tri.a_sequence(), vec![1, 1, 1]);
        assert_eq!(hexagon().a_sequence(), vec![-1; 6]);
        let square = ReflexivePolygon::from_vertices(&[[1, 1], [-1, 1], [-1, -1], [1, -1]]).unwrap();
        assert!(dihedral_equal(&square.a_sequence(), &[-1, -2, -1, -2, -1, -2, -1, -2]));
    }

    #[test]
    fn sequence_recurrence() {
        let p = polygon_from_sequence(&[1, 1, 1]).unwrap();
        assert!(unimodular_equivalent(p.points(), REFERENCE[0].1));
        assert_eq!(polygon_from_sequence(&[0, 0, 0]), Err(ToricError::DoesNotClose));
    }

    #[test]
    fn sixteen_classes() {
        let all = enumerate_reflexive();
        assert_eq!(all.len(), 16);
        let labels: Vec<&str> = all.iter().map(|(l, _)| *l).collect();
        let expect: Vec<&str> = REFERENCE.iter().map(|(l, _)| *l).collect();
        assert_eq!(labels, expect);
        for (label, p) in &all {
            let k = p.len() as i64;
            assert_eq!(p.a_sequence().iter().sum::<i64>(), 12 - 3 * k, "{label}");
            let reference = polygon_by_label(label).unwrap();
            assert!(unimodular_equivalent(p.points(), reference.points()), "{label}");
            let back = polygon_from_sequence(&p.a_sequence()).unwrap();
            assert!(unimodular_equivalent(back.points(), p.points()), "{label}");
        }
    }

    #[test]
    fn cohomology_on_the_plane() {
        let p2 = ToricSurface::new(&ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap());
        assert_eq!(p2.intersection(&[1, 0, 0], &[1, 0, 0]), 1);
        assert_eq!(p2.h0(&[1, 0, 0]), 3);
        assert_eq!(p2.cohomology(&[0, 0, 0]), [1, 0, 0]);
        assert_eq!(p2.cohomology(&[-1, -1, -1]), [0, 0, 1]);
        assert_eq!(p2.cohomology(&[-2, 0, 0]), [0, 0, 0]);
        assert_eq!(p2.h1_direct(&[-2, 0, 0]), 0);
        assert_eq!(p2.chi(&[-2, 0, 0]), 0);
        assert_eq!(p2.h0(&[2, 0, 0]), 6);
    }

    #[test]
    fn canonical_self_intersection_of_dp3() {
        let s = ToricSurface::new(&hexagon());
        assert_eq!(s.intersection(&s.canonical(), &s.canonical()), 6);
    }

    #[test]
    fn exceptional_examples() {
        let p2 = ToricSurface::new(&ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap());
        let good = vec![vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(is_cyclic_strong_exceptional(&p2, &good).is_empty());
        let bad = vec![vec![0, 0, 0], vec![1, 0, 0], vec![3, 0, 0]];
        assert!(!is_cyclic_strong_exceptional(&p2, &bad).is_empty());
        let dp3 = ToricSurface::new(&hexagon());
        let seq = vec![
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 0, -1, 0, 0, 1],
            vec![0, 0, -1, 0, 1, 1],
        ];
        let listed = is_cyclic_strong_exceptional(&dp3, &seq);
        assert!(listed.contains(&ExceptionalFailure { i: 4, j: 1, kind: "Hom", dimension: 1 }));
        let order = exceptional_order(&dp3, &seq).unwrap();
        let ordered: Vec<Divisor> = order.iter().map(|&i| seq[i].clone()).collect();
        assert_eq!(is_cyclic_strong_exceptional(&dp3, &ordered), vec![]);
        assert_eq!(order[..2], [0, 4]);
    }

    #[test]
    fn normalization_and_equivalence() {
        let s = ToricSurface::new(&hexagon());
        let d = vec![3, -1, 2, 0, 1, 5];
        let n = s.normalize(&d);
        assert_eq!(&n[..2], &[0, 0]);
        assert!(s.equivalence(&d, &n).is_some());
        assert!(s.equivalence(&d, &[0; 6]).is_none());
    }

    #[test]
    fn dihedral() {
        let s = [-1, -2, -1, -2, -1, -2, -1, -2];
        let mut r = s;
        r.rotate_left(1);
        assert!(dihedral_equal(&s, &r));
        assert!(!dihedral_equal(&[1, 1, 1], &[1, 1, 2]));
        let t = [1, 2, 3, 5];
        let rev: Vec<i64> = t.iter().rev().copied().collect();
        assert!(dihedral_equal(&t, &rev));
    }
}
