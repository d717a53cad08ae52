//! Integer linear algebra and planar lattice geometry.

use num_integer::Integer;

pub type Point = [i64; 2];

pub fn det2(a: Point, b: Point) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn dot(a: Point, b: Point) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Result of reducing a matrix by unimodular column operations: `A·U = H`
/// where the first `rank` columns of `H` are in column echelon form and the
/// remaining columns are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub rank: usize,
    /// Row index holding the leading entry of each of the first `rank` columns.
    pub pivot_rows: Vec<usize>,
}

pub fn column_echelon(rows: &[Vec<i64>], ncols: usize) -> ColumnEchelon {
    let m = rows.len();
    let mut h: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot = 0;
    let mut pivot_rows = Vec::new();
    for r in 0..m {
        if pivot == ncols {
            break;
        }
        // Euclid across columns pivot.. until only column `pivot` is non-zero in row r.
        loop {
            let nz: Vec<usize> = (pivot..ncols).filter(|&c| h[r][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&c| h[r][c].abs()).unwrap();
            swap_cols(&mut h, &mut u, pivot, best);
            let mut done = true;
            for c in pivot + 1..ncols {
                if h[r][c] != 0 {
                    let f = Integer::div_floor(&h[r][c], &h[r][pivot]);
                    add_col_multiple(&mut h, &mut u, c, pivot, -f);
                    if h[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][pivot] != 0 {
            if h[r][pivot] < 0 {
                negate_col(&mut h, &mut u, pivot);
            }
            pivot_rows.push(r);
            pivot += 1;
        }
    }
    ColumnEchelon {
        h,
        u,
        rank: pivot,
        pivot_rows,
    }
}

fn swap_cols(h: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut().chain(u.iter_mut()) {
        row.swap(a, b);
    }
}

fn add_col_multiple(h: &mut [Vec<i128>], u: &mut [Vec<i128>], target: usize, src: usize, f: i128) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[target] += f * row[src];
    }
}

fn negate_col(h: &mut [Vec<i128>], u: &mut [Vec<i128>], c: usize) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[c] = -row[c];
    }
}

/// A Z-basis of `{x ∈ Zⁿ : A x = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let ce = column_echelon(rows, ncols);
    (ce.rank..ncols)
        .map(|c| ce.u.iter().map(|row| row[c] as i64).collect())
        .collect()
}

/// Integer coefficients `c` with `Σ cᵢ vᵢ = target`, if any exist.
pub fn integer_combination(vectors: &[Point], target: Point) -> Option<Vec<i64>> {
    let n = vectors.len();
    let rows: Vec<Vec<i64>> = (0..2)
        .map(|k| vectors.iter().map(|v| v[k]).collect())
        .collect();
    let ce = column_echelon(&rows, n);
    // Solve H z = target by forward substitution on the echelon columns.
    let mut z = vec![0i128; n];
    let mut rest = [target[0] as i128, target[1] as i128];
    for (c, &r) in ce.pivot_rows.iter().enumerate() {
        let lead = ce.h[r][c];
        if rest[r] % lead != 0 {
            return None;
        }
        z[c] = rest[r] / lead;
        for (k, slot) in rest.iter_mut().enumerate() {
            *slot -= z[c] * ce.h[k][c];
        }
    }
    if rest != [0, 0] {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|c| ce.u[i][c] * z[c]).sum::<i128>() as i64)
            .collect(),
    )
}

/// A sublattice of `Zⁿ` given by generators, with a canonical representative
/// for each coset.
#[derive(Clone, Debug)]
pub struct SubLattice {
    ce: ColumnEchelon,
}

impl SubLattice {
    pub fn from_generators(gens: &[Vec<i64>], dim: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..dim).map(|r| gens.iter().map(|g| g[r]).collect()).collect();
        SubLattice {
            ce: column_echelon(&rows, gens.len()),
        }
    }

    pub fn rank(&self) -> usize {
        self.ce.rank
    }

    /// The representative of `x` + lattice whose pivot entries lie in
    /// `[0, lead)`.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        let mut x: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        for (c, &r) in self.ce.pivot_rows.iter().enumerate() {
            let t = Integer::div_floor(&x[r], &self.ce.h[r][c]);
            if t != 0 {
                for (k, slot) in x.iter_mut().enumerate() {
                    *slot -= t * self.ce.h[k][c];
                }
            }
        }
        x.into_iter().map(|v| v as i64).collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }
}

/// Counter-clockwise strictly convex hull (no collinear vertices).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| det2(sub(a, o), sub(b, o));
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of a polygon given by its vertices in order.
pub fn twice_area(poly: &[Point]) -> i64 {
    let n = poly.len();
    (0..n).map(|i| det2(poly[i], poly[(i + 1) % n])).sum()
}

/// All lattice points on the boundary of a convex polygon, counter-clockwise,
/// starting at `hull[0]`.
pub fn boundary_points(hull: &[Point]) -> Vec<Point> {
    let n = hull.len();
    if n == 1 {
        return hull.to_vec();
    }
    let mut out = Vec::new();
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let d = sub(b, a);
        let g = d[0].gcd(&d[1]);
        let step = [d[0] / g, d[1] / g];
        for s in 0..g {
            out.push([a[0] + s * step[0], a[1] + s * step[1]]);
        }
        if n == 2 {
            break;
        }
    }
    if n == 2 {
        out.push(hull[1]);
    }
    out
}

/// Position of `p` relative to a counter-clockwise convex polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

pub fn locate(hull: &[Point], p: Point) -> Location {
    let n = hull.len();
    let mut on_edge = false;
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let c = det2(sub(b, a), sub(p, a));
        if c < 0 {
            return Location::Outside;
        }
        if c == 0 {
            let (lo0, hi0) = (a[0].min(b[0]), a[0].max(b[0]));
            let (lo1, hi1) = (a[1].min(b[1]), a[1].max(b[1]));
            if p[0] < lo0 || p[0] > hi0 || p[1] < lo1 || p[1] > hi1 {
                return Location::Outside;
            }
            on_edge = true;
        }
    }
    if on_edge {
        Location::Boundary
    } else {
        Location::Inside
    }
}

pub fn interior_points(hull: &[Point]) -> Vec<Point> {
    if hull.len() < 3 {
        return Vec::new();
    }
    let (x0, x1) = (
        hull.iter().map(|p| p[0]).min().unwrap(),
        hull.iter().map(|p| p[0]).max().unwrap(),
    );
    let (y0, y1) = (
        hull.iter().map(|p| p[1]).min().unwrap(),
        hull.iter().map(|p| p[1]).max().unwrap(),
    );
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if locate(hull, [x, y]) == Location::Inside {
                out.push([x, y]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_single_row() {
        let k = integer_kernel(&[vec![2, 3, 5]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 3 * v[1] + 5 * v[2], 0);
        }
        // The kernel lattice is saturated: the 2x2 minors have gcd 1.
        let minors = [
            k[0][0] * k[1][1] - k[0][1] * k[1][0],
            k[0][0] * k[1][2] - k[0][2] * k[1][0],
            k[0][1] * k[1][2] - k[0][2] * k[1][1],
        ];
        let g = minors.iter().fold(0i64, |g, m| g.gcd(m));
        assert_eq!(g, 1);
    }

    #[test]
    fn combination_solves_or_refuses() {
        let c = integer_combination(&[[2, 0], [3, 0], [0, 1]], [1, 4]).unwrap();
        assert_eq!(2 * c[0] + 3 * c[1], 1);
        assert_eq!(c[2], 4);
        assert!(integer_combination(&[[2, 0], [0, 2]], [1, 0]).is_none());
    }

    #[test]
    fn hull_and_lattice_points_of_square() {
        let pts = [[1, 1], [-1, 1], [-1, -1], [1, -1], [0, 0], [1, 0]];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert_eq!(twice_area(&hull), 8);
        assert_eq!(boundary_points(&hull).len(), 8);
        assert_eq!(interior_points(&hull), vec![[0, 0]]);
        assert_eq!(locate(&hull, [1, 0]), Location::Boundary);
        assert_eq!(locate(&hull, [2, 0]), Location::Outside);
    }

    #[test]
    fn sublattice_cosets() {
        let l = SubLattice::from_generators(&[vec![1, 1, 1], vec![0, 2, 0]], 3);
        assert!(l.contains(&[3, 7, 3]));
        assert!(!l.contains(&[0, 1, 0]));
        assert_eq!(l.reduce(&[5, 6, 2]), l.reduce(&[0, 1, -3]));
        assert_ne!(l.reduce(&[0, 1, 0]), l.reduce(&[0, 0, 0]));
    }
}
