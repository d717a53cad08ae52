//! Zig and zag rays, zigzag cycles, and the consistency decision.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dimer::{ArrowId, DimerModel, Sign};
use crate::lattice::{self, Point};
use crate::lp::{q, LinearProgram, LpOutcome, Sense, Q};
use crate::par::{self, Exec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Parity {
    /// The next arrow is taken in the positive face.
    Zig,
    /// The next arrow is taken in the negative face.
    Zag,
}

/// The arrow following `a` in its positive face.
pub fn zig_successor(d: &DimerModel, a: ArrowId) -> ArrowId {
    d.face_successor(a, Sign::Positive)
}

/// The arrow following `a` in its negative face.
pub fn zag_successor(d: &DimerModel, a: ArrowId) -> ArrowId {
    d.face_successor(a, Sign::Negative)
}

fn step(d: &DimerModel, a: ArrowId, p: Parity) -> (ArrowId, Parity) {
    match p {
        Parity::Zig => (zig_successor(d, a), Parity::Zag),
        Parity::Zag => (zag_successor(d, a), Parity::Zig),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagCycle {
    pub arrows: Vec<ArrowId>,
    pub parities: Vec<Parity>,
    pub homology: Option<Point>,
}

impl ZigzagCycle {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrow_set(&self) -> BTreeSet<ArrowId> {
        self.arrows.iter().copied().collect()
    }

    /// Arrows of the cycle sitting at positions of the given parity.
    pub fn arrows_with(&self, p: Parity) -> BTreeSet<ArrowId> {
        self.arrows
            .iter()
            .zip(&self.parities)
            .filter(|(_, &q)| q == p)
            .map(|(&a, _)| a)
            .collect()
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.arrows.contains(&a)
    }
}

/// All zigzag cycles, each rotated to start at its smallest arrow (zig
/// position first) and sorted lexicographically.
pub fn zigzag_cycles(d: &DimerModel) -> Vec<ZigzagCycle> {
    let n = d.num_arrows();
    let mut seen = [vec![false; n], vec![false; n]];
    let idx = |p: Parity| match p {
        Parity::Zig => 0,
        Parity::Zag => 1,
    };
    let mut cycles = Vec::new();
    for a in 0..n {
        for p0 in [Parity::Zig, Parity::Zag] {
            if seen[idx(p0)][a] {
                continue;
            }
            let mut states = Vec::new();
            let (mut x, mut p) = (a, p0);
            while !seen[idx(p)][x] {
                seen[idx(p)][x] = true;
                states.push((x, p));
                (x, p) = step(d, x, p);
            }
            let start = (0..states.len()).min_by_key(|&i| states[i]).unwrap();
            states.rotate_left(start);
            let homology = d
                .offsets()
                .map(|off| states.iter().fold([0, 0], |s, &(x, _)| lattice::add(s, off[x])));
            cycles.push(ZigzagCycle {
                arrows: states.iter().map(|s| s.0).collect(),
                parities: states.iter().map(|s| s.1).collect(),
                homology,
            });
        }
    }
    cycles.sort_by(|a, b| (&a.arrows, &a.parities).cmp(&(&b.arrows, &b.parities)));
    cycles
}

/// Index of the cycle through `(a, Zig)` and through `(a, Zag)` for every arrow.
pub fn cycle_index(d: &DimerModel, cycles: &[ZigzagCycle]) -> (Vec<usize>, Vec<usize>) {
    let n = d.num_arrows();
    let mut zig = vec![usize::MAX; n];
    let mut zag = vec![usize::MAX; n];
    for (ci, c) in cycles.iter().enumerate() {
        for (&a, &p) in c.arrows.iter().zip(&c.parities) {
            match p {
                Parity::Zig => zig[a] = ci,
                Parity::Zag => zag[a] = ci,
            }
        }
    }
    (zig, zag)
}

pub fn common_arrow_count(z1: &ZigzagCycle, z2: &ZigzagCycle) -> usize {
    z1.arrow_set().intersection(&z2.arrow_set()).count()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Consistency {
    /// A consistent R-charge with every value in `[margin, 2 - margin]`.
    Consistent { r_charge: Vec<Q>, margin: Q },
    /// No R-charge exists; `certificate` is a dual vector over the LP rows
    /// proving that the best achievable margin is `bound` (or that the
    /// equalities alone are infeasible when `bound` is `None`).
    Inconsistent {
        certificate: Vec<Q>,
        bound: Option<Q>,
    },
    /// The R-charge criterion only decides torus dimers.
    Undecided { genus: i64 },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }
}

/// The R-charge linear program: variables `R_a ≥ 0` for each arrow and a free
/// margin `t` (last variable), maximizing `t`.
pub fn r_charge_program(d: &DimerModel) -> LinearProgram {
    let n = d.num_arrows();
    let mut lp = LinearProgram::new();
    for _ in 0..n {
        lp.add_var(q(0));
    }
    let t = lp.add_free_var(q(1));
    for a in 0..n {
        lp.add_row(vec![(a, q(1)), (t, q(-1))], Sense::Ge, q(0));
        lp.add_row(vec![(a, q(1)), (t, q(1))], Sense::Le, q(2));
    }
    for f in d.faces() {
        lp.add_row(f.arrows.iter().map(|&a| (a, q(1))).collect(), Sense::Eq, q(2));
    }
    for v in 0..d.num_vertices() {
        let mut coeff = vec![0i64; n];
        let mut ends = 0;
        for a in 0..n {
            for end in [d.head(a), d.tail(a)] {
                if end == v {
                    coeff[a] += 1;
                    ends += 1;
                }
            }
        }
        let row = (0..n).filter(|&a| coeff[a] != 0).map(|a| (a, q(coeff[a]))).collect();
        lp.add_row(row, Sense::Eq, q(ends - 2));
    }
    lp
}

pub fn is_consistent(d: &DimerModel) -> Consistency {
    let genus = d.genus();
    if genus != 1 {
        return Consistency::Undecided { genus };
    }
    let lp = r_charge_program(d);
    match lp.solve() {
        LpOutcome::Optimal { x, value, duals } => {
            if value > q(0) {
                Consistency::Consistent {
                    r_charge: x[..d.num_arrows()].to_vec(),
                    margin: value,
                }
            } else {
                Consistency::Inconsistent {
                    certificate: duals,
                    bound: Some(value),
                }
            }
        }
        LpOutcome::Infeasible { farkas } => Consistency::Inconsistent {
            certificate: farkas,
            bound: None,
        },
        LpOutcome::Unbounded => unreachable!("margin is bounded by R_a <= 2 - t and R_a >= t"),
    }
}

/// Checks the R-charge invariants exactly.
pub fn is_r_charge(d: &DimerModel, r: &[Q]) -> bool {
    let two = q(2);
    if r.iter().any(|x| *x <= q(0) || *x >= two) {
        return false;
    }
    let faces_ok = d
        .faces()
        .iter()
        .all(|f| f.arrows.iter().map(|&a| r[a].clone()).sum::<Q>() == two);
    let vertices_ok = (0..d.num_vertices()).all(|v| {
        let mut s = q(0);
        for a in 0..d.num_arrows() {
            for end in [d.head(a), d.tail(a)] {
                if end == v {
                    s += q(1) - r[a].clone();
                }
            }
        }
        s == two
    });
    faces_ok && vertices_ok
}

/// An arrow of the universal cover: the arrow together with the translate of
/// the fundamental domain holding its tail.
pub type Lift = (ArrowId, Point);

fn ray(d: &DimerModel, off: &[Point], a: ArrowId, first: Parity, len: usize) -> Vec<Lift> {
    let mut out = Vec::with_capacity(len);
    let (mut x, mut p, mut t) = (a, first, [0, 0]);
    for _ in 0..len {
        out.push((x, t));
        t = lattice::add(t, off[x]);
        (x, p) = step(d, x, p);
    }
    out
}

/// `(Z⁺_a)_i` for `i < len`, lifted to the universal cover.
pub fn zig_ray(d: &DimerModel, a: ArrowId, len: usize) -> Option<Vec<Lift>> {
    Some(ray(d, d.offsets()?, a, Parity::Zig, len))
}

/// `(Z⁻_a)_i` for `i < len`, lifted to the universal cover.
pub fn zag_ray(d: &DimerModel, a: ArrowId, len: usize) -> Option<Vec<Lift>> {
    Some(ray(d, d.offsets()?, a, Parity::Zag, len))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayMeeting {
    pub arrow: ArrowId,
    /// Index along the zag ray.
    pub zag_index: usize,
    /// Index along the zig ray.
    pub zig_index: usize,
    pub lift: Lift,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("unsupported genus {genus}: the probe needs torus offsets")]
    UnsupportedGenus { genus: i64 },
}

/// Default unrolling depth for arrow `a`: twice the product of the lengths of
/// its zig and zag cycles.
pub fn default_depth(d: &DimerModel, cycles: &[ZigzagCycle], a: ArrowId) -> usize {
    let (zig, zag) = cycle_index(d, cycles);
    2 * cycles[zig[a]].len() * cycles[zag[a]].len()
}

/// For every arrow, the first meeting of its zig and zag rays other than at the
/// arrow itself, within `depth` steps (or the default depth when `None`).
pub fn zigzag_probe(
    d: &DimerModel,
    depth: Option<usize>,
    exec: Exec,
) -> Result<Vec<RayMeeting>, ProbeError> {
    let d = if d.offsets().is_some() {
        d.clone()
    } else {
        d.with_offsets()
            .map_err(|_| ProbeError::UnsupportedGenus { genus: d.genus() })?
    };
    let cycles = zigzag_cycles(&d);
    let (zig, zag) = cycle_index(&d, &cycles);
    let found = par::map_range(exec, d.num_arrows(), |a| {
        let len = depth.unwrap_or(2 * cycles[zig[a]].len() * cycles[zag[a]].len());
        first_meeting(&d, a, len)
    });
    Ok(found.into_iter().flatten().collect())
}

fn first_meeting(d: &DimerModel, a: ArrowId, len: usize) -> Option<RayMeeting> {
    let plus = zig_ray(d, a, len)?;
    let minus = zag_ray(d, a, len)?;
    let mut best: Option<RayMeeting> = None;
    for (i, m) in minus.iter().enumerate() {
        for (j, p) in plus.iter().enumerate() {
            if (i, j) == (0, 0) || m != p {
                continue;
            }
            let better = best
                .as_ref()
                .is_none_or(|b| (i + j, i) < (b.zag_index + b.zig_index, b.zag_index));
            if better {
                best = Some(RayMeeting {
                    arrow: a,
                    zag_index: i,
                    zig_index: j,
                    lift: *m,
                });
            }
        }
    }
    best
}
