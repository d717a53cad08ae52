//! Rebuilding a dimer from a toric weak Fano surface and a cyclic strongly
//! exceptional sequence, and a bounded census of such sequences.
//!
//! A divisor `d` is seen through its corner profile: the coefficients on the
//! rays `v_μ` with `a_μ ≠ −2`. Profiles differing by `(⟨m, (v_μ, 1)⟩)_μ`
//! describe isomorphic modules, so vertices are cosets of that shift lattice.
//! Arrows are minimal inclusions between vertex cosets and faces are the
//! cycles of total degree `(1, …, 1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::dimer::{validate, DimerModel, RawDimer, Sign, ValidationError, VertexId};
use crate::fano::{FanoError, WeakFano};
use crate::lattice::SubLattice;
use crate::par::{self, Exec};
use crate::toric::{self, Divisor, ToricSurface};
use crate::zigzag;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("expected {expected} classes, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("classes {0} and {1} give isomorphic modules")]
    ClassCollision(usize, usize),
    #[error("arrow {arrow} lies in {count} faces, expected 2")]
    FaceCoverage { arrow: usize, count: usize },
    #[error("sign assignment not bipartite")]
    NotBipartite,
    #[error("neither sign assignment matches the ray orientation")]
    Orientation,
    #[error("synthesized dimer is invalid: {0}")]
    Invalid(#[from] ValidationError),
    #[error("synthesized dimer has genus {0}")]
    Genus(i64),
    #[error(transparent)]
    Fano(#[from] FanoError),
}

/// Indices of the corner rays of the surface.
pub fn corners(s: &ToricSurface) -> Vec<usize> {
    (0..s.k()).filter(|&i| s.a[i] != -2).collect()
}

/// The shift lattice `{(⟨m, (v_μ, 1)⟩)_μ : m ∈ Z³}` over the corners.
pub fn shift_lattice(s: &ToricSurface) -> SubLattice {
    let cs = corners(s);
    let gens: Vec<Vec<i64>> = vec![
        cs.iter().map(|&c| s.rays[c][0]).collect(),
        cs.iter().map(|&c| s.rays[c][1]).collect(),
        vec![1; cs.len()],
    ];
    SubLattice::from_generators(&gens, cs.len())
}

pub fn corner_profile(s: &ToricSurface, d: &[i64]) -> Vec<i64> {
    corners(s).iter().map(|&c| d[c]).collect()
}

/// `−min ⟨m, (v_μ, 1)⟩` over lattice points `m` satisfying every corner
/// constraint of `a`. Each corner constraint is a facet with lattice points
/// on it, so this returns `a` unchanged; it is kept as a checked identity.
pub fn saturate(s: &ToricSurface, a: &[i64]) -> Vec<i64> {
    let cs = corners(s);
    let v: Vec<[i64; 2]> = cs.iter().map(|&c| s.rays[c]).collect();
    (0..cs.len())
        .map(|mu| {
            // Minimizing ⟨m', v_μ⟩ + m₃ with m₃ as small as allowed gives
            // max_ν (⟨m', v_μ − v_ν⟩ − a_ν); it reaches −a_μ deep inside the
            // normal cone of v_μ.
            let n = normal_direction(&v, mu);
            let steps = 1 + a.iter().map(|x| x.abs()).sum::<i64>();
            let m = [n[0] * steps, n[1] * steps];
            let best = (0..v.len())
                .map(|nu| m[0] * (v[mu][0] - v[nu][0]) + m[1] * (v[mu][1] - v[nu][1]) - a[nu])
                .max()
                .unwrap();
            -best
        })
        .collect()
}

/// An integer vector `n` with `⟨n, v_μ⟩ < ⟨n, v_ν⟩` for every other corner.
fn normal_direction(v: &[[i64; 2]], mu: usize) -> [i64; 2] {
    let k = v.len();
    let prev = v[(mu + k - 1) % k];
    let next = v[(mu + 1) % k];
    // Inner normals of the two edges at v_μ, summed.
    let e1 = [v[mu][0] - prev[0], v[mu][1] - prev[1]];
    let e2 = [next[0] - v[mu][0], next[1] - v[mu][1]];
    [-e1[1] - e2[1], e1[0] + e2[0]]
}

/// One arrow of a synthesized quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthArrow {
    pub tail: usize,
    pub head: usize,
    /// Degree over the corners: which corner matchings contain the arrow.
    pub degree: Vec<i64>,
}

/// The quiver on the profile classes with its minimal inclusions.
pub fn synth_arrows(s: &ToricSurface, classes: &[Divisor]) -> Result<Vec<SynthArrow>, SynthError> {
    let lat = shift_lattice(s);
    let profiles: Vec<Vec<i64>> = classes.iter().map(|d| saturate(s, &corner_profile(s, d))).collect();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for (i, p) in profiles.iter().enumerate() {
        if let Some(&j) = index.get(&lat.reduce(p)) {
            return Err(SynthError::ClassCollision(j, i));
        }
        index.insert(lat.reduce(p), i);
    }
    let u = corners(s).len();
    let mut arrows = Vec::new();
    for (i, p) in profiles.iter().enumerate() {
        let lands = |mask: u32| -> Option<usize> {
            let x: Vec<i64> = (0..u).map(|m| p[m] + i64::from((mask >> m) & 1)).collect();
            index.get(&lat.reduce(&x)).copied()
        };
        for mask in 1u32..(1 << u) {
            let Some(j) = lands(mask) else { continue };
            // Minimal: no nonzero proper submask lands on a vertex.
            let mut sub = (mask - 1) & mask;
            let mut minimal = true;
            while sub != 0 {
                if lands(sub).is_some() {
                    minimal = false;
                    break;
                }
                sub = (sub - 1) & mask;
            }
            if minimal {
                arrows.push(SynthArrow {
                    tail: i,
                    head: j,
                    degree: (0..u).map(|m| i64::from((mask >> m) & 1)).collect(),
                });
            }
        }
    }
    arrows.sort_by(|a, b| (a.tail, a.head, &a.degree).cmp(&(b.tail, b.head, &b.degree)));
    Ok(arrows)
}

/// Closed paths whose degrees sum to `(1, …, 1)`, each listed once starting
/// from its smallest arrow.
pub fn synth_faces(arrows: &[SynthArrow]) -> Vec<Vec<usize>> {
    let u = arrows.first().map_or(0, |a| a.degree.len());
    let mut out_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, a) in arrows.iter().enumerate() {
        out_of.entry(a.tail).or_default().push(i);
    }
    let mut faces = Vec::new();
    for start in 0..arrows.len() {
        let mut path = vec![start];
        let mut total = arrows[start].degree.clone();
        extend_face(arrows, &out_of, u, start, &mut path, &mut total, &mut faces);
    }
    faces
}

fn extend_face(
    arrows: &[SynthArrow],
    out_of: &BTreeMap<usize, Vec<usize>>,
    u: usize,
    start: usize,
    path: &mut Vec<usize>,
    total: &mut Vec<i64>,
    faces: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    if total.iter().all(|&x| x == 1) {
        if arrows[last].head == arrows[start].tail {
            faces.push(path.clone());
        }
        return;
    }
    for &next in out_of.get(&arrows[last].head).map_or(&[][..], |v| v.as_slice()) {
        if next <= start || path.contains(&next) {
            continue;
        }
        let deg = &arrows[next].degree;
        if (0..u).any(|m| total[m] + deg[m] > 1) {
            continue;
        }
        for m in 0..u {
            total[m] += deg[m];
        }
        path.push(next);
        extend_face(arrows, out_of, u, start, path, total, faces);
        path.pop();
        for m in 0..u {
            total[m] -= deg[m];
        }
    }
}

fn two_coloring(num_arrows: usize, faces: &[Vec<usize>]) -> Result<Vec<bool>, SynthError> {
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); num_arrows];
    for (f, face) in faces.iter().enumerate() {
        for &a in face {
            holders[a].push(f);
        }
    }
    for (a, h) in holders.iter().enumerate() {
        if h.len() != 2 {
            return Err(SynthError::FaceCoverage {
                arrow: a,
                count: h.len(),
            });
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; faces.len()];
    for seed in 0..faces.len() {
        if color[seed].is_some() {
            continue;
        }
        color[seed] = Some(true);
        let mut queue = VecDeque::from([seed]);
        while let Some(f) = queue.pop_front() {
            let c = color[f].unwrap();
            for &a in &faces[f] {
                for &g in &holders[a] {
                    if g == f {
                        continue;
                    }
                    match color[g] {
                        None => {
                            color[g] = Some(!c);
                            queue.push_back(g);
                        }
                        Some(x) if x == c => return Err(SynthError::NotBipartite),
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(color.into_iter().map(Option::unwrap).collect())
}

fn assemble(arrows: &[SynthArrow], faces: &[Vec<usize>], color: &[bool], flip: bool) -> RawDimer {
    let mut raw = RawDimer::new("synth");
    for (i, a) in arrows.iter().enumerate() {
        let id = raw.add_arrow(format!("a{}", i + 1));
        raw.endpoints[id] = Some(((a.tail + 1).to_string(), (a.head + 1).to_string()));
    }
    for (face, &c) in faces.iter().zip(color) {
        let sign = if c != flip { Sign::Positive } else { Sign::Negative };
        raw.add_face(sign, face.clone());
    }
    raw
}

/// Walking the corners counter-clockwise, each corner matching gains the zig
/// arrows of the zigzags between it and the previous one.
fn corner_orientation_ok(d: &DimerModel, arrows: &[SynthArrow]) -> bool {
    let u = arrows[0].degree.len();
    let cycles = zigzag::zigzag_cycles(d);
    let (zig, _) = zigzag::cycle_index(d, &cycles);
    let member = |m: usize| -> BTreeSet<usize> { (0..arrows.len()).filter(|&a| arrows[a].degree[m] == 1).collect() };
    (0..u).all(|m| {
        let p = member(m);
        let q = member((m + 1) % u);
        let sym: BTreeSet<usize> = p.symmetric_difference(&q).copied().collect();
        q.difference(&p)
            .all(|&a| cycles[zig[a]].arrow_set().is_subset(&sym))
    })
}

/// The dimer whose vertices are the classes `d_1, …, d_k`, labelled `1 … k`.
pub fn dimer_from_sequence(s: &ToricSurface, classes: &[Divisor]) -> Result<DimerModel, SynthError> {
    if classes.len() != s.k() {
        return Err(SynthError::WrongCount {
            expected: s.k(),
            got: classes.len(),
        });
    }
    let arrows = synth_arrows(s, classes)?;
    let faces = synth_faces(&arrows);
    let color = two_coloring(arrows.len(), &faces)?;
    let mut last_err = SynthError::Orientation;
    for flip in [false, true] {
        let d = match validate(&assemble(&arrows, &faces, &color, flip)) {
            Ok(d) => d,
            Err(e) => {
                last_err = e.into();
                continue;
            }
        };
        if !d.is_torus() {
            return Err(SynthError::Genus(d.genus()));
        }
        if corner_orientation_ok(&d, &arrows) {
            return Ok(d.with_offsets().expect("torus dimer admits offsets"));
        }
    }
    Err(last_err)
}

/// Rebuilds a weak Fano dimer from its own exceptional sequence.
pub fn round_trip(d: &DimerModel, o: VertexId, exec: Exec) -> Result<bool, SynthError> {
    let wf = WeakFano::new(d, o, exec)?;
    let lambda = wf.lambda_weights()?;
    let order = wf.vertex_order(&lambda)?;
    let seq = wf.exceptional_sequence(&order)?;
    let back = dimer_from_sequence(&wf.surface(), &seq)?;
    Ok(back.is_isomorphic(wf.dimer()).is_some())
}

/// Census search settings.
#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    /// Bound on the coefficients of normalized classes.
    pub bound: i64,
    pub exec: Exec,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            bound: 3,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub dimer: DimerModel,
    /// A sequence producing the dimer.
    pub sequence: Vec<Divisor>,
    /// Number of searched sequences producing an isomorphic dimer.
    pub multiplicity: usize,
    /// Smallest coefficient bound under which some producing sequence fits.
    pub height: i64,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
    /// Sequences found before the twist and rotation quotient.
    pub sequences: usize,
    /// Sequences that failed synthesis.
    pub failures: usize,
    /// Whether some dimer is only produced by sequences with a coefficient
    /// at the bound.
    pub touched_bound: bool,
    pub bound: i64,
}

/// Normalized classes `c` with `|c_r| ≤ B` such that the pair `(0, c)` passes
/// every vanishing condition in both window orders.
fn candidate_pool(s: &ToricSurface, bound: i64, exec: Exec) -> Vec<Divisor> {
    let k = s.k();
    let free = k - 2;
    let side = (2 * bound + 1) as usize;
    let total = side.pow(free as u32);
    let decode = |mut n: usize| -> Divisor {
        let mut d = vec![0i64; k];
        for slot in d.iter_mut().skip(2) {
            *slot = (n % side) as i64 - bound;
            n /= side;
        }
        d
    };
    let keep = par::map_range(exec, total, |n| {
        let c = decode(n);
        (pair_ok(s, &c) && pair_ok(s, &complement(&c))).then_some(c)
    });
    keep.into_iter().flatten().collect()
}

/// `e` = `L_j − L_i` for a pair inside one window: no higher cohomology for
/// `e`, no cohomology at all for `−e`.
fn pair_ok(s: &ToricSurface, e: &[i64]) -> bool {
    let [_, h1, h2] = s.cohomology(e);
    if h1 != 0 || h2 != 0 {
        return false;
    }
    let neg: Divisor = e.iter().map(|x| -x).collect();
    s.cohomology(&neg) == [0, 0, 0]
}

/// `−K − e`.
fn complement(e: &[i64]) -> Divisor {
    e.iter().map(|x| 1 - x).collect()
}

fn diff(a: &[i64], b: &[i64]) -> Divisor {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Canonical key of a sequence under cyclic relabelling and twist.
fn rotation_key(s: &ToricSurface, seq: &[Divisor]) -> Vec<Divisor> {
    let k = seq.len() as i64;
    (0..k)
        .map(|r| {
            let base = toric::periodic(seq, r);
            (r..r + k)
                .map(|j| s.normalize(&diff(&toric::periodic(seq, j), &base)))
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap()
}

/// All sequences `0 = d_1, d_2, …, d_k` drawn from the pool with every pair
/// compatible.
fn search_sequences(s: &ToricSurface, pool: &[Divisor], exec: Exec) -> Vec<Vec<Divisor>> {
    let k = s.k();
    let n = pool.len();
    let diffs: Vec<Vec<Divisor>> = par::map_range(exec, n, |i| {
        (0..n).map(|j| s.normalize(&diff(&pool[j], &pool[i]))).collect()
    });
    let unique: Vec<Divisor> = diffs
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let verdicts = par::map(exec, &unique, |e| pool_pair_ok(s, e));
    let ok: HashMap<&Divisor, bool> = unique.iter().zip(verdicts).collect();
    // after[i][j]: pool[j] may follow pool[i] in one window.
    let after: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && ok[&diffs[i][j]]).collect())
        .collect();
    let roots: Vec<usize> = (0..n).collect();
    let found: Vec<Vec<Vec<Divisor>>> = par::map(exec, &roots, |&first| {
        let mut out = Vec::new();
        let mut chain = vec![first];
        grow(&after, k - 1, &mut chain, &mut out);
        out.into_iter()
            .map(|c| {
                let mut seq = vec![vec![0i64; k]];
                seq.extend(c.iter().map(|&i| pool[i].clone()));
                seq
            })
            .collect()
    });
    found.into_iter().flatten().collect()
}

fn pool_pair_ok(s: &ToricSurface, e: &[i64]) -> bool {
    pair_ok(s, e) && pair_ok(s, &complement(e))
}

fn grow(after: &[Vec<bool>], len: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if chain.len() == len {
        out.push(chain.clone());
        return;
    }
    let n = after.len();
    for next in 0..n {
        if chain.iter().all(|&c| after[c][next]) {
            chain.push(next);
            grow(after, len, chain, out);
            chain.pop();
        }
    }
}

/// Dimers, up to isomorphism, coming from cyclic strongly exceptional
/// sequences whose normalized classes have coefficients bounded by
/// `options.bound`.
pub fn census(s: &ToricSurface, options: CensusOptions) -> Census {
    let pool = candidate_pool(s, options.bound, options.exec);
    log::info!("census: {} candidate classes", pool.len());
    let sequences = search_sequences(s, &pool, options.exec);
    let found = sequences.len();
    let mut seen = BTreeSet::new();
    let mut distinct = Vec::new();
    for seq in sequences {
        if seen.insert(rotation_key(s, &seq)) {
            distinct.push(seq);
        }
    }
    log::info!("census: {found} sequences, {} up to rotation", distinct.len());
    let built = par::map(options.exec, &distinct, |seq| {
        let ok = toric::is_cyclic_strong_exceptional(s, seq).is_empty();
        ok.then(|| dimer_from_sequence(s, seq).ok()).flatten()
    });
    let mut entries: Vec<CensusEntry> = Vec::new();
    let mut failures = 0;
    for (seq, d) in distinct.into_iter().zip(built) {
        let Some(d) = d else {
            failures += 1;
            continue;
        };
        let height = seq.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        match entries.iter_mut().find(|e| e.dimer.is_isomorphic(&d).is_some()) {
            Some(e) => {
                e.multiplicity += 1;
                if height < e.height {
                    e.height = height;
                    e.sequence = seq;
                }
            }
            None => entries.push(CensusEntry {
                dimer: d,
                sequence: seq,
                multiplicity: 1,
                height,
            }),
        }
    }
    let touched_bound = entries.iter().any(|e| e.height >= options.bound);
    if touched_bound {
        log::warn!("census: a dimer is only reached at coefficient bound {}", options.bound);
    }
    Census {
        entries,
        sequences: found,
        failures,
        touched_bound,
        bound: options.bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::toric::ReflexivePolygon;

    fn p2() -> ToricSurface {
        ToricSurface::new(&ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap())
    }

    #[test]
    fn p2_from_line_bundles() {
        let d = dimer_from_sequence(&p2(), &[vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]]).unwrap();
        assert_eq!((d.num_vertices(), d.num_arrows(), d.num_faces()), (3, 9, 6));
        assert!(d.is_isomorphic(&catalog::dimer("p2").unwrap()).is_some());
    }

    #[test]
    fn shift_by_cone_generator_is_trivial() {
        let s = p2();
        let lat = shift_lattice(&s);
        assert!(lat.contains(&[1, 1, 1]));
        assert_eq!(saturate(&s, &[0, 0, 0]), vec![0, 0, 0]);
        assert_eq!(saturate(&s, &[2, -1, 3]), vec![2, -1, 3]);
    }

    #[test]
    fn catalog_round_trips() {
        for name in ["p2", "p1xp1", "dp1", "dp3"] {
            let d = catalog::dimer(name).unwrap();
            assert!(round_trip(&d, 0, Exec::Sequential).unwrap(), "{name}");
        }
    }

    #[test]
    fn p2_census() {
        let c = census(&p2(), CensusOptions { bound: 3, exec: Exec::Sequential });
        assert_eq!(c.entries.len(), 1);
    }
}
