//! Perfect matchings, their lattice coordinates, the matching polygon,
//! o-stability and the stable simplicial complex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use rand::Rng;
use thiserror::Error;

use crate::dimer::{ArrowId, DimerModel, Sign, TopologyError, VertexId};
use crate::lattice::{self, Location, Point};
use crate::par::{self, Exec};
use crate::zigzag::{self, Parity, ZigzagCycle};

/// An arrow set containing exactly one arrow of every face.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfectMatching(FixedBitSet);

impl PerfectMatching {
    pub fn from_arrows(num_arrows: usize, arrows: &[ArrowId]) -> Self {
        let mut s = FixedBitSet::with_capacity(num_arrows);
        for &a in arrows {
            s.insert(a);
        }
        PerfectMatching(s)
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.0.contains(a)
    }

    pub fn arrows(&self) -> Vec<ArrowId> {
        self.0.ones().collect()
    }

    pub fn symmetric_difference(&self, other: &PerfectMatching) -> BTreeSet<ArrowId> {
        self.0.symmetric_difference(&other.0).collect()
    }

    pub fn difference(&self, other: &PerfectMatching) -> BTreeSet<ArrowId> {
        self.0.difference(&other.0).collect()
    }

    pub fn is_perfect_matching_of(&self, d: &DimerModel) -> bool {
        d.faces()
            .iter()
            .all(|f| f.arrows.iter().filter(|&&a| self.contains(a)).count() == 1)
    }
}

/// All perfect matchings, sorted by their sorted arrow lists.
pub fn enumerate_matchings(d: &DimerModel, exec: Exec) -> Vec<PerfectMatching> {
    let nf = d.num_faces();
    let covered = vec![false; nf];
    let first = most_constrained_face(d, &covered);
    let mut out: Vec<Vec<ArrowId>> = match first {
        None => vec![Vec::new()],
        Some(f) => {
            let options: Vec<ArrowId> = d.faces()[f].arrows.clone();
            par::map(exec, &options, |&a| {
                let mut covered = covered.clone();
                let mut chosen = Vec::new();
                let mut found = Vec::new();
                if take(d, a, &mut covered) {
                    chosen.push(a);
                    backtrack(d, &mut covered, &mut chosen, &mut found);
                }
                found
            })
            .into_iter()
            .flatten()
            .collect()
        }
    };
    for m in &mut out {
        m.sort_unstable();
    }
    out.sort();
    out.into_iter()
        .map(|m| PerfectMatching::from_arrows(d.num_arrows(), &m))
        .collect()
}

fn faces_of(d: &DimerModel, a: ArrowId) -> [usize; 2] {
    [d.face_slot(a, Sign::Positive).0, d.face_slot(a, Sign::Negative).0]
}

fn take(d: &DimerModel, a: ArrowId, covered: &mut [bool]) -> bool {
    let [p, n] = faces_of(d, a);
    if covered[p] || covered[n] {
        return false;
    }
    covered[p] = true;
    covered[n] = true;
    true
}

fn most_constrained_face(d: &DimerModel, covered: &[bool]) -> Option<usize> {
    (0..d.num_faces())
        .filter(|&f| !covered[f])
        .min_by_key(|&f| {
            d.faces()[f]
                .arrows
                .iter()
                .filter(|&&a| faces_of(d, a).iter().all(|&g| !covered[g]))
                .count()
        })
}

fn backtrack(
    d: &DimerModel,
    covered: &mut Vec<bool>,
    chosen: &mut Vec<ArrowId>,
    found: &mut Vec<Vec<ArrowId>>,
) {
    let Some(f) = most_constrained_face(d, covered) else {
        found.push(chosen.clone());
        return;
    };
    for &a in &d.faces()[f].arrows {
        let [p, n] = faces_of(d, a);
        if covered[p] || covered[n] {
            continue;
        }
        covered[p] = true;
        covered[n] = true;
        chosen.push(a);
        backtrack(d, covered, chosen, found);
        chosen.pop();
        covered[p] = false;
        covered[n] = false;
    }
}

/// A walk that may traverse arrows backwards: `(arrow, forward)` steps.
pub type WeakWalk = Vec<(ArrowId, bool)>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("walk is not composable at step {step}")]
    NotComposable { step: usize },
    #[error("dimer has no perfect matchings")]
    NoMatchings,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("root vertex {root} out of range")]
    BadRoot { root: usize },
}

/// Checks that consecutive steps share endpoints.
pub fn check_walk(d: &DimerModel, w: &[(ArrowId, bool)]) -> Result<(), MatchingError> {
    let ends = |&(a, fwd): &(ArrowId, bool)| {
        if fwd {
            (d.tail(a), d.head(a))
        } else {
            (d.head(a), d.tail(a))
        }
    };
    for (i, pair) in w.windows(2).enumerate() {
        if ends(&pair[0]).1 != ends(&pair[1]).0 {
            return Err(MatchingError::NotComposable { step: i + 1 });
        }
    }
    Ok(())
}

/// Signed count of matched arrows along a walk.
pub fn degree(p: &PerfectMatching, w: &[(ArrowId, bool)]) -> i64 {
    w.iter()
        .map(|&(a, fwd)| match (p.contains(a), fwd) {
            (false, _) => 0,
            (true, true) => 1,
            (true, false) => -1,
        })
        .sum()
}

pub fn checked_degree(
    d: &DimerModel,
    p: &PerfectMatching,
    w: &[(ArrowId, bool)],
) -> Result<i64, MatchingError> {
    check_walk(d, w)?;
    Ok(degree(p, w))
}

/// Whether every vertex is reachable from `o` along arrows unmatched by all
/// members of `set`.
pub fn is_stable(d: &DimerModel, o: VertexId, set: &[&PerfectMatching]) -> bool {
    let mut seen = vec![false; d.num_vertices()];
    seen[o] = true;
    let mut queue = VecDeque::from([o]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for a in 0..d.num_arrows() {
            if d.tail(a) == v && !seen[d.head(a)] && set.iter().all(|p| !p.contains(a)) {
                seen[d.head(a)] = true;
                count += 1;
                queue.push_back(d.head(a));
            }
        }
    }
    count == d.num_vertices()
}

/// Closed weak walks through `o` whose offset classes are `(1,0)` and `(0,1)`.
pub fn basis_walks(d: &DimerModel, o: VertexId) -> Result<[WeakWalk; 2], TopologyError> {
    let d = d.with_offsets()?;
    let parent = d.spanning_tree(o);
    let paths: Vec<WeakWalk> = (0..d.num_vertices())
        .map(|v| d.tree_path(&parent, v))
        .collect();
    let fundamental: Vec<WeakWalk> = (0..d.num_arrows())
        .map(|a| {
            let mut w = paths[d.tail(a)].clone();
            w.push((a, true));
            w.extend(invert(&paths[d.head(a)]));
            w
        })
        .collect();
    let classes: Vec<Point> = fundamental
        .iter()
        .map(|w| d.walk_class(w).unwrap())
        .collect();
    let build = |target: Point| -> WeakWalk {
        let coef = lattice::integer_combination(&classes, target)
            .expect("offset classes span Z^2 on a torus dimer");
        let mut w = Vec::new();
        for (a, &c) in coef.iter().enumerate() {
            let piece = if c >= 0 {
                fundamental[a].clone()
            } else {
                invert(&fundamental[a])
            };
            for _ in 0..c.abs() {
                w.extend(piece.iter().copied());
            }
        }
        w
    };
    Ok([build([1, 0]), build([0, 1])])
}

pub fn invert(w: &[(ArrowId, bool)]) -> WeakWalk {
    w.iter().rev().map(|&(a, f)| (a, !f)).collect()
}

/// Lattice points of the matching polygon, with the matchings sitting at each
/// point and the o-stable ones among them.
#[derive(Clone, Debug)]
pub struct MatchingLattice {
    pub root: VertexId,
    pub matchings: Vec<PerfectMatching>,
    pub coords: Vec<Point>,
    /// Counter-clockwise strictly convex hull.
    pub hull: Vec<Point>,
    /// Boundary lattice points, counter-clockwise from the lexicographically
    /// smallest one.
    pub boundary: Vec<Point>,
    pub interior: Vec<Point>,
    /// Every lattice point of the polygon with the indices of the matchings
    /// there and of the stable ones among those.
    pub points: BTreeMap<Point, PointData>,
    /// Whether the coordinates were reflected so that every boundary segment
    /// gains the zig arrows of its zigzag cycle when traversed
    /// counter-clockwise.
    pub reflected: bool,
    /// Orientation sign of the unreflected coordinates, when determined.
    pub raw_orientation: Option<i8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointData {
    pub matchings: Vec<usize>,
    pub stable: Vec<usize>,
}

impl MatchingLattice {
    /// The unique stable matching at `p`, if there is exactly one.
    pub fn stable_at(&self, p: Point) -> Option<usize> {
        match self.points.get(&p)?.stable.as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    /// Stable matchings at the boundary points, in boundary order.
    pub fn boundary_stable(&self) -> Option<Vec<usize>> {
        self.boundary.iter().map(|&p| self.stable_at(p)).collect()
    }

    pub fn twice_area(&self) -> i64 {
        lattice::twice_area(&self.hull)
    }
}

/// Raw lattice coordinates `(P(x), P(y))` of every matching, with respect to
/// the dimer's offsets.
pub fn raw_coordinates(
    d: &DimerModel,
    o: VertexId,
    matchings: &[PerfectMatching],
) -> Result<Vec<Point>, TopologyError> {
    let [x, y] = basis_walks(d, o)?;
    Ok(matchings.iter().map(|p| [degree(p, &x), degree(p, &y)]).collect())
}

pub fn matching_lattice(d: &DimerModel, o: VertexId, exec: Exec) -> Result<MatchingLattice, MatchingError> {
    build_lattice(d, o, true, exec)
}

/// As [`matching_lattice`] but keeping the raw coordinate orientation.
pub fn matching_lattice_unoriented(
    d: &DimerModel,
    o: VertexId,
    exec: Exec,
) -> Result<MatchingLattice, MatchingError> {
    build_lattice(d, o, false, exec)
}

fn build_lattice(d: &DimerModel, o: VertexId, orient: bool, exec: Exec) -> Result<MatchingLattice, MatchingError> {
    if o >= d.num_vertices() {
        return Err(MatchingError::BadRoot { root: o });
    }
    let d = d.with_offsets()?;
    let matchings = enumerate_matchings(&d, exec);
    if matchings.is_empty() {
        return Err(MatchingError::NoMatchings);
    }
    let raw = raw_coordinates(&d, o, &matchings)?;
    let stable_single: Vec<bool> = par::map(exec, &matchings, |p| is_stable(&d, o, &[p]));
    let cycles = zigzag::zigzag_cycles(&d);
    let mut lat = assemble(o, matchings, raw.clone(), &stable_single, false);
    let tau = orientation_sign(&lat, &cycles);
    lat.raw_orientation = tau;
    if orient && tau == Some(-1) {
        let flipped = raw.iter().map(|p| [p[0], -p[1]]).collect();
        let matchings = std::mem::take(&mut lat.matchings);
        lat = assemble(o, matchings, flipped, &stable_single, true);
        lat.raw_orientation = tau;
    }
    Ok(lat)
}

fn assemble(
    root: VertexId,
    matchings: Vec<PerfectMatching>,
    coords: Vec<Point>,
    stable_single: &[bool],
    reflected: bool,
) -> MatchingLattice {
    let hull0 = lattice::convex_hull(&coords);
    let interior0 = lattice::interior_points(&hull0);
    let origin = if interior0.len() == 1 {
        interior0[0]
    } else {
        *hull0.iter().min().unwrap()
    };
    let coords: Vec<Point> = coords.iter().map(|&p| lattice::sub(p, origin)).collect();
    let hull = lattice::convex_hull(&coords);
    let interior = lattice::interior_points(&hull);
    let mut boundary = lattice::boundary_points(&hull);
    if let Some(start) = (0..boundary.len()).min_by_key(|&i| boundary[i]) {
        boundary.rotate_left(start);
    }
    let mut points: BTreeMap<Point, PointData> = BTreeMap::new();
    for &p in boundary.iter().chain(&interior) {
        points.insert(p, PointData::default());
    }
    for (i, &c) in coords.iter().enumerate() {
        let e = points.entry(c).or_default();
        e.matchings.push(i);
        if stable_single[i] {
            e.stable.push(i);
        }
    }
    MatchingLattice {
        root,
        matchings,
        coords,
        hull,
        boundary,
        interior,
        points,
        reflected,
        raw_orientation: None,
    }
}

/// `+1` when walking the boundary counter-clockwise always gains the zig
/// arrows of the segment's zigzag cycle, `-1` when it always gains the zag
/// arrows, `None` when the boundary does not behave this way.
pub fn orientation_sign(lat: &MatchingLattice, cycles: &[ZigzagCycle]) -> Option<i8> {
    let stable = lat.boundary_stable()?;
    let n = stable.len();
    let mut sign = None;
    for i in 0..n {
        let p = &lat.matchings[stable[i]];
        let q = &lat.matchings[stable[(i + 1) % n]];
        let gained = q.difference(p);
        let lost = p.difference(q);
        let here = cycles.iter().find_map(|z| {
            let (zig, zag) = (z.arrows_with(Parity::Zig), z.arrows_with(Parity::Zag));
            if gained == zig && lost == zag {
                Some(1)
            } else if gained == zag && lost == zig {
                Some(-1)
            } else {
                None
            }
        })?;
        match sign {
            None => sign = Some(here),
            Some(s) if s != here => return None,
            _ => {}
        }
    }
    sign
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexDiagnostic {
    #[error("lattice point ({}, {}) has {count} stable matchings", .point[0], .point[1])]
    StableCount { point: Point, count: usize },
    #[error("triangle {0:?} is not elementary")]
    NotElementary([Point; 3]),
    #[error("{triangles} triangles but {vertices} vertices")]
    TriangleCount { triangles: usize, vertices: usize },
    #[error("triangle areas sum to {sum}/2, polygon area is {hull}/2")]
    AreaMismatch { sum: i64, hull: i64 },
}

#[derive(Clone, Debug)]
pub struct StableComplex {
    /// Lattice points carrying a unique stable matching.
    pub vertices: Vec<Point>,
    pub edges: Vec<[Point; 2]>,
    pub triangles: Vec<[Point; 3]>,
    pub diagnostics: Vec<ComplexDiagnostic>,
}

impl StableComplex {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

pub fn stable_complex(d: &DimerModel, lat: &MatchingLattice) -> StableComplex {
    let o = lat.root;
    let mut diagnostics = Vec::new();
    let mut vertices = Vec::new();
    for (&p, data) in &lat.points {
        if data.stable.len() == 1 {
            vertices.push(p);
        } else {
            diagnostics.push(ComplexDiagnostic::StableCount {
                point: p,
                count: data.stable.len(),
            });
        }
    }
    let m = |p: &Point| &lat.matchings[lat.stable_at(*p).unwrap()];
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if !is_stable(d, o, &[m(&vertices[i]), m(&vertices[j])]) {
                continue;
            }
            edges.push([vertices[i], vertices[j]]);
            for k in j + 1..vertices.len() {
                if is_stable(d, o, &[m(&vertices[i]), m(&vertices[j]), m(&vertices[k])]) {
                    triangles.push([vertices[i], vertices[j], vertices[k]]);
                }
            }
        }
    }
    let mut sum = 0;
    for t in &triangles {
        let a = lattice::det2(lattice::sub(t[1], t[0]), lattice::sub(t[2], t[0])).abs();
        if a != 1 {
            diagnostics.push(ComplexDiagnostic::NotElementary(*t));
        }
        sum += a;
    }
    if triangles.len() != d.num_vertices() {
        diagnostics.push(ComplexDiagnostic::TriangleCount {
            triangles: triangles.len(),
            vertices: d.num_vertices(),
        });
    }
    if sum != lat.twice_area() {
        diagnostics.push(ComplexDiagnostic::AreaMismatch {
            sum,
            hull: lat.twice_area(),
        });
    }
    StableComplex {
        vertices,
        edges,
        triangles,
        diagnostics,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("boundary point ({}, {}) has no unique stable matching", .0[0], .0[1])]
    NoStable(Point),
    #[error("segment {segment}: sym-diff is not a zigzag cycle")]
    NotZigzag { segment: usize },
}

/// For each boundary segment (from point `i` to point `i+1`), the index of the
/// zigzag cycle whose arrows form the symmetric difference of the two stable
/// matchings.
pub fn boundary_zigzags(lat: &MatchingLattice, cycles: &[ZigzagCycle]) -> Result<Vec<usize>, BoundaryError> {
    let n = lat.boundary.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (p, q) = (lat.boundary[i], lat.boundary[(i + 1) % n]);
        let sp = lat.stable_at(p).ok_or(BoundaryError::NoStable(p))?;
        let sq = lat.stable_at(q).ok_or(BoundaryError::NoStable(q))?;
        let diff = lat.matchings[sp].symmetric_difference(&lat.matchings[sq]);
        let z = cycles
            .iter()
            .position(|z| z.arrow_set() == diff && z.arrows.len() == diff.len())
            .ok_or(BoundaryError::NotZigzag { segment: i })?;
        out.push(z);
    }
    Ok(out)
}

/// Checks that every arrow lies in the stable boundary matchings of a
/// nonempty proper cyclic arc whose two end segments carry the zig and zag
/// cycles of the arrow. Returns the offending arrows.
pub fn arc_violations(d: &DimerModel, lat: &MatchingLattice, cycles: &[ZigzagCycle]) -> Vec<ArrowId> {
    let Some(stable) = lat.boundary_stable() else {
        return (0..d.num_arrows()).collect();
    };
    let Ok(segments) = boundary_zigzags(lat, cycles) else {
        return (0..d.num_arrows()).collect();
    };
    let (zig, zag) = zigzag::cycle_index(d, cycles);
    let n = stable.len();
    (0..d.num_arrows())
        .filter(|&a| {
            let member: Vec<bool> = stable.iter().map(|&s| lat.matchings[s].contains(a)).collect();
            let Some((start, end)) = cyclic_arc(&member) else {
                return true;
            };
            // Segment entering the arc ends at `start`, segment leaving starts at `end`.
            let entering = segments[(start + n - 1) % n];
            let leaving = segments[end];
            let mut ends = [entering, leaving];
            ends.sort();
            let mut expect = [zig[a], zag[a]];
            expect.sort();
            ends != expect
        })
        .collect()
}

/// `(start, end)` of the unique maximal cyclic run of `true`, if the `true`
/// entries form one nonempty proper run.
pub fn cyclic_arc(member: &[bool]) -> Option<(usize, usize)> {
    let n = member.len();
    let count = member.iter().filter(|&&b| b).count();
    if count == 0 || count == n {
        return None;
    }
    let starts: Vec<usize> = (0..n)
        .filter(|&i| member[i] && !member[(i + n - 1) % n])
        .collect();
    if starts.len() != 1 {
        return None;
    }
    let start = starts[0];
    Some((start, (start + count - 1) % n))
}

/// Whether the marked boundary points form an arc, nothing, or everything.
pub fn is_arc_or_trivial(member: &[bool]) -> bool {
    let count = member.iter().filter(|&&b| b).count();
    count == 0 || count == member.len() || cyclic_arc(member).is_some()
}

/// Euler characteristic and connectedness of the subcomplex spanned by the
/// given vertices.
pub fn induced_subcomplex(complex: &StableComplex, keep: &BTreeSet<Point>) -> (i64, bool) {
    let v: Vec<Point> = complex.vertices.iter().filter(|p| keep.contains(*p)).copied().collect();
    let e: Vec<&[Point; 2]> = complex
        .edges
        .iter()
        .filter(|e| e.iter().all(|p| keep.contains(p)))
        .collect();
    let t = complex
        .triangles
        .iter()
        .filter(|t| t.iter().all(|p| keep.contains(p)))
        .count();
    let chi = v.len() as i64 - e.len() as i64 + t as i64;
    let mut comp: BTreeMap<Point, Point> = v.iter().map(|&p| (p, p)).collect();
    fn root(comp: &BTreeMap<Point, Point>, mut p: Point) -> Point {
        while comp[&p] != p {
            p = comp[&p];
        }
        p
    }
    for [a, b] in e.iter().map(|e| **e) {
        let (ra, rb) = (root(&comp, a), root(&comp, b));
        if ra != rb {
            comp.insert(ra.max(rb), ra.min(rb));
        }
    }
    let roots: BTreeSet<Point> = v.iter().map(|&p| root(&comp, p)).collect();
    (chi, roots.len() <= 1)
}

/// Random weak walk: uniform length in `0..=2·|Q₁|`, each step choosing a
/// direction uniformly and then an arrow uniformly among those leaving the
/// current vertex in that direction.
pub fn random_walk<R: Rng>(d: &DimerModel, rng: &mut R) -> WeakWalk {
    let len = rng.gen_range(0..=2 * d.num_arrows());
    let mut v = rng.gen_range(0..d.num_vertices());
    let mut w = Vec::with_capacity(len);
    for _ in 0..len {
        let forward = rng.gen_bool(0.5);
        let options: Vec<ArrowId> = (0..d.num_arrows())
            .filter(|&a| if forward { d.tail(a) == v } else { d.head(a) == v })
            .collect();
        let (options, forward) = if options.is_empty() {
            (
                (0..d.num_arrows())
                    .filter(|&a| if forward { d.head(a) == v } else { d.tail(a) == v })
                    .collect(),
                !forward,
            )
        } else {
            (options, forward)
        };
        let a = options[rng.gen_range(0..options.len())];
        v = if forward { d.head(a) } else { d.tail(a) };
        w.push((a, forward));
    }
    w
}

/// Outcome of the sampled walk checks on one dimer.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct WalkChecks {
    pub samples: usize,
    pub seed: u64,
    /// Arrows whose boundary membership is not an arc between its zig and zag cycles.
    pub arc_failures: Vec<String>,
    /// Sample indices where a sign side of the stable complex is not a
    /// nonempty connected complex with Euler characteristic 1.
    pub complex_failures: Vec<usize>,
    /// Sample indices where the nonnegative boundary matchings are not an arc.
    pub boundary_failures: Vec<usize>,
}

impl WalkChecks {
    pub fn holds(&self) -> bool {
        self.arc_failures.is_empty() && self.complex_failures.is_empty() && self.boundary_failures.is_empty()
    }
}

/// Runs the arc property for every arrow and, on `samples` seeded random weak
/// walks, the contractibility of both sign sides of the stable complex and
/// the arc shape of the nonnegative boundary matchings. An empty side is
/// accepted.
pub fn walk_checks(d: &DimerModel, lat: &MatchingLattice, samples: usize, seed: u64, exec: Exec) -> WalkChecks {
    use rand::SeedableRng;
    let cycles = zigzag::zigzag_cycles(d);
    let arc_failures = arc_violations(d, lat, &cycles)
        .into_iter()
        .map(|a| d.arrow_name(a).to_string())
        .collect();
    let complex = stable_complex(d, lat);
    let boundary = lat.boundary_stable().unwrap_or_default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let walks: Vec<WeakWalk> = (0..samples).map(|_| random_walk(d, &mut rng)).collect();
    let verdicts = par::map(exec, &walks, |w| {
        let (mut pos, mut neg) = (BTreeSet::new(), BTreeSet::new());
        for &p in &complex.vertices {
            let m = &lat.matchings[lat.stable_at(p).unwrap()];
            if degree(m, w) >= 0 {
                pos.insert(p);
            } else {
                neg.insert(p);
            }
        }
        let contractible = |side: &BTreeSet<Point>| {
            side.is_empty() || induced_subcomplex(&complex, side) == (1, true)
        };
        let member: Vec<bool> = boundary.iter().map(|&s| degree(&lat.matchings[s], w) >= 0).collect();
        (contractible(&pos) && contractible(&neg), is_arc_or_trivial(&member))
    });
    let mut out = WalkChecks {
        samples,
        seed,
        arc_failures,
        ..WalkChecks::default()
    };
    for (i, (complex_ok, boundary_ok)) in verdicts.into_iter().enumerate() {
        if !complex_ok {
            out.complex_failures.push(i);
        }
        if !boundary_ok {
            out.boundary_failures.push(i);
        }
    }
    out
}

/// Whether a lattice point lies in the polygon.
pub fn in_polygon(lat: &MatchingLattice, p: Point) -> bool {
    lattice::locate(&lat.hull, p) != Location::Outside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn brute_force(d: &DimerModel) -> Vec<Vec<ArrowId>> {
        let n = d.num_arrows();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let m = PerfectMatching::from_arrows(n, &(0..n).filter(|a| mask >> a & 1 == 1).collect::<Vec<_>>());
            if m.is_perfect_matching_of(d) {
                out.push(m.arrows());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        for name in ["c3", "conifold", "p2", "p1xp1", "dp1", "example-inconsistent"] {
            let d = catalog::dimer(name).unwrap();
            let got: Vec<Vec<ArrowId>> = enumerate_matchings(&d, Exec::Sequential)
                .iter()
                .map(|m| m.arrows())
                .collect();
            assert_eq!(got, brute_force(&d), "{name}");
        }
        let c3 = catalog::dimer("c3").unwrap();
        assert_eq!(enumerate_matchings(&c3, Exec::Parallel).len(), 3);
    }

    #[test]
    fn degree_of_simple_walks() {
        let d = catalog::dimer("c3").unwrap();
        let x = PerfectMatching::from_arrows(3, &[0]);
        assert_eq!(degree(&x, &[]), 0);
        assert_eq!(checked_degree(&d, &x, &[(0, true), (1, false)]).unwrap(), 1);
        for f in d.faces() {
            let w: WeakWalk = f.arrows.iter().map(|&a| (a, true)).collect();
            assert_eq!(degree(&x, &w), 1);
        }
    }

    #[test]
    fn basis_walks_have_unit_classes() {
        for name in ["c3", "p2", "dp3"] {
            let d = catalog::dimer(name).unwrap().with_offsets().unwrap();
            let [x, y] = basis_walks(&d, 0).unwrap();
            check_walk(&d, &x).unwrap();
            check_walk(&d, &y).unwrap();
            assert_eq!(d.walk_class(&x), Some([1, 0]));
            assert_eq!(d.walk_class(&y), Some([0, 1]));
        }
    }

    #[test]
    fn small_polygons() {
        let cases = [("c3", 1, 0, 3), ("conifold", 2, 0, 4), ("p2", 3, 1, 3)];
        for (name, area2, interior, boundary) in cases {
            let d = catalog::dimer(name).unwrap();
            let lat = matching_lattice(&d, 0, Exec::Sequential).unwrap();
            assert_eq!(lat.twice_area(), area2, "{name}");
            assert_eq!(lat.interior.len(), interior, "{name}");
            assert_eq!(lat.boundary.len(), boundary, "{name}");
            let complex = stable_complex(&d, &lat);
            assert!(complex.is_valid(), "{name}: {:?}", complex.diagnostics);
            assert_eq!(complex.triangles.len(), d.num_vertices());
        }
    }

    #[test]
    fn arcs() {
        assert_eq!(cyclic_arc(&[true, false, false, true]), Some((3, 0)));
        assert_eq!(cyclic_arc(&[true, false, true, false]), None);
        assert!(is_arc_or_trivial(&[false; 4]));
        assert!(is_arc_or_trivial(&[true; 4]));
    }
}

#[cfg(test)]
mod walk_tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn sampled_walk_checks_hold_on_consistent_catalog() {
        for name in catalog::dimer_names() {
            let d = catalog::dimer(name).unwrap();
            if !d.is_torus() || !zigzag::is_consistent(&d).is_consistent() {
                continue;
            }
            let lat = matching_lattice(&d, 0, Exec::Parallel).unwrap();
            let checks = walk_checks(&d, &lat, 200, 7, Exec::Parallel);
            assert!(checks.holds(), "{name}: {checks:?}");
        }
    }
}
