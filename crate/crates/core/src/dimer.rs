//! Dimer models given by signed face cycles: validation, derived vertices,
//! genus, homology offsets and isomorphism testing.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{self, Point};
use crate::lp::Q;

pub type ArrowId = usize;
pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

/// A face boundary listed in composition order: the head of each arrow is the
/// tail of the next one, cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub sign: Sign,
    pub arrows: Vec<ArrowId>,
}

impl Face {
    pub fn new(sign: Sign, arrows: Vec<ArrowId>) -> Self {
        Face { sign, arrows }
    }
}

/// Unvalidated dimer description, as read from a file or produced by a
/// construction.
#[derive(Clone, Debug, Default)]
pub struct RawDimer {
    pub name: String,
    pub arrows: Vec<String>,
    pub faces: Vec<Face>,
    /// Per-arrow endpoint labels `(tail, head)`.
    pub endpoints: Vec<Option<(String, String)>>,
    /// Per-arrow torus crossing numbers.
    pub offsets: Vec<Option<Point>>,
    /// Vertex label to position in the unit square.
    pub positions: BTreeMap<String, [Q; 2]>,
}

impl RawDimer {
    pub fn new(name: impl Into<String>) -> Self {
        RawDimer {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_arrow(&mut self, name: impl Into<String>) -> ArrowId {
        self.arrows.push(name.into());
        self.endpoints.push(None);
        self.offsets.push(None);
        self.arrows.len() - 1
    }

    pub fn add_face(&mut self, sign: Sign, arrows: Vec<ArrowId>) {
        self.faces.push(Face::new(sign, arrows));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("dimer has no arrows")]
    Empty,
    #[error("face {face} references unknown arrow index {arrow}")]
    UnknownArrow { face: usize, arrow: usize },
    #[error("face {face} has length {len}, need at least 3")]
    FaceTooShort { face: usize, len: usize },
    #[error("face {face} repeats arrow {arrow}")]
    RepeatedArrow { face: usize, arrow: String },
    #[error("arrow {arrow} in two {sign} faces ({first} and {second})")]
    ArrowInTwoFaces {
        arrow: String,
        sign: Sign,
        first: usize,
        second: usize,
    },
    #[error("face {face} ({arrows}) does not compose: {arrow} ends at {head} but {next} starts at {tail}")]
    FaceBreaks {
        face: usize,
        arrows: String,
        arrow: String,
        next: String,
        head: String,
        tail: String,
    },
    #[error("arrow {arrow} is in no {sign} face")]
    ArrowMissingFace { arrow: String, sign: Sign },
    #[error("arrow {arrow}: declared {end} {declared} conflicts with derived vertex of {other}")]
    EndpointMismatch {
        arrow: String,
        end: &'static str,
        declared: String,
        other: String,
    },
    #[error("vertex label {label} names two distinct derived vertices")]
    SplitLabel { label: String },
    #[error("offsets given for some arrows but not for {arrow}")]
    PartialOffsets { arrow: String },
    #[error("face {face} has offset sum ({}, {}), expected (0, 0)", .sum[0], .sum[1])]
    OffsetFaceSum { face: usize, sum: Point },
    #[error("offsets given on a surface of genus {genus}")]
    OffsetsOffTorus { genus: i64 },
    #[error("offset classes of cycles span a sublattice of index {index} instead of Z^2")]
    OffsetsNotSpanning { index: i64 },
    #[error("the glued surface is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("non-surface gluing (euler characteristic {chi})")]
    NonSurface { chi: i64 },
    #[error("position of vertex {vertex} is outside the unit square")]
    PositionOutOfRange { vertex: String },
    #[error("position given for unknown vertex {vertex}")]
    UnknownPositionVertex { vertex: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid dimer: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError(pub Vec<Violation>);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("not a torus dimer (genus {genus})")]
    NotTorus { genus: i64 },
}

/// A validated dimer model.
#[derive(Clone, Debug)]
pub struct DimerModel {
    name: String,
    arrow_names: Vec<String>,
    faces: Vec<Face>,
    vertex_labels: Vec<String>,
    head: Vec<VertexId>,
    tail: Vec<VertexId>,
    /// Per arrow: (face index, position) in its positive and negative face.
    pos_slot: Vec<(usize, usize)>,
    neg_slot: Vec<(usize, usize)>,
    offsets: Option<Vec<Point>>,
    positions: Vec<Option<[Q; 2]>>,
    chi: i64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Head and tail vertex of every arrow, with vertices numbered by first
/// appearance when scanning arrows in order (tail before head).
pub fn derive_vertices(num_arrows: usize, faces: &[Face]) -> (usize, Vec<VertexId>, Vec<VertexId>) {
    let mut uf = UnionFind::new(2 * num_arrows);
    for f in faces {
        let n = f.arrows.len();
        for i in 0..n {
            let a = f.arrows[i];
            let b = f.arrows[(i + 1) % n];
            uf.union(2 * a + 1, 2 * b);
        }
    }
    let mut ids: BTreeMap<usize, VertexId> = BTreeMap::new();
    let mut tail = vec![0; num_arrows];
    let mut head = vec![0; num_arrows];
    for a in 0..num_arrows {
        for (slot, out) in [(2 * a, &mut tail), (2 * a + 1, &mut head)] {
            let root = uf.find(slot);
            let next = ids.len();
            out[a] = *ids.entry(root).or_insert(next);
        }
    }
    (ids.len(), head, tail)
}

pub fn validate(raw: &RawDimer) -> Result<DimerModel, ValidationError> {
    let mut errs = Vec::new();
    let n = raw.arrows.len();
    if n == 0 {
        return Err(ValidationError(vec![Violation::Empty]));
    }
    let name = |a: ArrowId| raw.arrows[a].clone();
    let mut pos_slot: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut neg_slot: Vec<Option<(usize, usize)>> = vec![None; n];
    for (fi, f) in raw.faces.iter().enumerate() {
        if let Some(&bad) = f.arrows.iter().find(|&&a| a >= n) {
            errs.push(Violation::UnknownArrow { face: fi, arrow: bad });
            continue;
        }
        if f.arrows.len() < 3 {
            errs.push(Violation::FaceTooShort {
                face: fi,
                len: f.arrows.len(),
            });
        }
        let len = f.arrows.len();
        for i in 0..len {
            let (a, b) = (f.arrows[i], f.arrows[(i + 1) % len]);
            if let (Some((_, head)), Some((tail, _))) = (&raw.endpoints[a], &raw.endpoints[b]) {
                if head != tail {
                    errs.push(Violation::FaceBreaks {
                        face: fi,
                        arrows: format!(
                            "{} {}",
                            f.sign.symbol(),
                            f.arrows.iter().map(|&x| raw.arrows[x].as_str()).collect::<Vec<_>>().join(" ")
                        ),
                        arrow: name(a),
                        next: name(b),
                        head: head.clone(),
                        tail: tail.clone(),
                    });
                    break;
                }
            }
        }
        let mut seen = vec![false; n];
        for (i, &a) in f.arrows.iter().enumerate() {
            if seen[a] {
                errs.push(Violation::RepeatedArrow {
                    face: fi,
                    arrow: name(a),
                });
                continue;
            }
            seen[a] = true;
            let slots = match f.sign {
                Sign::Positive => &mut pos_slot,
                Sign::Negative => &mut neg_slot,
            };
            match slots[a] {
                Some((first, _)) => errs.push(Violation::ArrowInTwoFaces {
                    arrow: name(a),
                    sign: f.sign,
                    first,
                    second: fi,
                }),
                None => slots[a] = Some((fi, i)),
            }
        }
    }
    for a in 0..n {
        for (slots, sign) in [(&pos_slot, Sign::Positive), (&neg_slot, Sign::Negative)] {
            if slots[a].is_none() {
                errs.push(Violation::ArrowMissingFace {
                    arrow: name(a),
                    sign,
                });
            }
        }
    }
    if !errs.is_empty() {
        return Err(ValidationError(errs));
    }
    let pos_slot: Vec<(usize, usize)> = pos_slot.into_iter().map(Option::unwrap).collect();
    let neg_slot: Vec<(usize, usize)> = neg_slot.into_iter().map(Option::unwrap).collect();

    let (nv, head, tail) = derive_vertices(n, &raw.faces);

    // Connectivity of the glued surface: arrows sharing a face are adjacent.
    let mut uf = UnionFind::new(n);
    for f in &raw.faces {
        for w in f.arrows.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let components = (0..n).filter(|&a| uf.find(a) == a).count();
    if components > 1 {
        errs.push(Violation::Disconnected { components });
    }
    let chi = nv as i64 - n as i64 + raw.faces.len() as i64;
    if components == 1 && (chi > 2 || chi % 2 != 0) {
        errs.push(Violation::NonSurface { chi });
    }

    let vertex_labels = vertex_labels(raw, nv, &head, &tail, &mut errs);

    let mut positions = vec![None; nv];
    for (label, p) in &raw.positions {
        let zero = Q::from_integer(0.into());
        let one = Q::from_integer(1.into());
        if p.iter().any(|c| *c < zero || *c >= one) {
            errs.push(Violation::PositionOutOfRange {
                vertex: label.clone(),
            });
        }
        match vertex_labels.iter().position(|l| l == label) {
            Some(v) => positions[v] = Some(p.clone()),
            None => errs.push(Violation::UnknownPositionVertex {
                vertex: label.clone(),
            }),
        }
    }

    let offsets = if raw.offsets.iter().all(Option::is_none) {
        None
    } else {
        match raw.offsets.iter().position(Option::is_none) {
            Some(a) => {
                errs.push(Violation::PartialOffsets { arrow: name(a) });
                None
            }
            None => Some(raw.offsets.iter().map(|o| o.unwrap()).collect::<Vec<_>>()),
        }
    };
    if let Some(off) = &offsets {
        for (fi, f) in raw.faces.iter().enumerate() {
            let sum = f
                .arrows
                .iter()
                .fold([0, 0], |s, &a| lattice::add(s, off[a]));
            if sum != [0, 0] {
                errs.push(Violation::OffsetFaceSum { face: fi, sum });
            }
        }
    }

    if !errs.is_empty() {
        return Err(ValidationError(errs));
    }
    let d = DimerModel {
        name: raw.name.clone(),
        arrow_names: raw.arrows.clone(),
        faces: raw.faces.clone(),
        vertex_labels,
        head,
        tail,
        pos_slot,
        neg_slot,
        offsets,
        positions,
        chi,
    };
    if let Some(off) = &d.offsets {
        let genus = d.genus();
        if genus != 1 {
            return Err(ValidationError(vec![Violation::OffsetsOffTorus { genus }]));
        }
        let index = d.cycle_lattice_index(off);
        if index != 1 {
            return Err(ValidationError(vec![Violation::OffsetsNotSpanning { index }]));
        }
    }
    Ok(d)
}

fn vertex_labels(
    raw: &RawDimer,
    nv: usize,
    head: &[VertexId],
    tail: &[VertexId],
    errs: &mut Vec<Violation>,
) -> Vec<String> {
    let mut labels: Vec<Option<String>> = vec![None; nv];
    for (a, ep) in raw.endpoints.iter().enumerate() {
        let Some((t, h)) = ep else { continue };
        for (end, v, declared) in [("tail", tail[a], t), ("head", head[a], h)] {
            match &labels[v] {
                Some(existing) if existing != declared => errs.push(Violation::EndpointMismatch {
                    arrow: raw.arrows[a].clone(),
                    end,
                    declared: declared.clone(),
                    other: existing.clone(),
                }),
                Some(_) => {}
                None => labels[v] = Some(declared.clone()),
            }
        }
    }
    let mut owner: BTreeMap<String, VertexId> = BTreeMap::new();
    for (v, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            if let Some(&w) = owner.get(l) {
                if w != v {
                    errs.push(Violation::SplitLabel { label: l.clone() });
                }
            } else {
                owner.insert(l.clone(), v);
            }
        }
    }
    let mut next = 1;
    labels
        .into_iter()
        .map(|l| {
            l.unwrap_or_else(|| loop {
                let cand = format!("v{next}");
                next += 1;
                if !owner.contains_key(&cand) {
                    break cand;
                }
            })
        })
        .collect()
}

impl DimerModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_arrows(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrow_names[a]
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrow_names
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_names.iter().position(|n| n == name)
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn head(&self, a: ArrowId) -> VertexId {
        self.head[a]
    }

    pub fn tail(&self, a: ArrowId) -> VertexId {
        self.tail[a]
    }

    pub fn offsets(&self) -> Option<&[Point]> {
        self.offsets.as_deref()
    }

    pub fn position(&self, v: VertexId) -> Option<&[Q; 2]> {
        self.positions[v].as_ref()
    }

    /// The face of the given sign containing `a`, and the position of `a` in it.
    pub fn face_slot(&self, a: ArrowId, sign: Sign) -> (usize, usize) {
        match sign {
            Sign::Positive => self.pos_slot[a],
            Sign::Negative => self.neg_slot[a],
        }
    }

    /// The arrow following `a` in its face of the given sign.
    pub fn face_successor(&self, a: ArrowId, sign: Sign) -> ArrowId {
        let (f, i) = self.face_slot(a, sign);
        let arrows = &self.faces[f].arrows;
        arrows[(i + 1) % arrows.len()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chi
    }

    pub fn genus(&self) -> i64 {
        (2 - self.chi) / 2
    }

    pub fn is_torus(&self) -> bool {
        self.genus() == 1
    }

    pub fn arrows_between(&self, from: VertexId, to: VertexId) -> usize {
        (0..self.num_arrows())
            .filter(|&a| self.tail[a] == from && self.head[a] == to)
            .count()
    }

    /// Spanning tree of the underlying undirected graph: for each vertex other
    /// than `root`, the arrow used to reach it and whether it was traversed
    /// forward. Breadth-first with arrows scanned in id order.
    pub fn spanning_tree(&self, root: VertexId) -> Vec<Option<(ArrowId, bool)>> {
        let nv = self.num_vertices();
        let mut parent = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for a in 0..self.num_arrows() {
                let step = if self.tail[a] == v {
                    Some((self.head[a], true))
                } else if self.head[a] == v {
                    Some((self.tail[a], false))
                } else {
                    None
                };
                if let Some((w, fwd)) = step {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((a, fwd));
                        queue.push_back(w);
                    }
                }
            }
        }
        parent
    }

    /// Weak walk along the spanning tree from `root` to `v`, as
    /// `(arrow, forward)` steps.
    pub fn tree_path(&self, parent: &[Option<(ArrowId, bool)>], v: VertexId) -> Vec<(ArrowId, bool)> {
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some((a, fwd)) = parent[cur] {
            steps.push((a, fwd));
            cur = if fwd { self.tail[a] } else { self.head[a] };
        }
        steps.reverse();
        steps
    }

    /// Index of the lattice spanned by the offset classes of all closed walks,
    /// or 0 when the span has rank below 2.
    fn cycle_lattice_index(&self, off: &[Point]) -> i64 {
        let parent = self.spanning_tree(0);
        let potential: Vec<Point> = (0..self.num_vertices())
            .map(|v| {
                self.tree_path(&parent, v)
                    .iter()
                    .fold([0, 0], |s, &(a, fwd)| {
                        if fwd {
                            lattice::add(s, off[a])
                        } else {
                            lattice::sub(s, off[a])
                        }
                    })
            })
            .collect();
        let classes: Vec<Point> = (0..self.num_arrows())
            .map(|a| {
                lattice::sub(
                    lattice::add(potential[self.tail[a]], off[a]),
                    potential[self.head[a]],
                )
            })
            .collect();
        let rows = vec![
            classes.iter().map(|c| c[0]).collect::<Vec<_>>(),
            classes.iter().map(|c| c[1]).collect(),
        ];
        let ce = lattice::column_echelon(&rows, classes.len());
        if ce.rank < 2 {
            return 0;
        }
        (ce.h[0][0] * ce.h[1][1]).abs() as i64
    }

    /// Offsets realizing an isomorphism from first homology to Z²: zero on a
    /// spanning tree, and on the remaining arrows a basis of the integer
    /// functionals vanishing on every face boundary.
    pub fn derive_offsets(&self) -> Result<Vec<Point>, TopologyError> {
        let genus = self.genus();
        if genus != 1 {
            return Err(TopologyError::NotTorus { genus });
        }
        let parent = self.spanning_tree(0);
        let mut in_tree = vec![false; self.num_arrows()];
        for (a, _) in parent.iter().flatten() {
            in_tree[*a] = true;
        }
        let free: Vec<ArrowId> = (0..self.num_arrows()).filter(|&a| !in_tree[a]).collect();
        let rows: Vec<Vec<i64>> = self
            .faces
            .iter()
            .map(|f| {
                free.iter()
                    .map(|a| i64::from(f.arrows.contains(a)))
                    .collect()
            })
            .collect();
        let kernel = lattice::integer_kernel(&rows, free.len());
        debug_assert_eq!(kernel.len(), 2);
        let mut off = vec![[0, 0]; self.num_arrows()];
        for (i, &a) in free.iter().enumerate() {
            off[a] = [kernel[0][i], kernel[1][i]];
        }
        Ok(off)
    }

    /// This model with offsets attached, deriving them if absent.
    pub fn with_offsets(&self) -> Result<DimerModel, TopologyError> {
        let mut d = self.clone();
        if d.offsets.is_none() {
            d.offsets = Some(self.derive_offsets()?);
        }
        Ok(d)
    }

    /// This model with the given offsets, which must satisfy the offset
    /// invariants.
    pub fn replace_offsets(&self, off: Vec<Point>) -> Result<DimerModel, ValidationError> {
        let mut raw = self.to_raw();
        raw.offsets = off.into_iter().map(Some).collect();
        validate(&raw)
    }

    pub fn without_offsets(&self) -> DimerModel {
        let mut d = self.clone();
        d.offsets = None;
        d
    }

    /// Sum of offsets along a weak walk.
    pub fn walk_class(&self, walk: &[(ArrowId, bool)]) -> Option<Point> {
        let off = self.offsets.as_ref()?;
        Some(walk.iter().fold([0, 0], |s, &(a, fwd)| {
            if fwd {
                lattice::add(s, off[a])
            } else {
                lattice::sub(s, off[a])
            }
        }))
    }

    pub fn to_raw(&self) -> RawDimer {
        let mut raw = RawDimer::new(self.name.clone());
        for (a, n) in self.arrow_names.iter().enumerate() {
            raw.add_arrow(n.clone());
            raw.endpoints[a] = Some((
                self.vertex_labels[self.tail[a]].clone(),
                self.vertex_labels[self.head[a]].clone(),
            ));
            if let Some(off) = &self.offsets {
                raw.offsets[a] = Some(off[a]);
            }
        }
        raw.faces = self.faces.clone();
        for (v, p) in self.positions.iter().enumerate() {
            if let Some(p) = p {
                raw.positions.insert(self.vertex_labels[v].clone(), p.clone());
            }
        }
        raw
    }

    /// An arrow bijection `self → other` preserving face signs and cyclic
    /// boundary order, if one exists.
    pub fn is_isomorphic(&self, other: &DimerModel) -> Option<Vec<ArrowId>> {
        if self.num_arrows() != other.num_arrows()
            || self.num_faces() != other.num_faces()
            || self.num_vertices() != other.num_vertices()
            || face_signature(self) != face_signature(other)
        {
            return None;
        }
        // Anchor on an arrow of a shortest positive face.
        let anchor_face = self
            .faces
            .iter()
            .filter(|f| f.sign == Sign::Positive)
            .min_by_key(|f| f.arrows.len())?;
        let anchor = anchor_face.arrows[0];
        (0..other.num_arrows()).find_map(|cand| propagate(self, other, anchor, cand))
    }
}

fn face_signature(d: &DimerModel) -> Vec<(Sign, usize)> {
    let mut s: Vec<(Sign, usize)> = d.faces.iter().map(|f| (f.sign, f.arrows.len())).collect();
    s.sort();
    s
}

fn propagate(d1: &DimerModel, d2: &DimerModel, a: ArrowId, b: ArrowId) -> Option<Vec<ArrowId>> {
    let n = d1.num_arrows();
    let mut map: Vec<Option<ArrowId>> = vec![None; n];
    let mut used = vec![false; n];
    map[a] = Some(b);
    used[b] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        let y = map[x].unwrap();
        for sign in [Sign::Positive, Sign::Negative] {
            let (f1, i1) = d1.face_slot(x, sign);
            let (f2, i2) = d2.face_slot(y, sign);
            let c1 = &d1.faces[f1].arrows;
            let c2 = &d2.faces[f2].arrows;
            if c1.len() != c2.len() {
                return None;
            }
            let len = c1.len();
            for k in 1..len {
                let p = c1[(i1 + k) % len];
                let q = c2[(i2 + k) % len];
                match map[p] {
                    Some(existing) if existing != q => return None,
                    Some(_) => {}
                    None => {
                        if used[q] {
                            return None;
                        }
                        map[p] = Some(q);
                        used[q] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    map.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(arrows: &[&str], faces: &[(Sign, &[&str])]) -> RawDimer {
        let mut r = RawDimer::new("t");
        for a in arrows {
            r.add_arrow(*a);
        }
        for (s, f) in faces {
            let ids = f
                .iter()
                .map(|n| arrows.iter().position(|a| a == n).unwrap())
                .collect();
            r.add_face(*s, ids);
        }
        r
    }

    use Sign::{Negative as N, Positive as P};

    fn c3() -> RawDimer {
        raw(&["x", "y", "z"], &[(P, &["x", "y", "z"]), (N, &["x", "z", "y"])])
    }

    fn p2() -> RawDimer {
        let names = ["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3"];
        raw(
            &names,
            &[
                (P, &["x1", "y2", "z3"]),
                (P, &["x2", "y3", "z1"]),
                (P, &["x3", "y1", "z2"]),
                (N, &["x1", "y3", "z2"]),
                (N, &["x2", "y1", "z3"]),
                (N, &["x3", "y2", "z1"]),
            ],
        )
    }

    #[test]
    fn c3_has_one_vertex_and_genus_one() {
        let d = validate(&c3()).unwrap();
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.euler_characteristic(), 0);
        assert_eq!(d.genus(), 1);
    }

    #[test]
    fn duplicate_positive_face_is_reported() {
        let r = raw(&["x", "y", "z"], &[(P, &["x", "y", "z"]), (P, &["x", "z", "y"])]);
        let err = validate(&r).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("arrow x in two positive faces"), "{text}");
        assert!(err
            .0
            .iter()
            .any(|v| matches!(v, Violation::ArrowMissingFace { sign: Sign::Negative, .. })));
    }

    #[test]
    fn p2_vertices_match_declared_letters() {
        let d = validate(&p2()).unwrap();
        assert_eq!(d.num_vertices(), 3);
        assert_eq!(d.genus(), 1);
        // x-arrows share tails, y-arrows start where x-arrows end.
        for i in 0..3 {
            assert_eq!(d.tail(i), d.tail(0));
            assert_eq!(d.head(i), d.tail(3));
            assert_eq!(d.head(3 + i), d.tail(6));
            assert_eq!(d.head(6 + i), d.tail(0));
        }
    }

    #[test]
    fn declared_endpoint_conflict_is_reported() {
        let mut r = p2();
        r.endpoints[0] = Some(("1".into(), "2".into()));
        r.endpoints[3] = Some(("3".into(), "1".into()));
        let err = validate(&r).unwrap_err();
        assert!(matches!(err.0[0], Violation::EndpointMismatch { .. }));
    }

    #[test]
    fn derived_offsets_are_closed_and_unimodular() {
        for r in [c3(), p2()] {
            let d = validate(&r).unwrap();
            let off = d.derive_offsets().unwrap();
            let d2 = d.replace_offsets(off).unwrap();
            assert_eq!(d2.cycle_lattice_index(d2.offsets().unwrap()), 1);
        }
    }

    #[test]
    fn bad_offsets_are_rejected() {
        let mut r = c3();
        r.offsets = vec![Some([1, 0]), Some([0, 1]), Some([0, 0])];
        assert!(validate(&r).is_err());
        r.offsets = vec![Some([2, 0]), Some([0, 1]), Some([-2, -1])];
        let err = validate(&r).unwrap_err();
        assert_eq!(err.0, vec![Violation::OffsetsNotSpanning { index: 2 }]);
    }

    #[test]
    fn isomorphism_under_relabeling_and_rotation() {
        let d = validate(&p2()).unwrap();
        let mut r = p2();
        r.faces[0].arrows.rotate_left(1);
        r.faces.swap(1, 4);
        let perm = [4, 7, 1, 0, 8, 2, 6, 5, 3];
        let mut relabeled = RawDimer::new("r");
        for a in 0..9 {
            relabeled.add_arrow(format!("a{a}"));
        }
        for f in &r.faces {
            relabeled.add_face(f.sign, f.arrows.iter().map(|&a| perm[a]).collect());
        }
        let e = validate(&relabeled).unwrap();
        let map = d.is_isomorphic(&e).unwrap();
        for f in d.faces() {
            let image: Vec<_> = f.arrows.iter().map(|&a| map[a]).collect();
            assert!(e.faces().iter().any(|g| g.sign == f.sign && is_rotation(&g.arrows, &image)));
        }
        let c = validate(&c3()).unwrap();
        assert!(c.is_isomorphic(&d).is_none());
    }

    fn is_rotation(a: &[usize], b: &[usize]) -> bool {
        a.len() == b.len() && (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
    }
}
