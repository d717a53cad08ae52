//! Weak Fano dimers: the toric surface of the matching polygon, the grading by
//! boundary stable matchings, the induced cyclic order on vertices, the
//! exceptional sequence it produces, and the mirror swap of the `a` and `b`
//! sequences.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dimer::{DimerModel, TopologyError, VertexId};
use crate::lattice::{self, Point};
use crate::lp::{fmt_q, q, LinearProgram, LpOutcome, Sense, Q};
use crate::matching::{
    self, degree, invert, BoundaryError, MatchingError, MatchingLattice, PerfectMatching, WeakWalk,
};
use crate::mirror::{self, MirrorError};
use crate::par::Exec;
use crate::toric::{self, Divisor, ReflexivePolygon, ToricError, ToricSurface};
use crate::zigzag::{self, ZigzagCycle};

pub use crate::toric::dihedral_equal;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FanoError {
    #[error("dimer is not weak Fano: {0}")]
    NotWeakFano(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error("a-sequence from zigzags {zigzag:?} differs from the polygon's {polygon:?}")]
    Alignment { zigzag: Vec<i64>, polygon: Vec<i64> },
    #[error("no positive weights balance the boundary points")]
    LambdaInfeasible,
    #[error("cycle through arrow {arrow} has R-degree {degree}, not an even integer")]
    OddCycle { arrow: usize, degree: String },
    #[error("vertices {0} and {1} share an R-value after all perturbations")]
    Tie(String, String),
    #[error("perturbed vertex orders disagree")]
    UnstableOrder,
    #[error("steps sum to {0:?}, not (1, …, 1)")]
    Closure(Vec<i64>),
}

/// Positive weights on the boundary stable matchings, in boundary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaWeights(pub Vec<Q>);

impl LambdaWeights {
    pub fn render(&self) -> Vec<String> {
        self.0.iter().map(fmt_q).collect()
    }
}

/// Vertices in increasing R-value starting at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    pub vertices: Vec<VertexId>,
    pub values: Vec<Q>,
    /// Weights actually used; differs from the input after a tie-breaking
    /// perturbation.
    pub lambda: LambdaWeights,
    pub perturbed: bool,
}

/// A weak Fano dimer with its polygon data resolved at a root vertex.
#[derive(Clone, Debug)]
pub struct WeakFano {
    dimer: DimerModel,
    root: VertexId,
    lattice: MatchingLattice,
    cycles: Vec<ZigzagCycle>,
    /// Boundary stable matching indices, in boundary order.
    stable: Vec<usize>,
    /// Zigzag cycle of each boundary segment `i → i+1`.
    segments: Vec<usize>,
    polygon: ReflexivePolygon,
}

/// Consistent with exactly one interior lattice point in its matching polygon.
pub fn is_weak_fano(d: &DimerModel, exec: Exec) -> bool {
    WeakFano::new(d, 0, exec).is_ok()
}

impl WeakFano {
    pub fn new(d: &DimerModel, root: VertexId, exec: Exec) -> Result<Self, FanoError> {
        let dimer = d.with_offsets()?;
        if !zigzag::is_consistent(&dimer).is_consistent() {
            return Err(FanoError::NotWeakFano("inconsistent".into()));
        }
        let lattice = matching::matching_lattice(&dimer, root, exec)?;
        if lattice.interior.len() != 1 {
            return Err(FanoError::NotWeakFano(format!(
                "{} interior lattice points",
                lattice.interior.len()
            )));
        }
        let cycles = zigzag::zigzag_cycles(&dimer);
        if cycles.len() != dimer.num_vertices() {
            log::warn!(
                "{}: {} zigzag cycles but {} vertices",
                dimer.name(),
                cycles.len(),
                dimer.num_vertices()
            );
            return Err(FanoError::NotWeakFano("zigzag count differs from vertex count".into()));
        }
        let stable = lattice
            .boundary_stable()
            .ok_or_else(|| FanoError::NotWeakFano("boundary point without a unique stable matching".into()))?;
        let segments = matching::boundary_zigzags(&lattice, &cycles)?;
        let polygon = ReflexivePolygon::new(lattice.boundary.clone())?;
        Ok(WeakFano {
            dimer,
            root,
            lattice,
            cycles,
            stable,
            segments,
            polygon,
        })
    }

    pub fn dimer(&self) -> &DimerModel {
        &self.dimer
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn lattice(&self) -> &MatchingLattice {
        &self.lattice
    }

    pub fn polygon(&self) -> &ReflexivePolygon {
        &self.polygon
    }

    pub fn surface(&self) -> ToricSurface {
        ToricSurface::new(&self.polygon)
    }

    pub fn k(&self) -> usize {
        self.stable.len()
    }

    /// The boundary stable matching `P_i` attached to ray `v_i`.
    pub fn boundary_matching(&self, i: usize) -> &PerfectMatching {
        &self.lattice.matchings[self.stable[i]]
    }

    /// Degrees of a weak walk under the boundary stable matchings.
    pub fn divisor_of(&self, w: &[(usize, bool)]) -> Divisor {
        (0..self.k()).map(|i| degree(self.boundary_matching(i), w)).collect()
    }

    /// `a_i = (common arrows of the zigzags on the two segments at v_i) − 2`,
    /// checked index-for-index against the polygon's own sequence.
    pub fn a_from_zigzags(&self) -> Result<Vec<i64>, FanoError> {
        let k = self.k();
        let a: Vec<i64> = (0..k)
            .map(|i| {
                let before = &self.cycles[self.segments[(i + k - 1) % k]];
                let after = &self.cycles[self.segments[i]];
                zigzag::common_arrow_count(before, after) as i64 - 2
            })
            .collect();
        let polygon = self.polygon.a_sequence();
        if a != polygon {
            return Err(FanoError::Alignment { zigzag: a, polygon });
        }
        Ok(a)
    }

    /// `det(v_i − v_{i−1}, v_{i+1} − v_i) − 2` for each boundary point.
    pub fn a_from_turns(&self) -> Vec<i64> {
        let v = self.polygon.points();
        let k = v.len();
        (0..k)
            .map(|i| {
                let prev = v[(i + k - 1) % k];
                let next = v[(i + 1) % k];
                lattice::det2(lattice::sub(v[i], prev), lattice::sub(next, v[i])) - 2
            })
            .collect()
    }

    /// Max-min positive weights with `Σ λ_i v_i = 0` and `Σ λ_i = 2`.
    pub fn lambda_weights(&self) -> Result<LambdaWeights, FanoError> {
        let pts = self.polygon.points();
        let k = pts.len();
        let mut lp = LinearProgram::new();
        for _ in 0..k {
            lp.add_var(q(0));
        }
        let t = lp.add_free_var(q(1));
        for i in 0..k {
            lp.add_row(vec![(i, q(1)), (t, q(-1))], Sense::Ge, q(0));
        }
        for c in 0..2 {
            lp.add_row((0..k).map(|i| (i, q(pts[i][c]))).collect(), Sense::Eq, q(0));
        }
        lp.add_row((0..k).map(|i| (i, q(1))).collect(), Sense::Eq, q(2));
        match lp.solve() {
            LpOutcome::Optimal { x, value, .. } if value > q(0) => Ok(LambdaWeights(x[..k].to_vec())),
            _ => Err(FanoError::LambdaInfeasible),
        }
    }

    /// `R_a = Σ λ_i [a ∈ P_i]`.
    pub fn r_grading(&self, lambda: &LambdaWeights) -> Vec<Q> {
        let mut r = vec![Q::zero(); self.dimer.num_arrows()];
        for (i, l) in lambda.0.iter().enumerate() {
            for a in self.boundary_matching(i).arrows() {
                r[a] += l;
            }
        }
        r
    }

    pub fn walk_r(&self, r: &[Q], w: &[(usize, bool)]) -> Q {
        w.iter()
            .map(|&(a, fwd)| if fwd { r[a].clone() } else { -r[a].clone() })
            .sum()
    }

    fn tree_paths(&self) -> Vec<WeakWalk> {
        let parent = self.dimer.spanning_tree(self.root);
        (0..self.dimer.num_vertices())
            .map(|v| self.dimer.tree_path(&parent, v))
            .collect()
    }

    /// R-degree of the tree path from the root to each vertex, after checking
    /// every fundamental cycle has even integer degree.
    fn path_values(&self, lambda: &LambdaWeights) -> Result<Vec<Q>, FanoError> {
        let r = self.r_grading(lambda);
        let paths = self.tree_paths();
        let raw: Vec<Q> = paths.iter().map(|p| self.walk_r(&r, p)).collect();
        let two = q(2);
        for a in 0..self.dimer.num_arrows() {
            let cyc = raw[self.dimer.tail(a)].clone() + r[a].clone() - raw[self.dimer.head(a)].clone();
            if !(cyc.clone() / two.clone()).is_integer() {
                return Err(FanoError::OddCycle {
                    arrow: a,
                    degree: fmt_q(&cyc),
                });
            }
        }
        Ok(raw)
    }

    fn order_with(&self, lambda: &LambdaWeights) -> Result<Result<VertexOrder, (VertexId, VertexId)>, FanoError> {
        let raw = self.path_values(lambda)?;
        let values: Vec<Q> = raw.iter().map(reduce_mod2).collect();
        let mut vertices: Vec<VertexId> = (0..values.len()).collect();
        vertices.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        for w in vertices.windows(2) {
            if values[w[0]] == values[w[1]] {
                return Ok(Err((w[0], w[1])));
            }
        }
        debug_assert_eq!(vertices[0], self.root);
        Ok(Ok(VertexOrder {
            values: vertices.iter().map(|&v| values[v].clone()).collect(),
            vertices,
            lambda: lambda.clone(),
            perturbed: false,
        }))
    }

    /// Sorts vertices by the R-value of paths from the root, reduced into
    /// `[0, 2)`. Ties are broken by deterministic perturbations of `λ`.
    pub fn vertex_order(&self, lambda: &LambdaWeights) -> Result<VertexOrder, FanoError> {
        let (a, b) = match self.order_with(lambda)? {
            Ok(order) => return Ok(order),
            Err(tie) => tie,
        };
        log::info!("{}: R-value tie, perturbing λ", self.dimer.name());
        let k = self.k();
        let eps = Q::one() / q(16 * k as i64);
        let mut last = (a, b);
        for attempt in 0..8u32 {
            let scale = eps.clone() / q(1 << attempt);
            let Some(first) = self.perturb(lambda, &scale, 2) else {
                continue;
            };
            match self.order_with(&first)? {
                Ok(mut order) => {
                    if let Some(second) = self.perturb(lambda, &scale, 3) {
                        if let Ok(check) = self.order_with(&second)? {
                            if check.vertices != order.vertices {
                                return Err(FanoError::UnstableOrder);
                            }
                        }
                    }
                    order.perturbed = true;
                    return Ok(order);
                }
                Err(tie) => last = tie,
            }
        }
        Err(FanoError::Tie(
            self.dimer.vertex_label(last.0).to_string(),
            self.dimer.vertex_label(last.1).to_string(),
        ))
    }

    /// `λ + δ` with `δ_j = scale · base^{−j}` projected onto the balancing
    /// constraints, if it stays positive.
    fn perturb(&self, lambda: &LambdaWeights, scale: &Q, base: i64) -> Option<LambdaWeights> {
        let pts = self.polygon.points();
        let k = pts.len();
        let mut delta = Vec::with_capacity(k);
        let mut step = scale.clone();
        for _ in 0..k {
            step /= q(base);
            delta.push(step.clone());
        }
        let rows: Vec<Vec<Q>> = vec![
            pts.iter().map(|p| q(p[0])).collect(),
            pts.iter().map(|p| q(p[1])).collect(),
            vec![q(1); k],
        ];
        let dot = |x: &[Q], y: &[Q]| -> Q { x.iter().zip(y).map(|(a, b)| a * b).sum() };
        let gram: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| rows.iter().map(|s| dot(r, s)).collect())
            .collect();
        let rhs: Vec<Q> = rows.iter().map(|r| dot(r, &delta)).collect();
        let y = solve_linear(gram, rhs)?;
        let out: Vec<Q> = (0..k)
            .map(|j| {
                let back: Q = (0..3).map(|i| &y[i] * &rows[i][j]).sum();
                &lambda.0[j] + &delta[j] - back
            })
            .collect();
        out.iter().all(|x| *x > Q::zero()).then_some(LambdaWeights(out))
    }

    /// Divisor steps `L_{i+1} − L_i` along walks from `w_i` to `w_{i+1}` with
    /// R-degree in `[0, 2)`, the last step returning to the root.
    pub fn steps(&self, order: &VertexOrder) -> Vec<Divisor> {
        let r = self.r_grading(&order.lambda);
        let paths = self.tree_paths();
        let k = order.vertices.len();
        let two = q(2);
        (0..k)
            .map(|i| {
                let (from, to) = (order.vertices[i], order.vertices[(i + 1) % k]);
                let mut walk = invert(&paths[from]);
                walk.extend(paths[to].iter().copied());
                let deg = self.walk_r(&r, &walk);
                let shift = -(deg / two.clone()).floor().to_integer();
                let shift: i64 = shift.try_into().expect("small shift");
                self.divisor_of(&walk).into_iter().map(|x| x + shift).collect()
            })
            .collect()
    }

    /// `L_1 = 0` and `L_{i+1} = L_i + step_i`, after checking that the steps
    /// sum to `−K`.
    pub fn exceptional_sequence(&self, order: &VertexOrder) -> Result<Vec<Divisor>, FanoError> {
        let steps = self.steps(order);
        let k = self.k();
        let total: Vec<i64> = (0..k).map(|r| steps.iter().map(|s| s[r]).sum()).collect();
        if total.iter().any(|&x| x != 1) {
            return Err(FanoError::Closure(total));
        }
        let mut out = vec![vec![0; k]];
        for s in &steps[..steps.len() - 1] {
            let next = out.last().unwrap().iter().zip(s).map(|(x, y)| x + y).collect();
            out.push(next);
        }
        Ok(out)
    }

    /// `b_i = #(arrows w_i → w_{i+1}) − 2`.
    pub fn b_sequence(&self, order: &VertexOrder) -> Vec<i64> {
        let k = order.vertices.len();
        (0..k)
            .map(|i| {
                self.dimer
                    .arrows_between(order.vertices[i], order.vertices[(i + 1) % k]) as i64
                    - 2
            })
            .collect()
    }

    /// `Σ_{a ∈ Z} (1 − R_a)` for each zigzag cycle.
    pub fn zigzag_r_sums(&self, lambda: &LambdaWeights) -> Vec<Q> {
        let r = self.r_grading(lambda);
        self.cycles
            .iter()
            .map(|z| z.arrows.iter().map(|&a| Q::one() - &r[a]).sum())
            .collect()
    }
}

fn reduce_mod2(x: &Q) -> Q {
    let two = q(2);
    x - (x / &two).floor() * two
}

fn solve_linear(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for j in c..n {
                    let sub = &f * &m[c][j];
                    m[r][j] -= sub;
                }
                let sub = &f * &b[c];
                b[r] -= sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// Everything computed for one weak Fano dimer.
#[derive(Clone, Debug, Serialize)]
pub struct FanoData {
    pub name: String,
    pub polygon: Vec<Point>,
    pub label: &'static str,
    pub a_sequence: Vec<i64>,
    pub b_sequence: Vec<i64>,
    pub lambda: Vec<String>,
    pub vertex_order: Vec<String>,
    pub vertex_values: Vec<String>,
    pub classes: Vec<Divisor>,
    pub exceptional: bool,
}

pub fn fano_data(d: &DimerModel, o: VertexId, exec: Exec) -> Result<FanoData, FanoError> {
    let wf = WeakFano::new(d, o, exec)?;
    let a = wf.a_from_zigzags()?;
    let lambda = wf.lambda_weights()?;
    let order = wf.vertex_order(&lambda)?;
    let classes = wf.exceptional_sequence(&order)?;
    let exceptional = toric::is_cyclic_strong_exceptional(&wf.surface(), &classes).is_empty();
    Ok(FanoData {
        name: wf.dimer.name().to_string(),
        polygon: wf.polygon.points().to_vec(),
        label: wf.polygon.label(),
        a_sequence: a,
        b_sequence: wf.b_sequence(&order),
        lambda: order.lambda.render(),
        vertex_order: order
            .vertices
            .iter()
            .map(|&v| wf.dimer.vertex_label(v).to_string())
            .collect(),
        vertex_values: order.values.iter().map(fmt_q).collect(),
        classes,
        exceptional,
    })
}

/// Outcome of checking that the mirror swaps the `a` and `b` sequences.
#[derive(Clone, Debug, Serialize)]
pub struct FanoReport {
    pub dimer: FanoData,
    pub mirror: Option<FanoData>,
    pub mirror_weak_fano: bool,
    /// `a` of the mirror is dihedrally equal to `b` of the dimer.
    pub a_swap: bool,
    /// `b` of the mirror is dihedrally equal to `a` of the dimer.
    pub b_swap: bool,
    /// The polygon built from `b` is unimodular-equivalent to the mirror's.
    pub polygon_match: bool,
    pub failures: Vec<String>,
}

impl FanoReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_duality(d: &DimerModel, o: VertexId, exec: Exec) -> Result<FanoReport, FanoError> {
    let data = fano_data(d, o, exec)?;
    let dual = mirror::mirror(d)?;
    let mut failures = Vec::new();
    if !data.exceptional {
        failures.push(format!("constructed sequence {:?} is not exceptional", data.classes));
    }
    let mirror_data = match fano_data(&dual, 0, exec) {
        Ok(m) => Some(m),
        Err(e) => {
            failures.push(format!("mirror is not weak Fano: {e}"));
            None
        }
    };
    let (mut a_swap, mut b_swap, mut polygon_match) = (false, false, false);
    if let Some(m) = &mirror_data {
        a_swap = dihedral_equal(&m.a_sequence, &data.b_sequence);
        if !a_swap {
            failures.push(format!(
                "mirror a {:?} is not dihedrally equal to b {:?}",
                m.a_sequence, data.b_sequence
            ));
        }
        b_swap = dihedral_equal(&m.b_sequence, &data.a_sequence);
        if !b_swap {
            failures.push(format!(
                "mirror b {:?} is not dihedrally equal to a {:?}",
                m.b_sequence, data.a_sequence
            ));
        }
        match toric::polygon_from_sequence(&data.b_sequence) {
            Ok(p) => {
                polygon_match = toric::unimodular_equivalent(p.points(), &m.polygon);
                if !polygon_match {
                    failures.push("polygon of b is not equivalent to the mirror polygon".into());
                }
            }
            Err(e) => failures.push(format!("b {:?} is not a polygon sequence: {e}", data.b_sequence)),
        }
    }
    Ok(FanoReport {
        mirror_weak_fano: mirror_data.is_some(),
        dimer: data,
        mirror: mirror_data,
        a_swap,
        b_swap,
        polygon_match,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lp::q_frac;

    fn wf(name: &str) -> WeakFano {
        WeakFano::new(&catalog::dimer(name).unwrap(), 0, Exec::Sequential).unwrap()
    }

    #[test]
    fn weak_fano_predicate() {
        let s = Exec::Sequential;
        assert!(is_weak_fano(&catalog::dimer("p2").unwrap(), s));
        assert!(!is_weak_fano(&catalog::dimer("c3").unwrap(), s));
        assert!(!is_weak_fano(&catalog::dimer("example-inconsistent").unwrap(), s));
    }

    #[test]
    fn p2_pipeline() {
        let w = wf("p2");
        assert_eq!(w.a_from_zigzags().unwrap(), vec![1, 1, 1]);
        let lambda = w.lambda_weights().unwrap();
        assert_eq!(lambda.0, vec![q_frac(2, 3); 3]);
        let order = w.vertex_order(&lambda).unwrap();
        assert_eq!(order.values, vec![q(0), q_frac(2, 3), q_frac(4, 3)]);
        assert_eq!(w.b_sequence(&order), vec![1, 1, 1]);
        let seq = w.exceptional_sequence(&order).unwrap();
        let s = w.surface();
        for (i, d) in seq.iter().enumerate() {
            let expect = [i as i64, 0, 0];
            assert!(s.equivalence(d, &expect).is_some(), "{d:?} vs O({i})");
        }
    }

    #[test]
    fn dp3_sequence_and_swap() {
        let w = wf("dp3");
        assert_eq!(w.a_from_zigzags().unwrap(), vec![-1; 6]);
        assert_eq!(w.a_from_turns(), vec![-1; 6]);
        let lambda = w.lambda_weights().unwrap();
        let order = w.vertex_order(&lambda).unwrap();
        let b = w.b_sequence(&order);
        assert_eq!(b.iter().sum::<i64>(), -6);
        let seq = w.exceptional_sequence(&order).unwrap();
        let s = w.surface();
        assert!(toric::is_cyclic_strong_exceptional(&s, &seq).is_empty());
        for i in 0..6 {
            let next = toric::periodic(&seq, i as i64 + 1);
            let diff: Divisor = next.iter().zip(&seq[i]).map(|(x, y)| x - y).collect();
            assert_eq!(s.h0(&diff), b[i] + 2);
        }
        for sum in w.zigzag_r_sums(&lambda) {
            assert_eq!(sum, q(2));
        }
        let report = verify_duality(w.dimer(), 0, Exec::Sequential).unwrap();
        assert!(report.holds(), "{:?}", report.failures);
    }
}
