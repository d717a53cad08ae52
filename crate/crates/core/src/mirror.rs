//! The mirror (dual) dimer: same arrows and positive faces, negative faces
//! reversed.

use thiserror::Error;

use crate::dimer::{validate, DimerModel, RawDimer, Sign, ValidationError};
use crate::zigzag::{self, ZigzagCycle};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MirrorError {
    #[error("mirror is not a valid dimer: {0}")]
    Invalid(#[from] ValidationError),
}

/// Outcome of the structural checks relating dual vertices to zigzag cycles.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MirrorChecks {
    /// Number of dual vertices equals the number of zigzag cycles.
    pub vertex_count: bool,
    /// Every dual head vertex corresponds to the zig cycle of the arrow and
    /// every dual tail vertex to its zag cycle, consistently.
    pub head_tail: bool,
    /// The arrows around each dual vertex are the arrows of its cycle.
    pub arrows_around: bool,
}

impl MirrorChecks {
    pub fn all(&self) -> bool {
        self.vertex_count && self.head_tail && self.arrows_around
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix("-dual") {
        Some(base) => base.to_string(),
        None => format!("{name}-dual"),
    }
}

fn dual_faces(d: &DimerModel) -> RawDimer {
    let mut raw = RawDimer::new(dual_name(d.name()));
    for a in 0..d.num_arrows() {
        raw.add_arrow(d.arrow_name(a));
    }
    for f in d.faces() {
        let mut arrows = f.arrows.clone();
        if f.sign == Sign::Negative {
            arrows.reverse();
        }
        raw.add_face(f.sign, arrows);
    }
    raw
}

/// For each dual vertex, the zigzag cycle whose zig arrows end there and
/// whose zag arrows start there, when this assignment is consistent.
fn vertex_cycles(d: &DimerModel, dual: &DimerModel, cycles: &[ZigzagCycle]) -> Option<Vec<usize>> {
    let (zig, zag) = zigzag::cycle_index(d, cycles);
    let mut assign: Vec<Option<usize>> = vec![None; dual.num_vertices()];
    for a in 0..d.num_arrows() {
        for (v, c) in [(dual.head(a), zig[a]), (dual.tail(a), zag[a])] {
            match assign[v] {
                Some(x) if x != c => return None,
                _ => assign[v] = Some(c),
            }
        }
    }
    let assign: Vec<usize> = assign.into_iter().collect::<Option<_>>()?;
    let mut sorted = assign.clone();
    sorted.sort();
    sorted.dedup();
    (sorted.len() == assign.len()).then_some(assign)
}

/// The mirror dimer together with its structural checks. Dual vertices are
/// labelled `z1, z2, …` after the zigzag cycles of `d` when the head/tail
/// correspondence holds. Offsets are derived when the dual is a torus.
pub fn mirror_with_checks(d: &DimerModel) -> Result<(DimerModel, MirrorChecks), MirrorError> {
    let mut raw = dual_faces(d);
    let dual = validate(&raw)?;
    let cycles = zigzag::zigzag_cycles(d);
    let assign = vertex_cycles(d, &dual, &cycles);
    let arrows_around = assign.as_ref().is_some_and(|assign| {
        (0..dual.num_vertices()).all(|v| {
            let mut around: Vec<usize> = (0..dual.num_arrows())
                .flat_map(|a| {
                    let mut ends = Vec::new();
                    if dual.head(a) == v {
                        ends.push(a);
                    }
                    if dual.tail(a) == v {
                        ends.push(a);
                    }
                    ends
                })
                .collect();
            around.sort();
            let mut expect = cycles[assign[v]].arrows.clone();
            expect.sort();
            around == expect
        })
    });
    let checks = MirrorChecks {
        vertex_count: dual.num_vertices() == cycles.len(),
        head_tail: assign.is_some(),
        arrows_around,
    };
    let dual = match assign {
        Some(assign) => {
            for a in 0..d.num_arrows() {
                raw.endpoints[a] = Some((
                    format!("z{}", assign[dual.tail(a)] + 1),
                    format!("z{}", assign[dual.head(a)] + 1),
                ));
            }
            validate(&raw)?
        }
        None => dual,
    };
    let dual = if dual.is_torus() {
        dual.with_offsets().expect("torus dual admits offsets")
    } else {
        dual
    };
    Ok((dual, checks))
}

pub fn mirror(d: &DimerModel) -> Result<DimerModel, MirrorError> {
    mirror_with_checks(d).map(|(m, _)| m)
}

/// Whether the mirror has genus `(2 − Z + V)/2` where `Z` counts zigzag
/// cycles and `V` vertices of `d`.
pub fn mirror_genus_check(d: &DimerModel) -> Result<bool, MirrorError> {
    let m = mirror(d)?;
    let z = zigzag::zigzag_cycles(d).len() as i64;
    let v = d.num_vertices() as i64;
    Ok(2 * m.genus() == 2 - z + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn p2_mirror_is_a_torus_with_three_vertices() {
        let d = catalog::dimer("p2").unwrap();
        let (m, checks) = mirror_with_checks(&d).unwrap();
        assert!(checks.all());
        assert_eq!((m.num_vertices(), m.num_arrows(), m.num_faces()), (3, 9, 6));
        assert_eq!(m.genus(), 1);
        assert!(mirror_genus_check(&d).unwrap());
    }

    #[test]
    fn c3_mirror_is_a_sphere() {
        let d = catalog::dimer("c3").unwrap();
        let (m, checks) = mirror_with_checks(&d).unwrap();
        assert!(checks.all());
        assert_eq!(m.num_vertices(), 3);
        assert_eq!(m.genus(), 0);
        assert!(mirror_genus_check(&d).unwrap());
    }

    #[test]
    fn double_mirror_is_isomorphic() {
        for name in catalog::dimer_names() {
            let d = catalog::dimer(name).unwrap();
            let mm = mirror(&mirror(&d).unwrap()).unwrap();
            assert!(d.is_isomorphic(&mm).is_some(), "{name}");
            assert_eq!(mm.name(), name);
        }
    }

    #[test]
    fn positive_faces_are_kept() {
        let d = catalog::dimer("dp1").unwrap();
        let m = mirror(&d).unwrap();
        let pos = |x: &DimerModel| {
            x.faces()
                .iter()
                .filter(|f| f.sign == Sign::Positive)
                .cloned()
                .collect::<Vec<_>>()
        };
        assert_eq!(pos(&d), pos(&m));
    }
}
