//! JSON reports. Keys are sorted and rationals are written as `"p/q"`
//! strings, so the output is byte-identical across runs and executors.

use serde_json::{json, Map, Value};

use crate::dimer::DimerModel;
use crate::fano::{FanoData, FanoReport};
use crate::lp::{fmt_q, Q};
use crate::matching::{self, MatchingError, MatchingLattice};
use crate::par::Exec;
use crate::synth::Census;
use crate::toric::{self, ReflexivePolygon};
use crate::zigzag::{self, Consistency, ProbeError, RayMeeting};
use crate::{format, lattice};

pub fn rational(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn rationals(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn info(d: &DimerModel) -> Value {
    let cycles = zigzag::zigzag_cycles(d);
    let zigzags: Vec<Value> = cycles
        .iter()
        .map(|z| {
            json!({
                "arrows": z.arrows.iter().map(|&a| d.arrow_name(a)).collect::<Vec<_>>(),
                "homology": z.homology,
            })
        })
        .collect();
    json!({
        "name": d.name(),
        "vertices": d.num_vertices(),
        "arrows": d.num_arrows(),
        "faces": d.num_faces(),
        "euler_characteristic": d.euler_characteristic(),
        "genus": d.genus(),
        "zigzag_count": cycles.len(),
        "zigzags": zigzags,
    })
}

fn meeting(d: &DimerModel, m: &RayMeeting) -> Value {
    json!({
        "arrow": d.arrow_name(m.arrow),
        "zig_index": m.zig_index,
        "zag_index": m.zag_index,
        "lift": {"arrow": d.arrow_name(m.lift.0), "translate": m.lift.1},
    })
}

/// The LP verdict together with the zigzag probe. The second value is the
/// LP verdict (`None` when undecided).
pub fn consistency(d: &DimerModel, depth: Option<usize>, exec: Exec) -> (Value, Option<bool>) {
    let verdict = zigzag::is_consistent(d);
    let mut out = Map::new();
    out.insert("name".into(), json!(d.name()));
    let decided = match &verdict {
        Consistency::Consistent { r_charge, margin } => {
            let r: Map<String, Value> = (0..d.num_arrows())
                .map(|a| (d.arrow_name(a).to_string(), rational(&r_charge[a])))
                .collect();
            out.insert("verdict".into(), json!("consistent"));
            out.insert("r_charge".into(), Value::Object(r));
            out.insert("margin".into(), rational(margin));
            Some(true)
        }
        Consistency::Inconsistent { certificate, bound } => {
            out.insert("verdict".into(), json!("inconsistent"));
            out.insert("certificate".into(), rationals(certificate));
            out.insert("bound".into(), bound.as_ref().map_or(Value::Null, rational));
            Some(false)
        }
        Consistency::Undecided { genus } => {
            out.insert("verdict".into(), json!("undecided"));
            out.insert("genus".into(), json!(genus));
            None
        }
    };
    match zigzag::zigzag_probe(d, depth, exec) {
        Ok(meetings) => {
            let list: Vec<Value> = meetings.iter().map(|m| meeting(d, m)).collect();
            out.insert(
                "probe".into(),
                json!({
                    "depth": depth.map_or(json!("default"), |n| json!(n)),
                    "meetings": list,
                }),
            );
            if let Some(c) = decided {
                out.insert("agree".into(), json!(c == meetings.is_empty()));
            }
        }
        Err(ProbeError::UnsupportedGenus { genus }) => {
            out.insert("probe".into(), json!({"unsupported_genus": genus}));
        }
    }
    (Value::Object(out), decided)
}

fn polygon_value(lat: &MatchingLattice) -> Value {
    json!({
        "hull": lat.hull,
        "boundary": lat.boundary,
        "interior": lat.interior,
        "twice_area": lat.twice_area(),
        "reflected": lat.reflected,
    })
}

pub fn matchings(d: &DimerModel, root: usize, stable_only: bool, exec: Exec) -> Result<Value, MatchingError> {
    let lat = matching::matching_lattice(d, root, exec)?;
    let stable: Vec<bool> = (0..lat.matchings.len())
        .map(|i| lat.points.get(&lat.coords[i]).is_some_and(|p| p.stable.contains(&i)))
        .collect();
    let list: Vec<Value> = lat
        .matchings
        .iter()
        .enumerate()
        .filter(|&(i, _)| !stable_only || stable[i])
        .map(|(i, p)| {
            json!({
                "index": i,
                "arrows": p.arrows().iter().map(|&a| d.arrow_name(a)).collect::<Vec<_>>(),
                "coordinates": lat.coords[i],
                "stable": stable[i],
            })
        })
        .collect();
    Ok(json!({
        "name": d.name(),
        "root": d.vertex_label(root),
        "count": lat.matchings.len(),
        "matchings": list,
        "polygon": polygon_value(&lat),
    }))
}

pub fn polygon(d: &DimerModel, exec: Exec) -> Result<Value, MatchingError> {
    let lat = matching::matching_lattice(d, 0, exec)?;
    let mut v = polygon_value(&lat);
    let obj = v.as_object_mut().unwrap();
    obj.insert("name".into(), json!(d.name()));
    match ReflexivePolygon::new(lat.boundary.clone()) {
        Ok(p) => {
            obj.insert("label".into(), json!(p.label()));
            obj.insert("a_sequence".into(), json!(p.a_sequence()));
        }
        Err(_) => {
            obj.insert("label".into(), Value::Null);
        }
    }
    Ok(v)
}

pub fn sequences(data: &FanoData) -> Value {
    serde_json::to_value(data).expect("plain data serializes")
}

pub fn duality(report: &FanoReport) -> Value {
    let mut v = serde_json::to_value(report).expect("plain data serializes");
    v.as_object_mut()
        .unwrap()
        .insert("holds".into(), json!(report.holds()));
    v
}

pub fn census(label: &str, c: &Census) -> Value {
    let dimers: Vec<Value> = c
        .entries
        .iter()
        .map(|e| {
            json!({
                "vertices": e.dimer.num_vertices(),
                "arrows": e.dimer.num_arrows(),
                "faces": e.dimer.num_faces(),
                "multiplicity": e.multiplicity,
                "height": e.height,
                "sequence": e.sequence,
                "dimer": format::serialize(&e.dimer),
            })
        })
        .collect();
    json!({
        "polygon": label,
        "bound": c.bound,
        "sequences": c.sequences,
        "failures": c.failures,
        "touched_bound": c.touched_bound,
        "count": c.entries.len(),
        "dimers": dimers,
    })
}

/// The 16 reference polygons with their `a` sequences.
pub fn reflexive_table() -> Value {
    let list: Vec<Value> = toric::REFERENCE
        .iter()
        .map(|(label, verts)| {
            let p = ReflexivePolygon::from_vertices(verts).expect("reference polygons are reflexive");
            json!({
                "label": label,
                "vertices": verts,
                "points": p.points(),
                "a_sequence": p.a_sequence(),
                "twice_area": lattice::twice_area(&p.vertices()),
            })
        })
        .collect();
    Value::Array(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn reports_do_not_depend_on_the_executor() {
        let d = catalog::dimer("dp1").unwrap();
        let a = consistency(&d, None, Exec::Sequential).0;
        let b = consistency(&d, None, Exec::Parallel).0;
        assert_eq!(a.to_string(), b.to_string());
        let a = matchings(&d, 0, false, Exec::Sequential).unwrap();
        let b = matchings(&d, 0, false, Exec::Parallel).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn rationals_are_strings() {
        let d = catalog::dimer("p2").unwrap();
        let (v, ok) = consistency(&d, None, Exec::Sequential);
        assert_eq!(ok, Some(true));
        assert_eq!(v["r_charge"]["x1"], json!("2/3"));
        assert_eq!(v["agree"], json!(true));
    }
}
