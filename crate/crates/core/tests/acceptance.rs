//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dimers::dimer::DimerModel;
use dimers::fano::{self, WeakFano};
use dimers::lattice::twice_area;
use dimers::lp::Q;
use dimers::matching::{self, matching_lattice};
use dimers::par::Exec;
use dimers::synth::{self, CensusOptions};
use dimers::toric::{self, ReflexivePolygon, ToricSurface};
use dimers::zigzag::{self, Consistency};
use dimers::{catalog, mirror};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_dimers() -> Vec<DimerModel> {
    catalog::dimer_names()
        .map(|n| catalog::dimer(n).expect("catalog parses"))
        .collect()
}

fn consistent_dimers() -> Vec<DimerModel> {
    all_dimers()
        .into_iter()
        .filter(|d| d.is_torus() && zigzag::is_consistent(d).is_consistent())
        .collect()
}

fn weak_fano_dimers() -> Vec<DimerModel> {
    consistent_dimers()
        .into_iter()
        .filter(|d| fano::is_weak_fano(d, Exec::default()))
        .collect()
}

fn reflexive_enumeration() -> Check {
    let classes = toric::enumerate_reflexive();
    ensure(classes.len() == 16, || format!("{} classes", classes.len()))?;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, p) in &classes {
        *sizes.entry(p.points().len()).or_default() += 1;
    }
    let expected = BTreeMap::from([(3, 1), (4, 3), (5, 2), (6, 4), (7, 2), (8, 3), (9, 1)]);
    ensure(sizes == expected, || format!("sizes {sizes:?}"))?;
    Ok(format!("16 classes, sizes {sizes:?}"))
}

fn twelve() -> Check {
    for (label, verts) in toric::REFERENCE.iter() {
        let p = ReflexivePolygon::from_vertices(verts).map_err(|e| e.to_string())?;
        let a = p.a_sequence();
        let k = a.len() as i64;
        ensure(a.iter().sum::<i64>() == 12 - 3 * k, || format!("{label}: a = {a:?}"))?;
    }
    Ok("sum a_i = 12 - 3k on all 16".into())
}

fn vertex_and_zigzag_counts() -> Check {
    let ds = consistent_dimers();
    for d in &ds {
        let lat = matching_lattice(d, 0, Exec::default()).map_err(|e| e.to_string())?;
        let triangles = twice_area(&lat.hull);
        ensure(d.num_vertices() as i64 == triangles, || {
            format!("{}: {} vertices, {triangles} elementary triangles", d.name(), d.num_vertices())
        })?;
        let segments = lat.boundary.len();
        let cycles = zigzag::zigzag_cycles(d).len();
        ensure(cycles == segments, || {
            format!("{}: {cycles} zigzags, {segments} boundary segments", d.name())
        })?;
    }
    Ok(format!("{} consistent dimers", ds.len()))
}

fn oracles_agree() -> Check {
    let mut n = 0;
    for d in all_dimers().iter().filter(|d| d.is_torus()) {
        n += 1;
        let lp = zigzag::is_consistent(d);
        let meetings = zigzag::zigzag_probe(d, None, Exec::default()).map_err(|e| e.to_string())?;
        ensure(lp.is_consistent() == meetings.is_empty(), || {
            format!("{}: LP {} vs probe {} meetings", d.name(), lp.is_consistent(), meetings.len())
        })?;
        if let Consistency::Inconsistent { certificate, bound } = &lp {
            let program = zigzag::r_charge_program(d);
            let valid = match bound {
                Some(b) => !b.is_positive() && program.dual_value(certificate).as_ref() == Some(b),
                None => program.is_farkas_certificate(certificate),
            };
            ensure(valid, || format!("{}: bad certificate", d.name()))?;
        }
    }
    let d = catalog::dimer("example-inconsistent").unwrap();
    ensure(matches!(zigzag::is_consistent(&d), Consistency::Inconsistent { .. }), || {
        "example not inconsistent".into()
    })?;
    let meetings = zigzag::zigzag_probe(&d, None, Exec::default()).unwrap();
    ensure(meetings.iter().any(|m| m.zig_index == 3 && m.zag_index == 3), || {
        format!("witness indices {:?}", meetings.iter().map(|m| (m.zig_index, m.zag_index)).collect::<Vec<_>>())
    })?;
    Ok(format!("{n} torus dimers agree; inconsistent example meets at index 3"))
}

fn stable_matchings() -> Check {
    let ds = consistent_dimers();
    for d in &ds {
        let lat = matching_lattice(d, 0, Exec::default()).map_err(|e| e.to_string())?;
        let c = matching::stable_complex(d, &lat);
        ensure(c.is_valid(), || format!("{}: {:?}", d.name(), c.diagnostics))?;
        ensure(c.vertices.len() == lat.points.len(), || format!("{}: missing points", d.name()))?;
        ensure(c.triangles.len() == d.num_vertices(), || format!("{}: triangle count", d.name()))?;
    }
    Ok(format!("{} consistent dimers", ds.len()))
}

fn dp3_sequence() -> Check {
    let p = ReflexivePolygon::new(vec![[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]])
        .map_err(|e| e.to_string())?;
    let s = ToricSurface::new(&p);
    let e = |i: usize| {
        let mut v = vec![0; 6];
        v[i - 1] = 1;
        v
    };
    let sum = |xs: &[Vec<i64>]| -> Vec<i64> { (0..6).map(|r| xs.iter().map(|x| x[r]).sum()).collect() };
    let neg = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|x| -x).collect() };
    let set = vec![
        vec![0; 6],
        e(6),
        e(4),
        sum(&[e(4), e(5), e(6)]),
        sum(&[neg(e(3)), e(6)]),
        sum(&[neg(e(3)), e(5), e(6)]),
    ];
    let literal = toric::is_cyclic_strong_exceptional(&s, &set);
    let order = toric::exceptional_order(&s, &set).ok_or("no ordering of the set is exceptional")?;
    let ordered: Vec<Vec<i64>> = order.iter().map(|&i| set[i].clone()).collect();
    let failures = toric::is_cyclic_strong_exceptional(&s, &ordered);
    ensure(failures.is_empty(), || format!("{failures:?}"))?;
    Ok(format!(
        "exceptional in order {order:?}; listed order has {} failing pair(s)",
        literal.len()
    ))
}

fn mirror_swaps_sequences() -> Check {
    let ds = weak_fano_dimers();
    for d in &ds {
        let r = fano::verify_duality(d, 0, Exec::default()).map_err(|e| format!("{}: {e}", d.name()))?;
        ensure(r.holds(), || format!("{}: {:?}", d.name(), r.failures))?;
        let m = r.mirror.as_ref().ok_or("missing mirror data")?;
        ensure(r.mirror_weak_fano, || format!("{}: mirror not weak Fano", d.name()))?;
        ensure(toric::dihedral_equal(&m.a_sequence, &r.dimer.b_sequence), || format!("{}: a/b", d.name()))?;
        ensure(toric::dihedral_equal(&m.b_sequence, &r.dimer.a_sequence), || format!("{}: b/a", d.name()))?;
        let from_b = toric::polygon_from_sequence(&r.dimer.b_sequence).map_err(|e| e.to_string())?;
        ensure(toric::unimodular_equivalent(from_b.points(), &m.polygon), || {
            format!("{}: polygon of b", d.name())
        })?;
    }
    Ok(format!("{} weak Fano dimers", ds.len()))
}

fn round_trip() -> Check {
    let ds = weak_fano_dimers();
    for d in &ds {
        let ok = synth::round_trip(d, 0, Exec::default()).map_err(|e| format!("{}: {e}", d.name()))?;
        ensure(ok, || format!("{}: not isomorphic", d.name()))?;
    }
    Ok(format!("{} weak Fano dimers", ds.len()))
}

fn census() -> Check {
    let mut all: Vec<(String, DimerModel)> = Vec::new();
    let mut counts = Vec::new();
    for (label, expected) in [("8a", 4), ("8b", 2), ("8c", 1)] {
        let s = ToricSurface::new(&toric::polygon_by_label(label).unwrap());
        let c = synth::census(&s, CensusOptions { bound: 3, exec: Exec::default() });
        ensure(!c.touched_bound, || format!("{label}: touched the bound"))?;
        ensure(c.entries.len() == expected, || format!("{label}: {} dimers", c.entries.len()))?;
        counts.push(format!("{label}:{}", c.entries.len()));
        all.extend(c.entries.into_iter().map(|e| (label.to_string(), e.dimer)));
    }
    let mut self_dual = 0;
    let mut pairs: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (i, (label, d)) in all.iter().enumerate() {
        let dual = mirror::mirror(d).map_err(|e| e.to_string())?;
        let hits: Vec<usize> = (0..all.len()).filter(|&j| dual.is_isomorphic(&all[j].1).is_some()).collect();
        ensure(hits.len() == 1, || format!("{label}: mirror matches {hits:?}"))?;
        let j = hits[0];
        if j == i {
            self_dual += 1;
        }
        if j >= i {
            *pairs.entry((label.clone(), all[j].0.clone())).or_default() += 1;
        }
    }
    ensure(self_dual == 3, || format!("{self_dual} self-dual"))?;
    let expected = BTreeMap::from([
        (("8a".to_string(), "8a".to_string()), 2),
        (("8a".to_string(), "8b".to_string()), 1),
        (("8a".to_string(), "8c".to_string()), 1),
        (("8b".to_string(), "8b".to_string()), 1),
    ]);
    ensure(pairs == expected, || format!("pairing {pairs:?}"))?;
    Ok(format!("{} at bound 3, 3 self-dual, pairing {pairs:?}", counts.join(" ")))
}

fn property_suites() -> Check {
    let exec = Exec::default();
    for d in consistent_dimers() {
        let lat = matching_lattice(&d, 0, exec).map_err(|e| e.to_string())?;
        let checks = matching::walk_checks(&d, &lat, 200, 2024, exec);
        ensure(checks.holds(), || format!("{}: {checks:?}", d.name()))?;
    }
    let mut surfaces: Vec<(String, ToricSurface)> = Vec::new();
    for d in weak_fano_dimers() {
        let wf = WeakFano::new(&d, 0, exec).map_err(|e| e.to_string())?;
        let lambda = wf.lambda_weights().map_err(|e| e.to_string())?;
        let r = wf.r_grading(&lambda);
        for z in zigzag::zigzag_cycles(&d) {
            let s: Q = z.arrows.iter().map(|&a| Q::one() - &r[a]).sum();
            ensure(s == Q::from_integer(2.into()), || format!("{}: zigzag sum {s}", d.name()))?;
        }
        if !surfaces.iter().any(|(l, _)| l == wf.polygon().label()) {
            surfaces.push((wf.polygon().label().to_string(), wf.surface()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (label, s) in &surfaces {
        let k = s.canonical();
        for _ in 0..500 {
            let d: Vec<i64> = (0..s.k()).map(|_| rng.gen_range(-3..=3)).collect();
            let kd: Vec<i64> = k.iter().zip(&d).map(|(a, b)| a - b).collect();
            ensure(s.h1_direct(&d) == s.h1(&d), || format!("{label}: h1 at {d:?}"))?;
            ensure(s.h2(&d) == s.h0(&kd) && s.h0(&d) == s.h2(&kd), || format!("{label}: Serre at {d:?}"))?;
        }
    }
    let mut n = 0;
    for d in all_dimers() {
        let back = mirror::mirror(&mirror::mirror(&d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back.is_isomorphic(&d).is_some(), || format!("{}: double mirror", d.name()))?;
        n += 1;
    }
    Ok(format!(
        "walk checks, zigzag sums, {} surfaces x 500 classes, {n} double mirrors",
        surfaces.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("reflexive enumeration", Duration::from_secs(5), reflexive_enumeration),
        ("twelve property", Duration::from_secs(1), twelve),
        ("vertex and zigzag counts", Duration::from_secs(5), vertex_and_zigzag_counts),
        ("consistency oracles agree", Duration::from_secs(5), oracles_agree),
        ("unique stable matchings", Duration::from_secs(10), stable_matchings),
        ("dP3 exceptional set", Duration::from_secs(5), dp3_sequence),
        ("mirror swaps a and b", Duration::from_secs(30), mirror_swaps_sequences),
        ("synthesis round trip", Duration::from_secs(60), round_trip),
        ("size-8 census", Duration::from_secs(600), census),
        ("property suites", Duration::from_secs(120), property_suites),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({:.2?}): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
