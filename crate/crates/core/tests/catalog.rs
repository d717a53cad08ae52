use dimers::dimer::DimerModel;
use dimers::fano;
use dimers::matching::{self, enumerate_matchings};
use dimers::par::Exec;
use dimers::synth::{self, CensusOptions};
use dimers::toric::{self, ToricSurface};
use dimers::{catalog, format, report, zigzag};

fn load(name: &str) -> DimerModel {
    catalog::dimer(name).unwrap()
}

#[test]
fn every_catalog_file_round_trips_through_text() {
    for name in catalog::dimer_names() {
        let d = load(name);
        let text = format::serialize(&d);
        let back = format::parse(&text).unwrap();
        assert_eq!(format::serialize(&back), text, "{name}");
        assert!(back.is_isomorphic(&d).is_some(), "{name}");
    }
}

#[test]
fn known_a_and_b_sequences() {
    let cases: [(&str, &str, &[i64]); 5] = [
        ("p2", "3a", &[1, 1, 1]),
        ("p1xp1", "4a", &[0, 0, 0, 0]),
        ("dp1", "4b", &[1, 0, -1, 0]),
        ("dp2", "5a", &[-1, -1, -1, 0, 0]),
        ("dp3", "6a", &[-1, -1, -1, -1, -1, -1]),
    ];
    for (name, label, a) in cases {
        let data = fano::fano_data(&load(name), 0, Exec::default()).unwrap();
        assert_eq!(data.label, label, "{name}");
        assert!(toric::dihedral_equal(&data.a_sequence, a), "{name}: {:?}", data.a_sequence);
        assert!(data.exceptional, "{name}");
        let k = data.b_sequence.len() as i64;
        assert_eq!(data.b_sequence.iter().sum::<i64>(), 12 - 3 * k, "{name}");
    }
}

#[test]
fn census_outputs_carry_their_polygon() {
    for (name, label) in [
        ("census-8a-1", "8a"),
        ("census-8a-4", "8a"),
        ("census-8b-1", "8b"),
        ("census-8c-1", "8c"),
    ] {
        let v = report::polygon(&load(name), Exec::default()).unwrap();
        assert_eq!(v["label"], label, "{name}");
    }
}

#[test]
fn executors_agree() {
    for name in ["dp2", "census-8b-1"] {
        let d = load(name);
        assert_eq!(
            enumerate_matchings(&d, Exec::Sequential),
            enumerate_matchings(&d, Exec::Parallel)
        );
        assert_eq!(
            zigzag::zigzag_probe(&d, None, Exec::Sequential).unwrap(),
            zigzag::zigzag_probe(&d, None, Exec::Parallel).unwrap()
        );
        let lat = matching::matching_lattice(&d, 0, Exec::Parallel).unwrap();
        assert_eq!(
            matching::walk_checks(&d, &lat, 40, 1, Exec::Sequential),
            matching::walk_checks(&d, &lat, 40, 1, Exec::Parallel)
        );
    }
    let s = ToricSurface::new(&toric::polygon_by_label("5a").unwrap());
    let a = synth::census(&s, CensusOptions { bound: 2, exec: Exec::Sequential });
    let b = synth::census(&s, CensusOptions { bound: 2, exec: Exec::Parallel });
    assert_eq!(report::census("5a", &a), report::census("5a", &b));
}

#[test]
fn small_census_counts() {
    for (label, count) in [("3a", 1), ("4a", 2), ("4b", 1), ("4c", 1)] {
        let s = ToricSurface::new(&toric::polygon_by_label(label).unwrap());
        let c = synth::census(&s, CensusOptions::default());
        assert_eq!(c.entries.len(), count, "{label}");
        assert!(!c.touched_bound, "{label}");
    }
}
