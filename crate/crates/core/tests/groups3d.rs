use std::collections::BTreeMap;

use stereohedra::geometry::Point3;
use stereohedra::groups3d::{Catalog, GroupError, GroupSpec};

fn group(name: &str, kv: &[(&str, f64)]) -> GroupSpec {
    let params: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    GroupSpec::make(name, &params).unwrap()
}

fn lattice_groups() -> Vec<GroupSpec> {
    vec![
        group("P1", &[("a", 1.0), ("b", 1.3), ("c", 0.8)]),
        group("P2/n2/n2/n", &[("a", 1.0), ("b", 1.2), ("c", 0.9)]),
        group("P4_122", &[("horiz", 2.0), ("vert", 1.0)]),
        group("I4_122", &[("horiz", 4.0), ("vert", 1.0)]),
        group("P6_122", &[("horiz", 3.0), ("vert", 2.0)]),
    ]
}

fn base() -> Point3 {
    Point3::new(0.137, 0.291, 0.083)
}

#[test]
fn orbit_is_closed_under_generators() {
    for g in lattice_groups() {
        let b = base();
        let inner = g.orbit_in_box(&b, &Point3::repeat(-2.0), &Point3::repeat(2.0));
        let outer = g.orbit_in_box(&b, &Point3::repeat(-12.0), &Point3::repeat(12.0));
        for q in &inner {
            for h in g.all_generators() {
                for m in [h, h.invert()] {
                    let image = m.apply(&q.coords);
                    assert!(
                        outer.iter().any(|o| (o.coords - image).norm() < 1e-9),
                        "{}: image {image:?} not in orbit",
                        g.name
                    );
                }
            }
        }
    }
}

#[test]
fn words_evaluate_to_orbit_points() {
    for g in lattice_groups() {
        let b = base();
        for q in g.orbit_in_box(&b, &Point3::repeat(-3.0), &Point3::repeat(3.0)) {
            assert!(
                (g.evaluate_word(&q.word).apply(&b) - q.coords).norm() < 1e-9,
                "{}",
                g.name
            );
        }
    }
}

#[test]
fn orbit_density_is_the_aspect_count() {
    for g in lattice_groups() {
        let b = base();
        let pts = g.orbit_in_box(&b, &Point3::repeat(-15.0), &Point3::repeat(15.0));
        for shift in [[0i64, 0, 0], [1, 0, 0], [0, -1, 2], [-1, 1, -1]] {
            let count = pts
                .iter()
                .filter(|p| {
                    let (c, _) = g.lattice_coords(&p.coords);
                    (0..3).all(|k| {
                        let t = c[k] - shift[k] as f64;
                        (-1e-9..1.0 - 1e-9).contains(&t)
                    })
                })
                .count();
            assert_eq!(count, g.aspects, "{} cell {shift:?}", g.name);
        }
    }
}

#[test]
fn stabilizer_examples() {
    let g = group("P6_122", &[("horiz", 100.0), ("vert", 12.0)]);
    let tan = (std::f64::consts::PI / 12.0).tan();
    assert!(g.stabilizer_check(&Point3::new(1.0, tan, 4.0)).is_ok());
    assert!(matches!(
        g.stabilizer_check(&Point3::new(0.0, 0.0, 0.0)),
        Err(GroupError::NontrivialStabilizer { .. })
    ));
    assert!(g.stabilizer_check(&Point3::new(0.0, 0.0, 0.3)).is_ok());
    let p1 = group("P1", &[("a", 1.0), ("b", 1.0), ("c", 1.0)]);
    assert!(p1.stabilizer_check(&Point3::new(0.0, 0.0, 0.0)).is_ok());
}

#[test]
fn catalog_round_trip_and_errors() {
    let cat = Catalog::builtin();
    for name in [
        "P1",
        "P6_122",
        "I4_122",
        "P4_122",
        "P2/n2/n2/n",
        "screw",
        "rho-g2",
    ] {
        assert!(cat.get(name).is_some(), "{name}");
    }
    assert!(matches!(
        GroupSpec::make("P6_122", &BTreeMap::from([("horiz".to_string(), 1.0)])),
        Err(GroupError::MissingParam { .. })
    ));
    assert!(matches!(
        GroupSpec::make("Q9", &BTreeMap::new()),
        Err(GroupError::UnknownGroup { .. })
    ));
}

#[test]
fn helix_groups_have_vertical_lattice_only() {
    let g = group("rho-g2", &[("k", 12.0), ("pitch", 1.0)]);
    assert!(g.is_helix());
    assert_eq!(g.aspects, 12);
    assert!((g.vertical.norm() - 12.0).abs() < 1e-12);
    assert!(g.horizontal_min.is_none());
}
