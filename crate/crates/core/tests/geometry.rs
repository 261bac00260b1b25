use itertools::Itertools;
use nalgebra::{Matrix3, Rotation3, Vector3};
use proptest::prelude::*;
use stereohedra::geometry::{
    build_cell, facet_test, FacetStatus, HalfSpace, Isometry2, Isometry3, Point2, Point3,
    TolerancePolicy,
};

fn tol() -> TolerancePolicy {
    TolerancePolicy::for_scale(1.0).unwrap()
}

fn iso3(axis: (f64, f64, f64), angle: f64, t: (f64, f64, f64), flip: bool) -> Isometry3 {
    let axis = Vector3::new(axis.0, axis.1, axis.2);
    let r: Matrix3<f64> = if axis.norm() < 1e-3 {
        Matrix3::identity()
    } else {
        Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle).into_inner()
    };
    let m = if flip {
        r * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
    } else {
        r
    };
    Isometry3::new(m, Vector3::new(t.0, t.1, t.2), 1e-9).unwrap()
}

fn arb_iso3() -> impl Strategy<Value = Isometry3> {
    (
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        -3.2..3.2f64,
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64),
        any::<bool>(),
    )
        .prop_map(|(a, th, t, f)| iso3(a, th, t, f))
}

fn arb_point3(r: f64) -> impl Strategy<Value = Point3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn unit_box() -> Vec<HalfSpace<3>> {
    HalfSpace::boxed(&Point3::repeat(-2.0), &Point3::repeat(2.0))
}

/// Vertices of `{x : h.normal·x <= h.offset}` by brute force over all plane triples.
fn brute_vertices(planes: &[HalfSpace<3>], eps: f64) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::new();
    for (a, b, c) in planes.iter().tuple_combinations() {
        let m = Matrix3::from_rows(&[
            a.normal.transpose(),
            b.normal.transpose(),
            c.normal.transpose(),
        ]);
        if m.determinant().abs() < 1e-10 {
            continue;
        }
        let x = m
            .lu()
            .solve(&Vector3::new(a.offset, b.offset, c.offset))
            .unwrap();
        if planes.iter().all(|h| h.signed_distance(&x) <= eps)
            && out.iter().all(|v| (v - x).norm() > 1e-7)
        {
            out.push(x);
        }
    }
    out
}

/// Whether the vertices lying on `h` span a two-dimensional face.
fn spans_face(h: &HalfSpace<3>, verts: &[Point3], eps: f64) -> bool {
    let on: Vec<&Point3> = verts
        .iter()
        .filter(|v| h.signed_distance(v).abs() <= eps)
        .collect();
    on.iter()
        .tuple_combinations()
        .any(|(a, b, c)| (*b - *a).cross(&(*c - *a)).norm() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_matches_sequential_application(a in arb_iso3(), b in arb_iso3(), p in arb_point3(3.0)) {
        let ab = a.compose(&b);
        prop_assert!((ab.apply(&p) - a.apply(&b.apply(&p))).norm() < 1e-9);
        prop_assert!((a.invert().apply(&a.apply(&p)) - p).norm() < 1e-9);
        prop_assert!((ab.det() - a.det() * b.det()).abs() < 1e-9);
    }

    #[test]
    fn planar_rotations_fix_their_centre(angle in 0.1..6.1f64, cx in -3.0..3.0f64, cy in -3.0..3.0f64) {
        let c = Point2::new(cx, cy);
        let r = Isometry2::rotation(angle, c);
        prop_assert!((r.apply(&c) - c).norm() < 1e-12);
        prop_assert!((r.rotation_center(1e-9).unwrap() - c).norm() < 1e-9);
    }

    #[test]
    fn cell_is_equivariant(sites in prop::collection::vec(arb_point3(1.8), 8..24), m in arb_iso3()) {
        let t = tol();
        let p = Point3::zeros();
        prop_assume!(sites.iter().all(|s| s.norm() > 0.05));
        prop_assume!(sites.iter().tuple_combinations().all(|(a, b)| (a - b).norm() > 0.05));
        let bx = unit_box();
        let cell = build_cell(&p, &sites, &bx, &t).unwrap();
        prop_assume!(cell.marginal.is_empty());
        let msites: Vec<Point3> = sites.iter().map(|s| m.apply(s)).collect();
        let mbox: Vec<HalfSpace<3>> = bx.iter().map(|h| h.transformed(&m)).collect();
        let image = build_cell(&m.apply(&p), &msites, &mbox, &t).unwrap();
        prop_assert_eq!(cell.facet_sites(), image.facet_sites());
        prop_assert_eq!(cell.vertices.len(), image.vertices.len());
        for v in &cell.vertices {
            let mv = m.apply(v);
            prop_assert!(image.vertices.iter().any(|w| (w - mv).norm() < 1e-6));
        }
        prop_assert!((cell.circumradius - image.circumradius).abs() < 1e-6);
    }

    #[test]
    fn lp_facets_match_vertex_enumeration(sites in prop::collection::vec(arb_point3(1.8), 6..30)) {
        let t = tol();
        let p = Point3::zeros();
        prop_assume!(sites.iter().all(|s| s.norm() > 0.05));
        prop_assume!(sites.iter().tuple_combinations().all(|(a, b)| (a - b).norm() > 0.05));
        let bx = unit_box();
        let cell = build_cell(&p, &sites, &bx, &t).unwrap();
        prop_assume!(cell.marginal.is_empty());
        prop_assume!(cell.facets.iter().all(|f| f.slack > 1e-4));
        let bisectors: Vec<HalfSpace<3>> =
            sites.iter().map(|s| HalfSpace::bisector(&p, s, t.tol_dedupe).unwrap().normalized()).collect();
        let mut planes = bisectors.clone();
        planes.extend(bx.iter().map(|h| h.normalized()));
        let verts = brute_vertices(&planes, 1e-9);
        let oracle: Vec<usize> = (0..sites.len()).filter(|&i| spans_face(&bisectors[i], &verts, 1e-7)).collect();
        prop_assert_eq!(cell.facet_sites(), oracle);
        for f in &cell.facets {
            let on: Vec<&Point3> = f.vertices.iter().map(|&i| &cell.vertices[i]).collect();
            prop_assert!(on.len() >= 3);
            prop_assert!(on.iter().all(|v| f.halfspace.signed_distance(v).abs() < 1e-6));
        }
    }

    #[test]
    fn adding_sites_never_creates_facets(
        sites in prop::collection::vec(arb_point3(1.8), 6..20),
        extra in prop::collection::vec(arb_point3(1.8), 1..6),
    ) {
        let t = tol();
        let p = Point3::zeros();
        let all: Vec<Point3> = sites.iter().chain(&extra).copied().collect();
        prop_assume!(all.iter().all(|s| s.norm() > 0.05));
        prop_assume!(all.iter().tuple_combinations().all(|(a, b)| (a - b).norm() > 0.05));
        let bx = unit_box();
        for (i, q) in sites.iter().enumerate() {
            let others: Vec<Point3> = sites.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| *s).collect();
            let before = facet_test(&p, q, &others, &bx, &t).unwrap();
            let mut more = others.clone();
            more.extend(&extra);
            let after = facet_test(&p, q, &more, &bx, &t).unwrap();
            prop_assert!(after.slack <= before.slack + 1e-9);
            if before.status == FacetStatus::Redundant {
                prop_assert_ne!(after.status, FacetStatus::Facet);
            }
        }
    }
}

#[test]
fn octahedral_sites_give_unit_cube() {
    let t = tol();
    let sites: Vec<Point3> = (0..3)
        .flat_map(|k| [2.0, -2.0].map(|s| Point3::from_fn(|i, _| if i == k { s } else { 0.0 })))
        .collect();
    let cell = build_cell(&Point3::zeros(), &sites, &unit_box(), &t).unwrap();
    assert_eq!(cell.facets.len(), 6);
    assert_eq!(cell.vertices.len(), 8);
    assert!((cell.circumradius - 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn collinear_farther_site_is_redundant() {
    let t = tol();
    let o = Point3::zeros();
    let r = facet_test(
        &o,
        &Point3::new(2.0, 0.0, 0.0),
        &[Point3::new(1.0, 0.0, 0.0)],
        &unit_box(),
        &t,
    )
    .unwrap();
    assert_eq!(r.status, FacetStatus::Redundant);
}
