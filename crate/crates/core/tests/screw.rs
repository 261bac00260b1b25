use std::f64::consts::PI;

use stereohedra::screw::*;

#[test]
fn tangent_centre_examples() {
    assert!((tangent_center(PI / 2.0, 1.0).unwrap() + PI / 2.0).abs() < 1e-15);
    for t0 in [1e-3, 1e-5] {
        assert!((tangent_center(t0, 2.0).unwrap() + 0.5).abs() < 1e-6);
    }
    assert!(matches!(
        tangent_center(0.0, 1.0),
        Err(ScrewError::T0OutOfRange(_))
    ));
    assert!(matches!(
        tangent_center(PI, 1.0),
        Err(ScrewError::T0OutOfRange(_))
    ));
}

#[test]
fn sphere_is_orthogonal_to_the_helix_at_both_contacts() {
    for (t0, r) in [(0.3, 1.0), (1.0, 0.5), (2.5, 3.0)] {
        let a = tangent_center(t0, r).unwrap();
        for t in [t0, -t0] {
            let p = nalgebra::Vector3::new(r * t.cos(), r * t.sin(), t);
            let tangent = nalgebra::Vector3::new(-r * t.sin(), r * t.cos(), 1.0);
            assert!(
                (p - nalgebra::Vector3::new(a, 0.0, 0.0))
                    .dot(&tangent)
                    .abs()
                    < 1e-12
            );
        }
    }
}

#[test]
fn f_has_a_double_root_and_is_positive_elsewhere() {
    for t0 in [0.3, 1.0, 2.5] {
        let (f, df, ddf) = f_eval(t0, t0).unwrap();
        assert!(f.abs() < 1e-12 && df.abs() < 1e-12 && ddf > 0.0);
        for j in 0..1000 {
            let t = -PI + 2.0 * PI * j as f64 / 999.0;
            if (t.abs() - t0).abs() > 1e-3 {
                assert!(f_eval(t, t0).unwrap().0 > 0.0, "t0 {t0}, t {t}");
            }
        }
    }
}

#[test]
fn f_prime_has_one_zero_in_the_open_half_turn() {
    for t0 in [0.3, 1.0, 2.5] {
        let grid: Vec<(f64, f64, f64)> = (1..2000)
            .map(|j| PI * j as f64 / 2000.0)
            .map(|t| f_eval(t, t0).unwrap())
            .collect();
        assert!(grid.windows(2).all(|w| w[1].2 > w[0].2), "f'' increasing");
        let sign_changes = grid
            .windows(2)
            .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
            .count();
        assert_eq!(sign_changes, 1);
    }
}

#[test]
fn helix_steps_match_group_powers() {
    let h = HelixSpec::new(7, 0.4, 1.2, 0.3).unwrap();
    let g = h.group().unwrap();
    let mut q = helix_point(&h, 0.0);
    for i in 1..=14 {
        q = g.generators[0].apply(&q);
        assert!((q - helix_point(&h, 2.0 * PI * i as f64 / 7.0)).norm() < 1e-9);
    }
}

#[test]
fn verification_examples() {
    for (k, n) in [(2, 4), (6, 12), (12, 24)] {
        let v = verify_screw_neighbors(&HelixSpec::new(k, 1.0, 1.0, 0.0).unwrap()).unwrap();
        assert!(v.pass, "{}", v.details);
        assert_eq!(v.indices.len(), n);
        let expected: Vec<i64> = (-k..=k).filter(|i| *i != 0).collect();
        assert_eq!(v.indices, expected);
    }
    assert!(matches!(
        HelixSpec::new(1, 1.0, 1.0, 0.0),
        Err(ScrewError::InvalidOrder(1))
    ));
    assert!(HelixSpec::new(3, 0.0, 1.0, 0.0).is_err());
    assert!(HelixSpec::new(3, 1.0, -1.0, 0.0).is_err());
}

#[test]
fn phase_does_not_change_the_answer() {
    for alpha in [0.4, -1.3, 2.9] {
        let v = verify_screw_neighbors(&HelixSpec::new(5, 0.7, 2.0, alpha).unwrap()).unwrap();
        assert!(v.pass, "alpha {alpha}: {}", v.details);
    }
}
