use proptest::prelude::*;
use stereohedra::bounds::*;

#[test]
fn delone_examples() {
    assert_eq!(delone_bound(48, 3).unwrap(), 390);
    assert_eq!(delone_bound(16, 3).unwrap(), 134);
    assert_eq!(delone_bound(8, 3).unwrap(), 70);
    assert_eq!(delone_bound(0, 3), Err(BoundsError::NonPositive));
}

#[test]
fn corollary_examples() {
    assert_eq!(corollary_bound(12, 1, 4, 1).unwrap(), 96);
    assert_eq!(corollary_bound(6, 3, 4, 3).unwrap(), 48);
    assert_eq!(corollary_bound(16, 4, 7, 2).unwrap(), 106);
    assert!(matches!(
        corollary_bound(6, 4, 4, 1),
        Err(BoundsError::NotDivisible { .. })
    ));
}

#[test]
fn group_report_examples() {
    let r = group_report("P6_122").unwrap();
    assert_eq!(
        (r.final_bound, r.final_source.as_deref()),
        (Some(78), Some("Prop 4.1"))
    );
    assert_eq!(group_report("I-4c2").unwrap().final_bound, Some(40));
    assert_eq!(group_report("I4_1cd").unwrap().final_bound, Some(44));
    assert_eq!(group_report("R-32/c").unwrap().final_bound, Some(79));
    let p6222 = group_report("P6_222").unwrap();
    assert_eq!((p6222.cor_bound, p6222.final_bound), (78, Some(78)));
    assert!(matches!(
        group_report("NOPE"),
        Err(BoundsError::UnknownGroup(_))
    ));
}

#[test]
fn table_verification() {
    let t = BoundsTable::builtin();
    let report = table_verify(&t);
    assert!(report.ok(), "{report:#?}");
    assert_eq!(report.rows, 58);
    assert_eq!(report.summary(), "58 rows OK");
    assert_eq!(report.max_final, Some(80));
    assert_eq!(report.over_38.len(), 21);
    assert_eq!(report.over_50.len(), 9);
    assert_eq!(t.exceeding(70).len(), 4);
    for key in ["over-50-count", "global-84"] {
        assert!(report.notes.iter().any(|n| n.key == key), "{key}");
    }
}

#[test]
fn final_bounds_never_exceed_the_formulas() {
    for r in &BoundsTable::builtin().records {
        assert_eq!(
            r.cor_bound,
            corollary_bound(r.a, r.a0, r.i, r.l).unwrap(),
            "{}",
            r.name
        );
        assert_eq!(r.delone_bound, delone_bound(r.a, 3).unwrap(), "{}", r.name);
        if let Some(f) = r.final_bound {
            assert!(f <= r.cor_bound.max(r.delone_bound), "{}", r.name);
        }
        assert!(
            r.effective_bound()
                <= r.cor_bound
                    .min(r.delone_bound)
                    .max(r.final_bound.unwrap_or(0))
        );
    }
}

#[test]
fn loading_errors() {
    assert!(matches!(
        BoundsTable::load(std::path::Path::new("/nonexistent/bounds.table")),
        Err(BoundsError::File(_))
    ));
    assert!(matches!(
        BoundsTable::parse("format 9\n"),
        Err(BoundsError::Parse { .. })
    ));
}

proptest! {
    #[test]
    fn corollary_is_plane_count_times_cap_plus_eight(a0 in 1u32..5, m in 1u32..12, i in 1u32..12, l in 1u32..4) {
        let a = a0 * m;
        let planes = plane_count(a, a0, l).unwrap();
        prop_assert_eq!(corollary_bound(a, a0, i, l).unwrap(), i * planes + 8);
        prop_assert_eq!(planes, 2 * a * l / a0 - 2);
    }

    #[test]
    fn delone_grows_with_dimension(a in 1u32..100, d in 1u32..5) {
        prop_assert_eq!(delone_bound(a, d).unwrap(), (1 << d) * (a + 1) - 2);
        prop_assert!(delone_bound(a, d + 1).unwrap() > delone_bound(a, d).unwrap());
    }
}
