mod common;

use proptest::prelude::*;
use qspec_core::gw::{load_cache, save_cache, GwTable};
use qspec_core::rings::{qi, Q};
use qspec_core::surfaces::{CurveClass, SurfaceModel};

use common::{plane_oracle, ruled21};

#[test]
fn engine_matches_frozen_oracle() {
    let rows = plane_oracle();
    assert!(rows.len() > 250);
    let mut tables: Vec<GwTable> = (0..=3).map(|r| GwTable::new(SurfaceModel::p2(r), 5)).collect();
    for row in &rows {
        let c = CurveClass::new(vec![row.d], row.alpha.clone()).padded(row.r);
        let got = tables[row.r].invariant(&c).unwrap();
        assert_eq!(got, row.value, "N_{{{}, {:?}}} on r = {}", row.d, row.alpha, row.r);
    }
}

#[test]
fn oracle_settles_the_double_line() {
    let rows = plane_oracle();
    let two = rows.iter().find(|r| r.r == 0 && r.d == 2).unwrap();
    assert_eq!(two.value, qi(1));
}

#[test]
fn exceptional_classes_and_negative_multiplicities() {
    let mut t = GwTable::new(SurfaceModel::p2(3), 4);
    for i in 0..3 {
        let mut a = vec![0; 3];
        a[i] = -1;
        assert_eq!(t.invariant(&CurveClass::new(vec![0], a.clone())).unwrap(), qi(1));
        a[i] = -2;
        assert_eq!(t.invariant(&CurveClass::new(vec![0], a)).unwrap(), Q::from_integer(0.into()));
    }
    assert_eq!(t.invariant(&CurveClass::new(vec![2], vec![1, -1, 0])).unwrap(), Q::from_integer(0.into()));
}

#[test]
fn cache_round_trip_preserves_values() {
    let s = ruled21(1);
    let mut t = GwTable::new(s.clone(), 3);
    t.populate().unwrap();
    let path = std::env::temp_dir().join(format!("qspec-core-test-{}.gw.jsonl", std::process::id()));
    save_cache(&t, &path).unwrap();
    let back = load_cache(&path, &s).unwrap();
    std::fs::remove_file(&path).unwrap();
    let mut a: Vec<_> = t.entries().collect();
    let mut b: Vec<_> = back.entries().collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert!(load_cache(&path, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_are_symmetric_in_the_exceptional_slots(
        d in 1i64..=4,
        alpha in proptest::collection::vec(0i64..=3, 3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let mut t = GwTable::new(SurfaceModel::p2(3), 4);
        let permuted: Vec<i64> = perm.iter().map(|&i| alpha[i]).collect();
        let a = t.invariant(&CurveClass::new(vec![d], alpha)).unwrap();
        let b = t.invariant(&CurveClass::new(vec![d], permuted)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplicity_one_points_are_free(d in 1i64..=4, a in 0i64..=2) {
        // A simple point imposes one condition, exactly like a point class.
        let mut t1 = GwTable::new(SurfaceModel::p2(1), 4);
        let mut t2 = GwTable::new(SurfaceModel::p2(2), 4);
        let x = t1.invariant(&CurveClass::new(vec![d], vec![a])).unwrap();
        let y = t2.invariant(&CurveClass::new(vec![d], vec![a, 1])).unwrap();
        prop_assert_eq!(x, y);
    }
}
