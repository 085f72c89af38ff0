mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qspec_core::rings::{parse_rational, q, rational_to_string, LaurentPoly, Monomial, TpPoly, Vars, Q};
use qspec_core::surfaces::{mat_mul, SurfaceModel};

const ORDER: u32 = 4;

fn vars() -> Vars {
    Arc::new(vec!["q1".into(), "q2".into()])
}

fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    let term = ((-2i32..=2, -1i32..=2), proptest::collection::vec(rational(), 1..=3));
    proptest::collection::vec(term, 0..=4).prop_map(|terms| {
        LaurentPoly::from_terms(
            vars(),
            ORDER,
            terms.into_iter().map(|((a, b), c)| (Monomial(vec![a, b]), TpPoly::from_coeffs(c, ORDER))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn addition_is_an_abelian_group(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &LaurentPoly::zero(vars(), ORDER), a.clone());
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(vars(), ORDER), a.clone());
    }

    #[test]
    fn truncation_commutes_with_products(a in laurent(), b in laurent()) {
        // Dropping t_p powers above the order before or after multiplying agrees.
        let big = |p: &LaurentPoly| LaurentPoly::from_terms(vars(), 2 * ORDER, p.terms().map(|(m, c)| {
            (m.clone(), TpPoly::from_coeffs(c.coeffs().to_vec(), 2 * ORDER))
        }));
        let wide = &big(&a) * &big(&b);
        let narrowed = LaurentPoly::from_terms(vars(), ORDER, wide.terms().map(|(m, c)| {
            (m.clone(), TpPoly::from_coeffs(c.coeffs().to_vec(), ORDER))
        }));
        prop_assert_eq!(narrowed, &a * &b);
    }

    #[test]
    fn rationals_round_trip_through_text(n in -1_000_000i64..=1_000_000, d in 1i64..=1_000_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_rational(&rational_to_string(&x)).unwrap(), x);
    }

    #[test]
    fn pairing_inverse_is_exact(kind in 0usize..4, r in 0usize..=4) {
        let s = match kind {
            0 => SurfaceModel::p2(r),
            1 => SurfaceModel::p1xp1(r),
            2 => common::ruled21(r),
            _ => common::nef_hyperbolic(r),
        };
        let (g, ginv) = s.pairing();
        let id = mat_mul(&g, &ginv);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(x.clone(), if i == j { q(1, 1) } else { q(0, 1) });
            }
        }
    }
}
