mod common;

use proptest::prelude::*;
use qspec_core::charpoly::hensel::{hensel_factor, hensel_factor_with, BiPoly, LiftOrder};
use qspec_core::charpoly::qpoly::QPoly;
use qspec_core::charpoly::{char_poly, lower_hull, ray_char_poly, TpMode};
use qspec_core::dubrovin::KMatrix;
use qspec_core::rings::{q, qi, Q};
use qspec_core::surfaces::SurfaceModel;

use common::{kmatrix, ruled21};

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn rational() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn monic(deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QPoly> {
    deg.prop_flat_map(|d| proptest::collection::vec(rational(), d)).prop_map(|mut c| {
        c.push(qi(1));
        QPoly::new(c)
    })
}

/// `(g, h, F)` with `F(0, y) = g h`, coprime `g, h`, and higher `x`-orders of
/// lower `y`-degree.
fn split() -> impl Strategy<Value = (QPoly, QPoly, BiPoly)> {
    (monic(1..=3), monic(1..=3))
        .prop_filter("coprime factors", |(g, h)| QPoly::gcd(g, h) == QPoly::one())
        .prop_flat_map(|(g, h)| {
            let deg = g.degree().unwrap() + h.degree().unwrap();
            let tail = proptest::collection::vec(proptest::collection::vec(rational(), deg), 8);
            (Just(g), Just(h), tail)
        })
        .prop_map(|(g, h, tail)| {
            let mut series = vec![g.mul(&h)];
            series.extend(tail.into_iter().map(QPoly::new));
            (g, h, BiPoly::new(series))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn hensel_lift_factors_modulo_x9((g, h, f) in split()) {
        let (gg, hh) = hensel_factor(&f, &g, &h, 8).unwrap();
        prop_assert!(gg.mul_trunc(&hh, 8).eq_mod(&f, 8));
        prop_assert_eq!(gg.at(0), g.clone());
        prop_assert_eq!(hh.at(0), h.clone());
        for k in 1..=8 {
            prop_assert!(gg.at(k).degree().is_none_or(|d| d < g.degree().unwrap()));
            prop_assert!(hh.at(k).degree().is_none_or(|d| d < h.degree().unwrap()));
        }
        // The lift is unique, so solving for either factor first agrees.
        let (g2, h2) = hensel_factor_with(&f, &g, &h, 8, LiftOrder::SecondFactor).unwrap();
        prop_assert!(g2.eq_mod(&gg, 8) && h2.eq_mod(&hh, 8));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lower_hull_is_convex_and_supports_every_point(
        pts in proptest::collection::vec((0i64..=8, -6i64..=6), 1..=14),
    ) {
        let hull = lower_hull(&pts);
        prop_assert!(!hull.is_empty());
        for v in &hull {
            prop_assert!(pts.contains(v));
        }
        prop_assert_eq!(hull[0].0, pts.iter().map(|p| p.0).min().unwrap());
        prop_assert_eq!(hull.last().unwrap().0, pts.iter().map(|p| p.0).max().unwrap());
        for w in hull.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for w in hull.windows(3) {
            prop_assert!(cross(w[0], w[1], w[2]) > 0, "slopes must increase strictly: {:?}", hull);
        }
        for &p in &pts {
            let seg = hull.windows(2).find(|w| w[0].0 <= p.0 && p.0 <= w[1].0);
            match seg {
                Some(w) => prop_assert!(cross(w[0], w[1], p) >= 0, "{:?} below {:?}", p, w),
                None => prop_assert!(hull.len() == 1 && p.1 >= hull[0].1),
            }
        }
    }
}

fn ray() -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec((1i64..=7, 1i64..=4).prop_map(|(n, d)| q(n, d)), 3)
}

thread_local! {
    static MODELS: Vec<KMatrix> = vec![kmatrix(SurfaceModel::p2(1), 3, 6), kmatrix(ruled21(1), 3, 6)];
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ray_first_and_full_determinant_agree(nu in ray(), which in 0usize..2, tp_zero in any::<bool>()) {
        let mode = if tp_zero { TpMode::Value(qi(0)) } else { TpMode::Generic };
        MODELS.with(|models| {
            let k = &models[which];
            let nu = &nu[..k.vars.len()];
            let full = char_poly(k).substitute_ray(nu, &mode).unwrap();
            let direct = ray_char_poly(k, nu, &mode).unwrap();
            assert_eq!(full.terms, direct.terms, "{}", k.surface.key());
        });
    }
}
