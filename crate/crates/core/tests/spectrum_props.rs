mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qspec_core::rings::{q, rational_to_f64};
use qspec_core::spectrum::eigen::eigenvalues;
use qspec_core::spectrum::{ray_scan, specialize, ScanParams};
use qspec_core::surfaces::SurfaceModel;

use common::{kmatrix, nef_hyperbolic, ruled21};

#[test]
fn trace_and_determinant_identities_hold_at_every_sample() {
    for s in [SurfaceModel::p2(1), ruled21(1), nef_hyperbolic(1), SurfaceModel::p1xp1(1)] {
        let k = kmatrix(s.clone(), 3, 8);
        let p = ScanParams::new(vec![1.0; s.ndiv()], q(1, 10), 1e-5, 1e-1, 9);
        let t = ray_scan(&k, &p, None).unwrap();
        for smp in &t.samples {
            assert!(smp.trace_residual <= 1e-9, "{} trace at q = {}: {}", s.key(), smp.q, smp.trace_residual);
            assert!(smp.det_residual <= 1e-8, "{} det at q = {}: {}", s.key(), smp.q, smp.det_residual);
            assert!(smp.raw_discrepancy < 1e-6, "{} double vs refined at q = {}", s.key(), smp.q);
        }
    }
}

#[test]
fn labels_follow_branches_continuously() {
    let k = kmatrix(SurfaceModel::p2(1), 3, 8);
    let p = ScanParams::new(vec![1.0, 1.0], q(1, 10), 1e-4, 1e-2, 41);
    let t = ray_scan(&k, &p, None).unwrap();
    // Over a fine grid every eigenvalue moves by a small fraction of its size.
    for (l, jump) in t.labels.iter().zip(&t.max_jump) {
        assert!(*jump < 0.3, "{l} jumps by {jump}");
    }
    // The exceptional branch keeps growing like 1/q.
    let e = t.labels.iter().position(|l| l == "e1").unwrap();
    for w in t.samples.windows(2) {
        assert!(w[0].eigenvalues[e].norm() > w[1].eigenvalues[e].norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn unit_shift_moves_the_whole_spectrum(n in -20i64..=20, d in 1i64..=8) {
        // Adding 2 t_0 times the identity shifts each eigenvalue by 2 t_0.
        let k = kmatrix(SurfaceModel::p2(1), 2, 6);
        let p = ScanParams::new(vec![1.0, 1.0], q(1, 10), 1e-3, 1e-2, 3);
        let t = ray_scan(&k, &p, None).unwrap();
        let shift = q(n, d);
        let s = t.shifted(&shift);
        let dz = Complex64::new(rational_to_f64(&shift), 0.0);
        for (a, b) in t.samples.iter().zip(&s.samples) {
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                prop_assert!((x + dz - y).norm() <= 1e-12 * (1.0 + y.norm()));
            }
        }
    }

    #[test]
    fn eigenvalues_reproduce_trace_of_random_specializations(
        q1 in 1e-4f64..1e-1, qe in 1e-4f64..1e-1, tp in -0.5f64..0.5,
    ) {
        let k = kmatrix(SurfaceModel::p2(1), 3, 8);
        let m = specialize(&k, &[Complex64::new(q1, 0.0), Complex64::new(qe, 0.0)], Complex64::new(tp, 0.0)).unwrap().matrix;
        let ev = eigenvalues(&m).unwrap();
        let tr: Complex64 = (0..m.len()).map(|i| m[i][i]).sum();
        let sum: Complex64 = ev.iter().sum();
        prop_assert!((sum - tr).norm() <= 1e-9 * (1.0 + tr.norm()));
    }
}
