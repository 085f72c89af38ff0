mod common;

use qspec_core::rings::{qi, LaurentPoly, Monomial, TpPoly};
use qspec_core::surfaces::SurfaceModel;

use common::{kmatrix, nef_hyperbolic, potential, ruled21};

fn cases() -> Vec<(SurfaceModel, i64)> {
    vec![
        (SurfaceModel::p2(0), 4),
        (SurfaceModel::p2(1), 3),
        (SurfaceModel::p2(2), 3),
        (SurfaceModel::p1xp1(1), 3),
        (ruled21(1), 3),
        (nef_hyperbolic(1), 3),
    ]
}

#[test]
fn computed_entries_match_the_closed_form() {
    for (s, cap) in cases() {
        let p = potential(s.clone(), cap, 8);
        let k = p.k_matrix();
        let dim = s.dim();
        for i in 0..dim - 1 {
            for j in 1..dim {
                assert_eq!(p.truncate(&k.entries[i][j]), p.truncate(&p.k_entry_closed_form(i, j)), "{} entry ({i}, {j})", s.key());
            }
        }
    }
}

#[test]
fn quantum_product_is_associative_on_small_models() {
    for (s, cap) in cases() {
        let p = potential(s.clone(), cap, 6);
        assert_eq!(p.associativity_defects(), vec![], "{}", s.key());
    }
}

#[test]
fn unit_acts_trivially() {
    for (s, cap) in cases() {
        let p = potential(s.clone(), cap, 6);
        for j in 0..s.dim() {
            let prod = p.quantum_product(0, j);
            for (l, x) in prod.iter().enumerate() {
                let want = if l == j { LaurentPoly::one(p.vars().clone(), p.order()) } else { p.zero() };
                assert_eq!(x, &want, "{} T_0 * T_{j}", s.key());
            }
        }
    }
}

#[test]
fn exceptional_diagonal_has_a_simple_pole() {
    for (s, cap) in cases().into_iter().filter(|(s, _)| s.r > 0) {
        let k = kmatrix(s.clone(), cap, 6);
        for e in 0..s.r {
            let x = s.exceptional_index(e);
            let low = k.entries[x][x].lowest_order();
            let terms: Vec<_> = low.terms().collect();
            assert_eq!(terms.len(), 1, "{}", s.key());
            let mut exp = vec![0; s.ndiv()];
            exp[s.m() + e] = -1;
            assert_eq!(terms[0].0, &Monomial(exp));
            assert_eq!(terms[0].1, &TpPoly::constant(qi(-1), 6));
        }
    }
}

#[test]
fn trace_has_no_quantum_constant_term() {
    // tr K = tr(c_1 *) has no q-free part: classical multiplication by c_1
    // is nilpotent in the graded ring.
    for (s, cap) in cases() {
        let k = kmatrix(s.clone(), cap, 6);
        let tr = k.trace();
        assert!(tr.coeff(&Monomial::zero(s.ndiv())).is_none_or(TpPoly::is_zero), "{}: {tr}", s.key());
    }
}
