//! Lifting a coprime factorization of `F(0, y)` to a factorization of
//! `F(x, y)` over truncated power series in `x`.

use num_traits::Zero;

use super::qpoly::QPoly;
use super::RayPoly;
use crate::error::{QspecError, Result};

/// `F(x, y) = sum_k x^k F_k(y)`, stored as the list of `F_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    pub series: Vec<QPoly>,
}

impl BiPoly {
    pub fn new(series: Vec<QPoly>) -> Self {
        BiPoly { series }
    }

    /// `F_k`, zero beyond the stored range.
    pub fn at(&self, k: usize) -> QPoly {
        self.series.get(k).cloned().unwrap_or_else(QPoly::zero)
    }

    /// Product truncated modulo `x^{n+1}`.
    pub fn mul_trunc(&self, o: &BiPoly, n: usize) -> BiPoly {
        let mut out = vec![QPoly::zero(); n + 1];
        for (i, a) in self.series.iter().enumerate().take(n + 1) {
            for (j, b) in o.series.iter().enumerate() {
                if i + j > n {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly { series: out }
    }

    /// Equality of the first `n + 1` coefficients.
    pub fn eq_mod(&self, o: &BiPoly, n: usize) -> bool {
        (0..=n).all(|k| self.at(k) == o.at(k))
    }

    /// Bivariate polynomial of a ray restriction with `y = lambda`, `x = q`,
    /// after multiplying by `q^shift`. Requires rational coefficients and
    /// no negative `q` power after the shift.
    pub fn from_ray(ray: &RayPoly, shift: i64) -> Result<BiPoly> {
        let mut series: Vec<Vec<crate::rings::Q>> = Vec::new();
        for (&(x, y), c) in &ray.terms {
            let yy = y + shift;
            if yy < 0 {
                return Err(QspecError::Precondition(format!("q-power {yy} is negative after clearing poles")));
            }
            if c.coeffs().len() > 1 {
                return Err(QspecError::Precondition("specialize t_p before lifting".into()));
            }
            let k = yy as usize;
            if series.len() <= k {
                series.resize(k + 1, Vec::new());
            }
            let row = &mut series[k];
            if row.len() <= x as usize {
                row.resize(x as usize + 1, crate::rings::Q::zero());
            }
            row[x as usize] += c.coeff(0);
        }
        Ok(BiPoly { series: series.into_iter().map(QPoly::new).collect() })
    }
}

/// Which factor's correction is solved from the Bezout identity at each
/// order; the other follows by exact division. Both give the same lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftOrder {
    FirstFactor,
    SecondFactor,
}

/// Monic `G, H` with `G = g`, `H = h` at `x = 0` and `F = G H mod x^{n+1}`.
pub fn hensel_factor(f: &BiPoly, g: &QPoly, h: &QPoly, n: usize) -> Result<(BiPoly, BiPoly)> {
    hensel_factor_with(f, g, h, n, LiftOrder::FirstFactor)
}

pub fn hensel_factor_with(f: &BiPoly, g: &QPoly, h: &QPoly, n: usize, order: LiftOrder) -> Result<(BiPoly, BiPoly)> {
    let pre = |m: &str| Err(QspecError::Precondition(m.into()));
    let f0 = f.at(0);
    if !g.is_monic() || !h.is_monic() {
        return pre("factors must be monic");
    }
    if f0 != g.mul(h) {
        return pre("F(0, y) is not the product g h");
    }
    let deg = f0.degree().unwrap_or(0);
    for k in 1..f.series.len() {
        if f.series[k].degree().is_some_and(|d| d >= deg) {
            return pre("F must be monic in y with higher x-orders of lower y-degree");
        }
    }
    let (gcd, s, t) = QPoly::ext_gcd(g, h);
    if gcd != QPoly::one() {
        return pre("g and h are not coprime");
    }
    // s g + t h = 1
    let mut gs = vec![g.clone()];
    let mut hs = vec![h.clone()];
    for k in 1..=n {
        let mut rk = f.at(k);
        for i in 1..k {
            rk = rk.sub(&gs[i].mul(&hs[k - i]));
        }
        // Solve g H_k + h G_k = r_k with deg G_k < deg g, deg H_k < deg h.
        let (gk, hk) = match order {
            LiftOrder::FirstFactor => {
                let gk = t.mul(&rk).rem(g);
                let (hk, rem) = rk.sub(&h.mul(&gk)).divrem(g);
                if !rem.is_zero() {
                    return Err(QspecError::Internal("inexact division while lifting".into()));
                }
                (gk, hk)
            }
            LiftOrder::SecondFactor => {
                let hk = s.mul(&rk).rem(h);
                let (gk, rem) = rk.sub(&g.mul(&hk)).divrem(h);
                if !rem.is_zero() {
                    return Err(QspecError::Internal("inexact division while lifting".into()));
                }
                (gk, hk)
            }
        };
        gs.push(gk);
        hs.push(hk);
    }
    Ok((BiPoly::new(gs), BiPoly::new(hs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{q, qi, Q};

    fn p(c: &[Q]) -> QPoly {
        QPoly::new(c.to_vec())
    }

    #[test]
    fn square_root_series() {
        // y^2 - (1 + x)
        let f = BiPoly::new(vec![p(&[qi(-1), qi(0), qi(1)]), p(&[qi(-1)])]);
        let g = p(&[qi(-1), qi(1)]);
        let h = p(&[qi(1), qi(1)]);
        let (gg, hh) = hensel_factor(&f, &g, &h, 2).unwrap();
        assert_eq!(gg.at(1), p(&[q(-1, 2)]));
        assert_eq!(gg.at(2), p(&[q(1, 8)]));
        assert_eq!(hh.at(1), p(&[q(1, 2)]));
        assert!(gg.mul_trunc(&hh, 2).eq_mod(&f, 2));
    }

    #[test]
    fn quadratic_branch() {
        // y^2 - y + x: G = y - (x + x^2 + 2x^3 + ..)
        let f = BiPoly::new(vec![p(&[qi(0), qi(-1), qi(1)]), p(&[qi(1)])]);
        let (gg, _) = hensel_factor(&f, &p(&[qi(0), qi(1)]), &p(&[qi(-1), qi(1)]), 3).unwrap();
        assert_eq!(gg.at(1), p(&[qi(-1)]));
        assert_eq!(gg.at(2), p(&[qi(-1)]));
        assert_eq!(gg.at(3), p(&[qi(-2)]));
    }

    #[test]
    fn preconditions() {
        let f = BiPoly::new(vec![p(&[qi(1), qi(2), qi(1)])]);
        let g = p(&[qi(1), qi(1)]);
        assert!(hensel_factor(&f, &g, &g, 2).is_err());
        let f = BiPoly::new(vec![p(&[qi(-1), qi(0), qi(1)])]);
        assert!(hensel_factor(&f, &p(&[qi(-2), qi(1)]), &p(&[qi(1), qi(1)]), 2).is_err());
    }
}
