//! The two WDVV consequences used by the engine, written for any model with
//! a minimal-model pairing and any number of exceptional divisors.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{QspecError, Result};
use crate::rings::{qi, Q};
use crate::surfaces::{CurveClass, SurfaceModel};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// All splittings `(beta, alpha) = c1 + c2` with both beta parts nonzero
/// and both expected dimensions non-negative. Assumes non-negative
/// coordinates, which holds for every class reaching a relation.
pub fn decompositions(s: &SurfaceModel, c: &CurveClass) -> Vec<(CurveClass, CurveClass)> {
    let mut out = Vec::new();
    let beta_boxes = boxes(&c.beta);
    let alpha_boxes = boxes(&c.alpha);
    for b1 in &beta_boxes {
        let b2: Vec<i64> = c.beta.iter().zip(b1).map(|(x, y)| x - y).collect();
        if b1.iter().all(|&x| x == 0) || b2.iter().all(|&x| x == 0) {
            continue;
        }
        for a1 in &alpha_boxes {
            let a2: Vec<i64> = c.alpha.iter().zip(a1).map(|(x, y)| x - y).collect();
            let c1 = CurveClass::new(b1.clone(), a1.clone());
            let c2 = CurveClass::new(b2.clone(), a2);
            if s.expected_dim(&c1) < 0 || s.expected_dim(&c2) < 0 {
                continue;
            }
            out.push((c1, c2));
        }
    }
    out
}

/// Integer points of the box `0 <= x <= v` (empty if some `v_i < 0`).
fn boxes(v: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(v.len())];
    for &hi in v {
        if hi < 0 {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(out.len() * (hi as usize + 1));
        for p in &out {
            for x in 0..=hi {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Intersection number of two classes `beta_1 . beta_2 - alpha_1 . alpha_2`.
pub fn class_pairing(s: &SurfaceModel, c1: &CurveClass, c2: &CurveClass) -> i64 {
    let t1 = s.beta_intersections(&c1.beta);
    let bb: i64 = t1.iter().zip(&c2.beta).map(|(a, b)| a * b).sum();
    let aa: i64 = c1.alpha.iter().zip(&c2.alpha).map(|(a, b)| a * b).sum();
    bb - aa
}

/// Relation (Rm) with minimal-model divisors `(i, j)`, `g_ij != 0`,
/// for a class with `n >= 3`.
pub fn relation_rm<F>(s: &SurfaceModel, i: usize, j: usize, c: &CurveClass, lookup: &mut F) -> Result<Q>
where
    F: FnMut(&CurveClass) -> Result<Q>,
{
    let g = s.minimal_pairing()[i][j];
    if g == 0 {
        return Err(QspecError::Precondition(format!("(Rm) needs g_ij != 0, got g_{i}{j} = 0")));
    }
    let n = s.expected_dim(c);
    if n < 3 {
        return Err(QspecError::Precondition(format!("(Rm) needs n >= 3, class {c} has n = {n}")));
    }
    let mut total = Q::zero();
    for (c1, c2) in decompositions(s, c) {
        let pair = class_pairing(s, &c1, &c2);
        if pair == 0 {
            continue;
        }
        let n1 = s.expected_dim(&c1);
        let t1 = s.beta_intersections(&c1.beta);
        let t2 = s.beta_intersections(&c2.beta);
        let bracket = BigInt::from(t1[i] * t2[j]) * binomial(n - 3, n1 - 1)
            - BigInt::from(t1[i] * t1[j]) * binomial(n - 3, n1);
        if bracket.is_zero() {
            continue;
        }
        let v1 = lookup(&c1)?;
        if v1.is_zero() {
            continue;
        }
        let v2 = lookup(&c2)?;
        total += v1 * v2 * Q::from_integer(bracket * BigInt::from(pair));
    }
    Ok(total / qi(g))
}

/// Relation (Rk) solved for `N_{beta, alpha}`, lowering the multiplicity of
/// exceptional divisor `e` (0-based) by one, with minimal-model divisors `(i, j)`.
pub fn relation_rk<F>(s: &SurfaceModel, i: usize, j: usize, e: usize, c: &CurveClass, lookup: &mut F) -> Result<Q>
where
    F: FnMut(&CurveClass) -> Result<Q>,
{
    let a = c.alpha[e];
    let t = s.beta_intersections(&c.beta);
    let lhs = t[i] * t[j] * a;
    if lhs == 0 {
        return Err(QspecError::Precondition(format!(
            "(Rk) is degenerate for class {c} with divisors ({i},{j}) and exceptional {e}"
        )));
    }
    let g = s.minimal_pairing()[i][j];
    let mut lower = c.clone();
    lower.alpha[e] -= 1;
    let n_low = s.expected_dim(&lower);
    let mut total = Q::zero();
    let first = t[i] * t[j] - g * (a - 1) * (a - 1);
    if first != 0 && n_low >= 0 {
        total += lookup(&lower)? * qi(first);
    }
    if n_low >= 0 {
        for (c1, c2) in decompositions(s, &lower) {
            let pair = class_pairing(s, &c1, &c2);
            if pair == 0 {
                continue;
            }
            let n1 = s.expected_dim(&c1);
            let t1 = s.beta_intersections(&c1.beta);
            let t2 = s.beta_intersections(&c2.beta);
            let (a1, a2) = (c1.alpha[e], c2.alpha[e]);
            let factor = BigInt::from(t1[j] * t2[i] * a1 * a2 - t1[i] * t1[j] * a2 * a2) * binomial(n_low - 1, n1);
            if factor.is_zero() {
                continue;
            }
            let v1 = lookup(&c1)?;
            if v1.is_zero() {
                continue;
            }
            let v2 = lookup(&c2)?;
            total += v1 * v2 * Q::from_integer(factor * BigInt::from(pair));
        }
    }
    Ok(total / qi(lhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn decompositions_of_conic() {
        let s = SurfaceModel::p2(0);
        let d = decompositions(&s, &CurveClass::new(vec![2], vec![]));
        assert_eq!(d.len(), 1);
    }
}
