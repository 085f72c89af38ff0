use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::{rational_to_f64, rational_to_string, Q};

/// Polynomial in `t_p` truncated above a fixed order.
///
/// Coefficients are stored densely by power with trailing zeros trimmed, so
/// the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TpPoly {
    coeffs: Vec<Q>,
    order: u32,
}

impl TpPoly {
    pub fn zero(order: u32) -> Self {
        TpPoly { coeffs: Vec::new(), order }
    }

    pub fn constant(c: Q, order: u32) -> Self {
        Self::monomial(0, c, order)
    }

    /// `c * t_p^pow`, or zero if `pow` exceeds the order.
    pub fn monomial(pow: u32, c: Q, order: u32) -> Self {
        if pow > order || c.is_zero() {
            return Self::zero(order);
        }
        let mut coeffs = vec![Q::zero(); pow as usize + 1];
        coeffs[pow as usize] = c;
        TpPoly { coeffs, order }
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>, order: u32) -> Self {
        coeffs.truncate(order as usize + 1);
        let mut p = TpPoly { coeffs, order };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, pow: u32) -> Q {
        self.coeffs.get(pow as usize).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero `(power, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c))
    }

    /// Lowest power with nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms().next().map(|(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn add_assign_ref(&mut self, other: &TpPoly) {
        debug_assert_eq!(self.order, other.order);
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Q::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.trim();
    }

    pub fn add(&self, other: &TpPoly) -> TpPoly {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn neg(&self) -> TpPoly {
        TpPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order }
    }

    pub fn sub(&self, other: &TpPoly) -> TpPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> TpPoly {
        if c.is_zero() {
            return TpPoly::zero(self.order);
        }
        TpPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect(), order: self.order }
    }

    /// Product with powers above the order discarded.
    pub fn mul(&self, other: &TpPoly) -> TpPoly {
        debug_assert_eq!(self.order, other.order);
        if self.is_zero() || other.is_zero() {
            return TpPoly::zero(self.order);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(self.order as usize + 1);
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut p = TpPoly { coeffs, order: self.order };
        p.trim();
        p
    }

    pub fn eval_exact(&self, t: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + rational_to_f64(c);
        }
        acc
    }
}

impl fmt::Display for TpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.denom().is_one() { c.numer().to_string() } else { rational_to_string(c) };
            match p {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*t_p")?,
                _ => write!(f, "{cs}*t_p^{p}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{q, qi};

    #[test]
    fn truncation_discards_high_powers() {
        let a = TpPoly::monomial(3, qi(1), 3);
        let b = TpPoly::monomial(1, qi(1), 3);
        assert!(a.mul(&b).is_zero());
        assert!(TpPoly::monomial(4, qi(1), 3).is_zero());
    }

    #[test]
    fn product_and_eval() {
        // (1 + t)(1 - t) = 1 - t^2
        let a = TpPoly::from_coeffs(vec![qi(1), qi(1)], 5);
        let b = TpPoly::from_coeffs(vec![qi(1), qi(-1)], 5);
        let p = a.mul(&b);
        assert_eq!(p.coeffs(), &[qi(1), qi(0), qi(-1)]);
        assert_eq!(p.eval_exact(&q(1, 2)), q(3, 4));
        assert!((p.eval_complex(Complex64::new(0.5, 0.0)).re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cancellation_trims() {
        let a = TpPoly::monomial(2, qi(3), 4);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.valuation(), Some(2));
    }
}
