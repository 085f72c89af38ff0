use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::rational::{parse_rational, rational_to_string, Q};
use super::tppoly::TpPoly;
use crate::error::{QspecError, Result};

/// Ordered variable labels shared by all polynomials of one computation.
pub type Vars = Arc<Vec<String>>;

/// Exponent vector of a Laurent monomial, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn zero(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Laurent polynomial in the Novikov variables with coefficients in
/// `Q[t_p]/(t_p^{T+1})`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vars,
    order: u32,
    terms: BTreeMap<Monomial, TpPoly>,
}

impl LaurentPoly {
    pub fn zero(vars: Vars, order: u32) -> Self {
        LaurentPoly { vars, order, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars, order: u32) -> Self {
        Self::constant(vars, TpPoly::constant(Q::one(), order))
    }

    pub fn constant(vars: Vars, c: TpPoly) -> Self {
        let n = vars.len();
        Self::monomial(vars, Monomial::zero(n), c)
    }

    pub fn constant_q(vars: Vars, c: Q, order: u32) -> Self {
        Self::constant(vars, TpPoly::constant(c, order))
    }

    pub fn monomial(vars: Vars, exp: Monomial, c: TpPoly) -> Self {
        assert_eq!(exp.0.len(), vars.len(), "exponent length must match variable count");
        let order = c.order();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { vars, order, terms }
    }

    /// Builds from arbitrary terms, merging duplicates and pruning zeros.
    pub fn from_terms(vars: Vars, order: u32, items: impl IntoIterator<Item = (Monomial, TpPoly)>) -> Self {
        let mut p = LaurentPoly::zero(vars, order);
        for (m, c) in items {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &TpPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&TpPoly> {
        self.terms.get(m)
    }

    /// Adds `c * q^m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &TpPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.vars.len());
        match self.terms.get_mut(&m) {
            Some(existing) => {
                existing.add_assign_ref(c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn compatible(&self, other: &LaurentPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(QspecError::Config(format!(
                "variable sets differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        if self.order != other.order {
            return Err(QspecError::Config(format!(
                "t_p truncation orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.compatible(other)?;
        let mut out = LaurentPoly::zero(self.vars.clone(), self.order);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn neg_ref(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.vars.clone(), self.order);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, t)| (m.clone(), t.scale(c))).collect(),
        }
    }

    pub fn mul_tp(&self, c: &TpPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.vars.clone(),
            self.order,
            self.terms.iter().map(|(m, t)| (m.clone(), t.mul(c))),
        )
    }

    /// Re-inserts every term, dropping zero coefficients.
    pub fn normalized(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.vars.clone(), self.order, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Terms of minimal total q-degree.
    pub fn lowest_order(&self) -> LaurentPoly {
        let Some(min) = self.terms.keys().map(Monomial::degree).min() else {
            return self.clone();
        };
        self.filter(|m| m.degree() == min)
    }

    /// Smallest exponent of variable `i` among stored terms.
    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    fn check_nonzero_where_negative(&self, zero_at: impl Fn(usize) -> bool) -> Result<()> {
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && zero_at(i) {
                    return Err(QspecError::Domain(format!(
                        "variable {} is zero but occurs with exponent {e}",
                        self.vars[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, q: &[Complex64], tp: Complex64) -> Result<Complex64> {
        if q.len() != self.nvars() {
            return Err(QspecError::Config(format!("expected {} values, got {}", self.nvars(), q.len())));
        }
        self.check_nonzero_where_negative(|i| q[i] == Complex64::new(0.0, 0.0))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.eval_complex(tp);
            for (x, &e) in q.iter().zip(&m.0) {
                if e != 0 {
                    v *= x.powi(e);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn evaluate_exact(&self, q: &[Q], tp: &Q) -> Result<Q> {
        if q.len() != self.nvars() {
            return Err(QspecError::Config(format!("expected {} values, got {}", self.nvars(), q.len())));
        }
        self.check_nonzero_where_negative(|i| q[i].is_zero())?;
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.eval_exact(tp);
            for (x, &e) in q.iter().zip(&m.0) {
                if e != 0 {
                    v *= num_traits::pow::Pow::pow(x, e);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let tp: Vec<Value> = c
                        .terms()
                        .map(|(p, x)| json!({"pow": p, "coeff": rational_to_string(x)}))
                        .collect();
                    json!({"qexp": m.0, "tp": tp})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, vars: Vars, order: u32) -> Result<LaurentPoly> {
        let bad = |msg: &str| QspecError::Domain(format!("invalid polynomial JSON: {msg}"));
        let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
        let mut p = LaurentPoly::zero(vars, order);
        for rec in arr {
            let exps = rec["qexp"].as_array().ok_or_else(|| bad("missing qexp"))?;
            let exps: Vec<i32> = exps
                .iter()
                .map(|e| e.as_i64().map(|x| x as i32).ok_or_else(|| bad("non-integer exponent")))
                .collect::<Result<_>>()?;
            if exps.len() != p.nvars() {
                return Err(bad("exponent length mismatch"));
            }
            let mut c = TpPoly::zero(order);
            for t in rec["tp"].as_array().ok_or_else(|| bad("missing tp"))? {
                let pow = t["pow"].as_u64().ok_or_else(|| bad("bad pow"))? as u32;
                let coeff = parse_rational(t["coeff"].as_str().ok_or_else(|| bad("bad coeff"))?)?;
                c.add_assign_ref(&TpPoly::monomial(pow, coeff, order));
            }
            p.add_term(Monomial(exps), &c);
        }
        Ok(p)
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(&m.0) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            for (p, x) in c.terms() {
                let neg = x < &Q::zero();
                let ax = if neg { -x.clone() } else { x.clone() };
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut factors = Vec::new();
                let mon = fmt_monomial(&self.vars, m);
                let tp = match p {
                    0 => String::new(),
                    1 => "t_p".to_string(),
                    _ => format!("t_p^{p}"),
                };
                let bare = mon.is_empty() && tp.is_empty();
                if !ax.is_one() || bare {
                    factors.push(if ax.denom().is_one() { ax.numer().to_string() } else { format!("({})", rational_to_string(&ax)) });
                }
                if !mon.is_empty() {
                    factors.push(mon);
                }
                if !tp.is_empty() {
                    factors.push(tp);
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// # Panics
    /// On mismatched variables or truncation order; use [`LaurentPoly::try_add`] to handle that case.
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("laurent add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("laurent sub")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    /// # Panics
    /// On mismatched variables or truncation order; use [`LaurentPoly::try_mul`] to handle that case.
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("laurent mul")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{q, qi};

    fn vars2() -> Vars {
        Arc::new(vec!["q_f".into(), "q_e".into()])
    }

    fn mono(v: &Vars, e: &[i32], c: Q, tp: u32, order: u32) -> LaurentPoly {
        LaurentPoly::monomial(v.clone(), Monomial(e.to_vec()), TpPoly::monomial(tp, c, order))
    }

    #[test]
    fn add_identity_and_cancellation() {
        let v = vars2();
        let inv = mono(&v, &[0, -1], qi(1), 0, 12);
        assert_eq!(&inv + &LaurentPoly::zero(v.clone(), 12), inv);
        let a = mono(&v, &[1, 0], qi(2), 0, 12);
        assert!((&a + &(-&a)).is_zero());
        let b = mono(&v, &[1, 0], qi(1), 1, 12);
        assert_eq!(&b + &b, mono(&v, &[1, 0], qi(2), 1, 12));
    }

    #[test]
    fn mul_examples() {
        let v = vars2();
        let inv = mono(&v, &[0, -1], qi(1), 0, 12);
        let qe = mono(&v, &[0, 1], qi(1), 0, 12);
        assert_eq!(&inv * &qe, LaurentPoly::one(v.clone(), 12));
        let a = mono(&v, &[1, 0], qi(2), 0, 12);
        let b = mono(&v, &[1, 0], qi(1), 1, 12);
        assert_eq!(&a * &b, mono(&v, &[2, 0], qi(2), 1, 12));
        let t3 = mono(&v, &[0, 0], qi(1), 3, 3);
        let t1 = mono(&v, &[0, 0], qi(1), 1, 3);
        assert!((&t3 * &t1).is_zero());
    }

    #[test]
    fn mismatch_is_config_error() {
        let v = vars2();
        let w: Vars = Arc::new(vec!["q_h".into()]);
        let a = LaurentPoly::one(v.clone(), 12);
        assert!(matches!(a.try_add(&LaurentPoly::one(w, 12)), Err(QspecError::Config(_))));
        assert!(matches!(a.try_mul(&LaurentPoly::one(v, 8)), Err(QspecError::Config(_))));
    }

    #[test]
    fn evaluate_examples() {
        let v = vars2();
        let inv = mono(&v, &[0, -1], qi(1), 0, 12);
        let z = inv.evaluate(&[Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)], Complex64::new(0.0, 0.0)).unwrap();
        assert!((z.re - 2.0).abs() < 1e-15);
        let tp = mono(&v, &[0, 0], qi(2), 1, 12);
        let z = tp.evaluate(&[Complex64::new(1.0, 0.0); 2], Complex64::new(0.1, 0.0)).unwrap();
        assert!((z.re - 0.2).abs() < 1e-15);
        let w: Vars = Arc::new(vec!["q_h".into()]);
        let p = mono(&w, &[1], qi(27), 0, 12);
        let z = p.evaluate(&[Complex64::new(1e-3, 0.0)], Complex64::new(0.0, 0.0)).unwrap();
        assert!((z.re - 0.027).abs() < 1e-15);
        let err = inv.evaluate(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], Complex64::new(0.0, 0.0));
        assert!(matches!(err, Err(QspecError::Domain(_))));
        assert_eq!(inv.evaluate_exact(&[qi(1), q(1, 2)], &qi(0)).unwrap(), qi(2));
    }

    #[test]
    fn json_round_trip_and_display() {
        let v = vars2();
        let p = &mono(&v, &[0, -1], qi(-1), 0, 12) + &mono(&v, &[2, 0], q(1, 2), 2, 12);
        let back = LaurentPoly::from_json(&p.to_json(), v.clone(), 12).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.to_string(), "-q_e^-1 + (1/2)*q_f^2*t_p^2");
    }
}
