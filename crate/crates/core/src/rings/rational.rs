use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QspecError, Result};

pub type Q = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Serializes as `"num/den"`, always with an explicit denominator.
pub fn rational_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"n"`, `"n/d"` and plain decimals like `"0.1"` (read exactly).
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = |pos: usize, msg: &str| QspecError::Parse { pos, msg: format!("{msg} in {s:?}") };
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad(0, "bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad(n.to_string().len() + 1, "bad denominator"))?;
        if d.is_zero() {
            return Err(bad(s.len() - 1, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
            return Err(bad(ip.len() + 1, "bad fractional part"));
        }
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| bad(0, "bad integer part"))?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad(ip.len() + 1, "bad fractional part"))?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = BigRational::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad(0, "not a rational"))?;
    Ok(BigRational::from_integer(n))
}

/// Nearest `f64`, robust for huge numerators and denominators.
pub fn rational_to_f64(x: &Q) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both to ~60 significant bits before dividing.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let sn = (nb - 60).max(0);
    let sd = (db - 60).max(0);
    let n = (x.numer().abs() >> sn as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> sd as usize).to_f64().unwrap_or(1.0);
    let v = n / d * 2f64.powi((sn - sd) as i32);
    if x.is_negative() {
        -v
    } else {
        v
    }
}
