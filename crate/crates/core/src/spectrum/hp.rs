//! Extended-precision eigenvalues.
//!
//! The exceptional eigenvalues sit at `-1/q_e` with corrections far below
//! double precision, so deviations are measured on roots of the exact
//! characteristic polynomial of the rationally specialized matrix. Roots
//! are refined by Aberth iteration in binary fixed point on each
//! square-free factor, seeded by the double-precision solve.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::charpoly::qpoly::QPoly;
use crate::rings::{rational_to_f64, Q};
use crate::{QspecError, Result};

/// Fractional bits of the fixed-point format.
pub const PREC: u32 = 640;

/// Complex number `(re + i im) / 2^PREC`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hp {
    pub re: BigInt,
    pub im: BigInt,
}

fn shr_round(x: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x;
    }
    let half = BigInt::one() << (bits - 1);
    if x.is_negative() {
        -((-x + &half) >> bits)
    } else {
        (x + half) >> bits
    }
}

fn fixed_from_q(x: &Q) -> BigInt {
    let n: BigInt = x.numer() << PREC;
    let d = x.denom();
    let (quot, rem) = (&n / d, &n % d);
    // round half away from zero
    if (rem.abs() << 1) >= *d {
        if n.is_negative() {
            quot - 1
        } else {
            quot + 1
        }
    } else {
        quot
    }
}

fn fixed_to_f64(x: &BigInt) -> f64 {
    rational_to_f64(&BigRational::new(x.clone(), BigInt::one() << PREC))
}

impl Hp {
    pub fn zero() -> Self {
        Hp { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn from_q(re: &Q, im: &Q) -> Self {
        Hp { re: fixed_from_q(re), im: fixed_from_q(im) }
    }

    pub fn from_c64(z: Complex64) -> Self {
        let re = BigRational::from_float(z.re).unwrap_or_default();
        let im = BigRational::from_float(z.im).unwrap_or_default();
        Self::from_q(&re, &im)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(fixed_to_f64(&self.re), fixed_to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Hp) -> Hp {
        Hp { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Hp) -> Hp {
        Hp { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Hp) -> Hp {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Hp { re: shr_round(re, PREC), im: shr_round(im, PREC) }
    }

    pub fn mul_q(&self, c: &Q) -> Hp {
        let f = |x: &BigInt| {
            let n = x * c.numer();
            let d = c.denom();
            let q = &n / d;
            if ((&n % d).abs() << 1) >= *d {
                if n.is_negative() { q - 1 } else { q + 1 }
            } else {
                q
            }
        };
        Hp { re: f(&self.re), im: f(&self.im) }
    }

    /// `self / o`; `None` when `o` is zero.
    pub fn div(&self, o: &Hp) -> Option<Hp> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nre = (&self.re * &o.re + &self.im * &o.im) << PREC;
        let nim = (&self.im * &o.re - &self.re * &o.im) << PREC;
        Some(Hp { re: nre / &den, im: nim / &den })
    }

    /// `|self|` rounded to `f64`.
    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `|self|^2` as an exact fixed-point integer scaled by `2^(2 PREC)`.
    fn norm_sqr_raw(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Exact characteristic polynomial `det(lambda I - A)` of a rational matrix
/// (Faddeev-LeVerrier), coefficients in increasing degree.
pub fn exact_char_poly(a: &[Vec<Q>]) -> QPoly {
    let n = a.len();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !m[l][i].is_zero() {
                    tr += &a[i][l] * &m[l][i];
                }
            }
        }
        c[n - k] = -tr / Q::from_integer(BigInt::from(k));
    }
    QPoly::new(c)
}

fn horner(coeffs: &[Hp], z: &Hp) -> (Hp, Hp) {
    let mut p = Hp::zero();
    let mut dp = Hp::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Simultaneous Aberth-Ehrlich refinement of all roots of a square-free
/// polynomial from distinct starting points.
pub fn aberth(f: &QPoly, start: &[Complex64], max_iter: usize) -> Result<Vec<Hp>> {
    let deg = f.degree().unwrap_or(0);
    if start.len() != deg {
        return Err(QspecError::Internal(format!("{} starting points for degree {}", start.len(), deg)));
    }
    let lead = f.lead();
    let coeffs: Vec<Hp> = f.0.iter().map(|c| Hp::from_q(&(c / &lead), &Q::zero())).collect();
    let mut z: Vec<Hp> = start.iter().map(|&s| Hp::from_c64(s)).collect();
    // Converged once every correction is below 2^-(PREC-64) relative.
    let tol_bits = PREC - 64;
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..deg {
            let (p, dp) = horner(&coeffs, &z[i]);
            if p.is_zero() {
                continue;
            }
            let Some(newton) = p.div(&dp) else {
                z[i] = z[i].add(&Hp::from_c64(Complex64::new(1e-8, 1e-8)));
                done = false;
                continue;
            };
            let mut s = Hp::zero();
            for j in 0..deg {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    let one = Hp { re: BigInt::one() << PREC, im: BigInt::zero() };
                    if let Some(inv) = one.div(&d) {
                        s = s.add(&inv);
                    }
                }
            }
            let one = Hp { re: BigInt::one() << PREC, im: BigInt::zero() };
            let denom = one.sub(&newton.mul(&s));
            let w = newton.div(&denom).unwrap_or(newton);
            let scale = z[i].norm_sqr_raw().max(BigInt::one() << (2 * PREC));
            // |w|^2 <= 2^(-2 tol_bits) max(|z|^2, 1), all scaled by 2^(2 PREC)
            if (w.norm_sqr_raw() << (2 * tol_bits)) > scale {
                done = false;
            }
            z[i] = z[i].sub(&w);
        }
        if done {
            return Ok(z);
        }
    }
    Err(QspecError::Internal("Aberth iteration did not converge".into()))
}

const MOD_P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), MOD_P - 2);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + MOD_P - mulmod(f, c)) % MOD_P;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// True when `gcd(f, f')` is constant modulo a prime that keeps the
/// degree, which certifies that `f` is square-free over the rationals.
/// `false` is inconclusive.
pub fn certify_squarefree(f: &QPoly) -> bool {
    let Some(deg) = f.degree() else {
        return false;
    };
    let lcm = f.0.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let p = BigInt::from(MOD_P);
    let reduce = |c: &Q| -> u64 {
        let n = (c.numer() * (&lcm / c.denom())) % &p;
        let n = if n.is_negative() { n + &p } else { n };
        n.iter_u64_digits().next().unwrap_or(0)
    };
    let fm: Vec<u64> = f.0.iter().map(reduce).collect();
    if fm[deg] == 0 {
        return false;
    }
    let dm: Vec<u64> = (1..=deg).map(|i| mulmod(fm[i], i as u64 % MOD_P)).collect();
    gcd_mod(fm, dm).len() == 1
}

/// Roots of `chi` with multiplicity, refined from the approximations
/// `approx` (one per root, in any order).
pub fn refine_roots(chi: &QPoly, approx: &[Complex64]) -> Result<Vec<Hp>> {
    let deg = chi.degree().unwrap_or(0);
    if approx.len() != deg {
        return Err(QspecError::Internal(format!("{} approximations for degree {}", approx.len(), deg)));
    }
    let mut out = Vec::with_capacity(deg);
    let mut used = vec![false; deg];
    let parts = if certify_squarefree(chi) { vec![(chi.monic(), 1)] } else { chi.squarefree_decomposition() };
    for (factor, mult) in parts {
        let d = factor.degree().unwrap_or(0);
        let fc: Vec<Complex64> = factor.0.iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect();
        // Rank the unused approximations by relative residual on this factor.
        let mut ranked: Vec<(f64, usize)> = (0..deg)
            .filter(|&i| !used[i])
            .map(|i| {
                let z = approx[i];
                let mut val = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for c in fc.iter().rev() {
                    val = val * z + c;
                    mag = mag * z.norm() + c.norm();
                }
                (val.norm() / mag.max(f64::MIN_POSITIVE), i)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut start: Vec<Complex64> = Vec::with_capacity(d);
        for &(_, i) in &ranked {
            if start.len() == d {
                break;
            }
            let z = approx[i];
            let clash = start.iter().any(|s| (s - z).norm() <= 1e-9 * z.norm().max(1e-300));
            if !clash {
                start.push(z);
                used[i] = true;
            }
        }
        // Fill with perturbed copies when clustered roots collapsed.
        let mut k = 0;
        while start.len() < d {
            let base = start.get(k % start.len().max(1)).copied().unwrap_or(Complex64::new(1.0, 0.0));
            let ang = 2.399963 * (start.len() as f64 + 1.0);
            start.push(base * (Complex64::new(1.0, 0.0) + 1e-4 * Complex64::from_polar(1.0, ang)) + 1e-12);
            k += 1;
        }
        // The remaining `mult - 1` copies of each root consume approximations too.
        for _ in 0..d * (mult - 1) {
            if let Some(&(_, i)) = ranked.iter().find(|&&(_, i)| !used[i]) {
                used[i] = true;
            }
        }
        let roots = aberth(&factor, &start, 500)?;
        for r in roots {
            for _ in 0..mult {
                out.push(r.clone());
            }
        }
    }
    Ok(out)
}
