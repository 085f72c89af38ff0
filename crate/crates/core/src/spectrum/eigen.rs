//! Dense complex eigenvalues: diagonal balancing followed by a complex Schur
//! decomposition.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::{QspecError, Result};

pub type CMatrix = Vec<Vec<Complex64>>;

/// Parlett-Reinsch balancing with power-of-two scalings. Returns the
/// balanced copy; the spectrum is unchanged and rounding is exact.
pub fn balance(m: &CMatrix) -> CMatrix {
    let n = m.len();
    let mut a = m.clone();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].norm();
                    r += a[i][j].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc > r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (cc + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[i][j] /= f;
                    a[j][i] *= f;
                }
            }
        }
    }
    a
}

/// All eigenvalues of `m`, balanced first. Non-finite input is a domain
/// error.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(QspecError::Domain("matrix is not square".into()));
    }
    if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QspecError::Domain("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let b = balance(m);
    let dm = DMatrix::from_fn(n, n, |i, j| b[i][j]);
    let schur = Schur::try_new(dm, f64::EPSILON, 10_000)
        .ok_or_else(|| QspecError::Internal("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn diagonal() {
        let m = vec![vec![c(0.0), c(0.0), c(0.0)], vec![c(0.0), c(2.0), c(0.0)], vec![c(0.0), c(0.0), c(1e4)]];
        let ev = sorted_re(eigenvalues(&m).unwrap());
        assert_eq!(ev, vec![0.0, 2.0, 1e4]);
    }

    #[test]
    fn companion_cube_roots() {
        // lambda^3 - 27e-3
        let m = vec![vec![c(0.0), c(0.0), c(27e-3)], vec![c(1.0), c(0.0), c(0.0)], vec![c(0.0), c(1.0), c(0.0)]];
        for z in eigenvalues(&m).unwrap() {
            assert!((z.norm() - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn badly_scaled() {
        let q = 1e-6;
        let m = vec![vec![c(0.0), c(3.0 * q)], vec![c(1.0), c(-1.0 / q)]];
        let ev = eigenvalues(&m).unwrap();
        let tr: Complex64 = ev.iter().sum();
        assert!((tr - trace(&m)).norm() <= 1e-9 * (1.0 + trace(&m).norm()));
    }

    #[test]
    fn non_finite() {
        let m = vec![vec![Complex64::new(f64::NAN, 0.0)]];
        assert!(matches!(eigenvalues(&m), Err(QspecError::Domain(_))));
    }
}
