//! Optimal relabelling of two spectra on the log scale.

use num_complex::Complex64;

/// Distance `|ln|a/b|| + |arg(a/b)|`. Zero moduli are floored so that
/// `0 ~ 0` costs nothing and `0` against a nonzero value costs a lot.
pub fn log_distance(a: Complex64, b: Complex64) -> f64 {
    const FLOOR: f64 = 1e-300;
    let (na, nb) = (a.norm(), b.norm());
    if na < FLOOR && nb < FLOOR {
        return 0.0;
    }
    let la = na.max(FLOOR).ln();
    let lb = nb.max(FLOOR).ln();
    let ang = if na < FLOOR || nb < FLOOR { 0.0 } else { (a / b).arg().abs() };
    (la - lb).abs() + ang
}

/// Permutation `pi` minimizing `sum_i log_distance(a[i], b[pi[i]])`.
/// Ties resolve to the lexicographically smallest permutation. Lists
/// longer than 20 are rejected by returning `None`.
pub fn match_spectra(a: &[Complex64], b: &[Complex64]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n || n > 20 {
        return None;
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|&x| b.iter().map(|&y| log_distance(x, y)).collect()).collect();
    // tail[mask]: best cost of assigning a[k..] to the columns outside
    // `mask`, where k = popcount(mask).
    let full = (1usize << n) - 1;
    let mut tail = vec![f64::INFINITY; 1 << n];
    tail[full] = 0.0;
    for mask in (0..full).rev() {
        let k = mask.count_ones() as usize;
        let mut best = f64::INFINITY;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                best = best.min(cost[k][j] + tail[mask | (1 << j)]);
            }
        }
        tail[mask] = best;
    }
    let mut perm = Vec::with_capacity(n);
    let mut mask = 0usize;
    for (k, row) in cost.iter().enumerate() {
        let target = tail[mask];
        let slack = 1e-12 * (1.0 + target.abs());
        let j = (0..n)
            .filter(|&j| mask & (1 << j) == 0)
            .find(|&j| row[j] + tail[mask | (1 << j)] <= target + slack)
            .expect("assignment exists");
        debug_assert_eq!(perm.len(), k);
        perm.push(j);
        mask |= 1 << j;
    }
    Some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_is_identity() {
        let a = vec![c(1.0, 0.0), c(-2.0, 1.0), c(0.5, -0.5)];
        assert_eq!(match_spectra(&a, &a).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn equal_entries_tie_break_by_index() {
        let a = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(match_spectra(&a, &a).unwrap(), vec![0, 1]);
    }

    #[test]
    fn nearest_neighbour() {
        let a = vec![c(1.0, 0.0), c(10.0, 0.0), c(-3.0, 0.0)];
        let b = vec![c(-3.01, 0.0), c(1.005, 0.0), c(9.95, 0.0)];
        assert_eq!(match_spectra(&a, &b).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn huge_entry_goes_to_exceptional_slot() {
        let q = 1e-6;
        let a = vec![c(0.3, 0.0), c(-1.0 / q + 0.1, 0.0), c(-0.15, 0.26)];
        let b = vec![c(0.3, 0.0), c(-0.15, 0.26), c(-1.0 / q, 0.0)];
        assert_eq!(match_spectra(&a, &b).unwrap(), vec![0, 2, 1]);
    }
}
