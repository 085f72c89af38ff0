//! Growth bounds for invariants of plane blow-ups and the majorant series
//! behind the convergence domain of the potential.

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::gw::{EngineOptions, GwTable};
use crate::rings::{factorial, rational_to_f64, rational_to_string, Q};
use crate::surfaces::{CurveClass, SurfaceKind, SurfaceModel};
use crate::{QspecError, Result};

/// Relative slack for comparisons done in floating point.
pub const FLOAT_SLACK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub item: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub range: String,
    /// Number of individual inequalities checked.
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl BoundReport {
    fn new(name: &str, range: String, checked: usize, violations: Vec<Violation>) -> Self {
        let pass = violations.is_empty();
        BoundReport { name: name.into(), range, checked, violations, pass }
    }

    pub fn to_json(&self) -> Value {
        json!({ "format": 1, "bound": self.name, "range": self.range, "checked": self.checked,
                "violations": self.violations, "pass": self.pass })
    }
}

fn require_plane(t: &GwTable) -> Result<()> {
    if t.surface().kind != SurfaceKind::ProjectivePlane {
        return Err(QspecError::Unsupported("bounds are stated for plane blow-ups".into()));
    }
    Ok(())
}

fn classes(t: &GwTable, d_max: i64) -> Vec<CurveClass> {
    t.enumerate_classes(d_max).into_iter().map(|o| o.class).filter(|c| c.beta[0] >= 1).collect()
}

fn range(t: &GwTable, d_max: i64) -> String {
    format!("{}, d <= {d_max}", t.surface().key())
}

/// `N_{d,alpha} <= N_d / prod a_i!` for every class with `d <= d_max`.
pub fn check_factorial_bound(t: &mut GwTable, d_max: i64) -> Result<BoundReport> {
    require_plane(t)?;
    let mut violations = Vec::new();
    let cs = classes(t, d_max);
    for c in &cs {
        let n = t.invariant(c)?;
        let nd = t.invariant(&CurveClass::new(c.beta.clone(), vec![]))?;
        let denom: num_bigint::BigInt = c.alpha.iter().map(|&a| factorial(a as u32)).product();
        let rhs = nd / Q::from_integer(denom);
        if n > rhs {
            violations.push(Violation { item: c.to_string(), lhs: rational_to_string(&n), rhs: rational_to_string(&rhs) });
        }
    }
    Ok(BoundReport::new("factorial", range(t, d_max), cs.len(), violations))
}

/// `N_{d,alpha} <= N_{d,alpha-[i]} / a_i` for every slot with `a_i > 0`.
pub fn check_monotone_bound(t: &mut GwTable, d_max: i64) -> Result<BoundReport> {
    require_plane(t)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for c in classes(t, d_max) {
        let n = t.invariant(&c)?;
        for i in 0..c.alpha.len() {
            let a = c.alpha[i];
            if a <= 0 {
                continue;
            }
            let mut lower = c.clone();
            lower.alpha[i] -= 1;
            let rhs = t.invariant(&lower)? / Q::from_integer(a.into());
            checked += 1;
            if n > rhs {
                violations.push(Violation { item: format!("{c} slot {}", i + 1), lhs: rational_to_string(&n), rhs: rational_to_string(&rhs) });
            }
        }
    }
    Ok(BoundReport::new("monotone", range(t, d_max), checked, violations))
}

fn boxes(alpha: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..=a.max(0)).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// `|sum_k b_k c_k| <= d_1 d_2` for every splitting
/// `(d, alpha - [i]) = (d_1, b) + (d_2, c)` with `d_j > 0` and both
/// invariants nonzero, over classes with `N_{d,alpha} != 0` and `a_i > 0`.
pub fn check_cs_bound(t: &mut GwTable, d_max: i64) -> Result<BoundReport> {
    require_plane(t)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for c in classes(t, d_max) {
        if t.invariant(&c)?.is_zero() {
            continue;
        }
        let d = c.beta[0];
        for i in 0..c.alpha.len() {
            if c.alpha[i] <= 0 || (i > 0 && c.alpha[i] == c.alpha[i - 1]) {
                continue;
            }
            let mut lowered = c.alpha.clone();
            lowered[i] -= 1;
            for d1 in 1..d {
                let d2 = d - d1;
                for b in boxes(&lowered) {
                    let cc: Vec<i64> = lowered.iter().zip(&b).map(|(x, y)| x - y).collect();
                    let p1 = CurveClass::new(vec![d1], b.clone());
                    let p2 = CurveClass::new(vec![d2], cc.clone());
                    if t.invariant(&p1)?.is_zero() || t.invariant(&p2)?.is_zero() {
                        continue;
                    }
                    checked += 1;
                    let lhs: i64 = b.iter().zip(&cc).map(|(x, y)| x * y).sum();
                    if lhs.abs() > d1 * d2 {
                        violations.push(Violation {
                            item: format!("{c}, slot {}: {p1} + {p2}", i + 1),
                            lhs: lhs.abs().to_string(),
                            rhs: (d1 * d2).to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(BoundReport::new("cauchy-schwarz", range(t, d_max), checked, violations))
}

/// Every class of negative arithmetic genus has vanishing invariant when
/// computed by the recursion alone (no genus short-circuit).
pub fn check_pa_vanishing(s: &SurfaceModel, d_max: i64) -> Result<BoundReport> {
    let mut t = GwTable::with_options(s.clone(), d_max, EngineOptions { pa_shortcut: false });
    require_plane(&t)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for c in classes(&t, d_max) {
        let pa = s.arithmetic_genus(&c)?;
        if pa >= Q::zero() {
            continue;
        }
        checked += 1;
        let n = t.invariant(&c)?;
        if !n.is_zero() {
            violations.push(Violation { item: format!("{c} (p_a = {})", rational_to_string(&pa)), lhs: rational_to_string(&n), rhs: "0".into() });
        }
    }
    Ok(BoundReport::new("p_a vanishing", format!("{}, d <= {d_max}", s.key()), checked, violations))
}

/// Right side of the growth bound `(45/16) (4/5)^d d^{-7/2}`.
pub fn asymptotic_rhs(d: i64) -> f64 {
    45.0 / 16.0 * 0.8f64.powi(d as i32) * (d as f64).powf(-3.5)
}

/// `N_d / (3d-1)!` exactly.
pub fn normalized_plane_number(t: &mut GwTable, d: i64) -> Result<Q> {
    let n = t.invariant(&CurveClass::new(vec![d], vec![0; t.surface().r]))?;
    Ok(n / Q::from_integer(factorial((3 * d - 1) as u32)))
}

/// `N_d / (3d-1)! <= (45/16)(4/5)^d d^{-7/2}` for `1 <= d <= d_max`, compared
/// in floating point with relative slack.
pub fn check_asymptotic(t: &mut GwTable, d_max: i64) -> Result<BoundReport> {
    require_plane(t)?;
    let mut violations = Vec::new();
    for d in 1..=d_max {
        let lhs = rational_to_f64(&normalized_plane_number(t, d)?);
        let rhs = asymptotic_rhs(d);
        if lhs > rhs * (1.0 + FLOAT_SLACK) {
            violations.push(Violation { item: format!("d = {d}"), lhs: format!("{lhs:.17e}"), rhs: format!("{rhs:.17e}") });
        }
    }
    Ok(BoundReport::new("asymptotic", format!("{}, 1 <= d <= {d_max}", t.surface().key()), d_max.max(0) as usize, violations))
}

/// Partial sums of the majorant series
/// `sum_d |q_1|^d N_d/(3d-1)! (|t_p| + sum |q_{i+1}|)^{3d-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Majorant {
    pub partial_sums: Vec<f64>,
    /// `(4/5) |q_1| (|t_p| + sum |q_{i+1}|)^3`.
    pub domain_value: f64,
    pub inside: bool,
    /// Ratios of successive terms divided by `|q_1| s^3`, i.e.
    /// `(N_{d+1}/(3d+2)!) / (N_d/(3d-1)!)`; inside the domain these stay
    /// below `4/5`, so the terms shrink at least by the domain value.
    pub normalized_ratios: Vec<f64>,
    /// Geometric bound on the omitted tail, when inside the domain.
    pub tail_bound: Option<f64>,
}

pub fn majorant_partial_sums(q1: f64, q_exc: &[f64], tp: f64, d_max: i64) -> Result<Majorant> {
    if d_max < 2 {
        return Err(QspecError::Domain("majorant needs d_max >= 2".into()));
    }
    let s = tp.abs() + q_exc.iter().map(|x| x.abs()).sum::<f64>();
    let x = 0.8 * q1.abs() * s.powi(3);
    let mut t = GwTable::new(SurfaceModel::p2(0), d_max);
    let mut sums = Vec::new();
    let mut acc = 0.0;
    let mut norm = Vec::new();
    for d in 1..=d_max {
        let nd = rational_to_f64(&normalized_plane_number(&mut t, d)?);
        norm.push(nd);
        acc += q1.abs().powi(d as i32) * nd * s.powi((3 * d - 1) as i32);
        sums.push(acc);
    }
    let ratios = norm.windows(2).map(|w| w[1] / w[0]).collect();
    let inside = x < 1.0;
    let tail_bound = (inside && s > 0.0).then(|| 45.0 / 16.0 / s * x.powi(d_max as i32 + 1) / (1.0 - x));
    Ok(Majorant { partial_sums: sums, domain_value: x, inside, normalized_ratios: ratios, tail_bound })
}

/// All appendix checks over the default ranges: class bounds for `r <= r_max`
/// and `d <= d_class`, the asymptotic bound for `d <= d_asym`.
pub fn appendix_suite(r_max: usize, d_class: i64, d_asym: i64) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for r in 0..=r_max {
        let s = SurfaceModel::p2(r);
        let mut t = GwTable::new(s.clone(), d_class);
        out.push(check_factorial_bound(&mut t, d_class)?);
        out.push(check_monotone_bound(&mut t, d_class)?);
        out.push(check_cs_bound(&mut t, d_class)?);
        out.push(check_pa_vanishing(&s, d_class)?);
    }
    let mut t = GwTable::new(SurfaceModel::p2(0), d_asym);
    out.push(check_asymptotic(&mut t, d_asym)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_examples() {
        assert!((asymptotic_rhs(1) - 2.25).abs() < 1e-15);
        let mut t = GwTable::new(SurfaceModel::p2(0), 8);
        assert_eq!(normalized_plane_number(&mut t, 1).unwrap(), crate::rings::q(1, 2));
        assert!(check_asymptotic(&mut t, 8).unwrap().pass);
    }

    #[test]
    fn class_bounds_small() {
        let mut t = GwTable::new(SurfaceModel::p2(2), 4);
        for rep in [check_factorial_bound(&mut t, 4), check_monotone_bound(&mut t, 4), check_cs_bound(&mut t, 4)] {
            let rep = rep.unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(rep.checked > 0);
        }
        assert!(check_pa_vanishing(&SurfaceModel::p2(2), 4).unwrap().pass);
    }

    #[test]
    fn majorant_domain() {
        let m = majorant_partial_sums(0.1, &[0.1, 0.1], 0.5, 6).unwrap();
        assert!((m.domain_value - 0.02744).abs() < 1e-15);
        assert!(m.inside);
        assert!(m.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        assert!(m.normalized_ratios.iter().all(|&r| r <= 0.8));
        let out = majorant_partial_sums(10.0, &[0.0], 1.0, 4).unwrap();
        assert_eq!(out.domain_value, 8.0);
        assert!(!out.inside && out.tail_bound.is_none());
    }

    #[test]
    fn non_plane_rejected() {
        let mut t = GwTable::new(SurfaceModel::p1xp1(0), 2);
        assert!(matches!(check_factorial_bound(&mut t, 2), Err(QspecError::Unsupported(_))));
    }
}
