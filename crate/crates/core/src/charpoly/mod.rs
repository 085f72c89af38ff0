//! Characteristic polynomial of `K`, its restriction to a ray
//! `q_i = nu_i q`, Newton diagrams, and Hensel lifting over power series.

pub mod hensel;
mod newton;
pub mod qpoly;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::dubrovin::KMatrix;
use crate::error::{QspecError, Result};
use crate::rings::{rational_to_string, LaurentPoly, Monomial, TpPoly, Vars, Q};
use crate::surfaces::SurfaceModel;

pub use newton::{lower_hull, verify_blowup_polygon, BlowupPolygonReport, NewtonDiagram};

/// `det(lambda I - K)` with coefficients indexed by the power of `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    pub surface: SurfaceModel,
    pub vars: Vars,
    pub order: u32,
    /// Coefficients are exact for terms of minimal-model degree up to `cap`.
    pub cap: i64,
    pub coeffs: Vec<LaurentPoly>,
}

/// How `t_p` is treated when restricting to a ray.
#[derive(Clone, Debug, PartialEq)]
pub enum TpMode {
    /// Keep `t_p` symbolic: a term survives iff its `t_p` polynomial is nonzero.
    Generic,
    /// Substitute an exact rational value first.
    Value(Q),
}

type LambdaPoly = Vec<LaurentPoly>;

/// Ray degree up to which every Newton pair is decided; `i64::MAX` when
/// the cap covers the whole (finite) support and the polynomial is exact.
fn complete_degree(s: &SurfaceModel, cap: i64) -> i64 {
    match s.support_degree() {
        Some(d) if d <= cap => i64::MAX,
        _ => cap - s.r as i64,
    }
}

fn minimal_degree(m: usize, mono: &Monomial) -> i64 {
    mono.0[..m].iter().map(|&e| e as i64).sum()
}

/// `det(lambda I - K)` by Laplace expansion along rows with minors memoized
/// by their column set. Terms above the degree cap are dropped as they
/// appear, since the entries are only exact up to that degree.
pub fn char_poly(k: &KMatrix) -> CharPoly {
    let m = k.surface.m();
    let coeffs = det_lambda(&k.entries, &k.vars, k.order, m, k.cap);
    CharPoly { surface: k.surface.clone(), vars: k.vars.clone(), order: k.order, cap: k.cap, coeffs }
}

/// Coefficients of `det(lambda I - M)`, keeping terms whose first
/// `graded` exponents sum to at most `cap`.
fn det_lambda(entries: &[Vec<LaurentPoly>], vars: &Vars, order: u32, graded: usize, cap: i64) -> Vec<LaurentPoly> {
    let n = entries.len();
    let zero = LaurentPoly::zero(vars.clone(), order);
    let one = LaurentPoly::one(vars.clone(), order);
    let trunc = |p: LaurentPoly| p.filter(|mono| minimal_degree(graded, mono) <= cap);
    let entry = |i: usize, j: usize| -> LambdaPoly {
        let mut v = vec![-&entries[i][j]];
        if i == j {
            v.push(one.clone());
        }
        v
    };
    let mul = |a: &LambdaPoly, b: &LambdaPoly| -> LambdaPoly {
        let mut out = vec![zero.clone(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &trunc(x * y);
                }
            }
        }
        out
    };
    let add = |acc: &mut LambdaPoly, b: &LambdaPoly, sign: bool| {
        if acc.len() < b.len() {
            acc.resize(b.len(), zero.clone());
        }
        for (i, y) in b.iter().enumerate() {
            acc[i] = if sign { &acc[i] + y } else { &acc[i] - y };
        }
    };
    let mut memo: HashMap<u32, LambdaPoly> = HashMap::new();
    memo.insert(0, vec![one.clone()]);
    // Minors over the last `size` rows, by increasing size.
    for size in 1..=n {
        let row = n - size;
        let mut next: HashMap<u32, LambdaPoly> = HashMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc: LambdaPoly = vec![zero.clone()];
            let mut pos = 0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let e = entry(row, col);
                if e.iter().any(|p| !p.is_zero()) {
                    let term = mul(&e, &memo[&(mask & !(1 << col))]);
                    add(&mut acc, &term, pos % 2 == 0);
                }
                pos += 1;
            }
            next.insert(mask, acc);
        }
        memo = next;
    }
    let mut coeffs = memo.remove(&((1u32 << n) - 1)).unwrap_or_default();
    coeffs.resize(n + 1, zero);
    coeffs
}

/// Restriction of `chi` to a ray computed by substituting into `K` first.
///
/// Entries become polynomials in two variables recording minimal-model and
/// exceptional degree separately, so the degree cap still applies. For
/// generic `t_p` the result equals `char_poly(k).substitute_ray(nu, mode)`;
/// a specialized `t_p` is evaluated before multiplying and so carries no
/// `t_p`-order truncation error.
pub fn ray_char_poly(k: &KMatrix, nu: &[Q], mode: &TpMode) -> Result<RayPoly> {
    if nu.len() != k.vars.len() {
        return Err(QspecError::Domain(format!("ray needs {} entries, got {}", k.vars.len(), nu.len())));
    }
    if let Some(i) = nu.iter().position(|x| x.is_zero()) {
        return Err(QspecError::Domain(format!("ray component {} is zero", i + 1)));
    }
    let m = k.surface.m();
    let vars: Vars = std::sync::Arc::new(vec!["q_min".to_string(), "q_exc".to_string()]);
    let entries: Vec<Vec<LaurentPoly>> = k
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    LaurentPoly::from_terms(
                        vars.clone(),
                        k.order,
                        p.terms().map(|(mono, c)| {
                            let mut scale = Q::one();
                            for (v, &e) in nu.iter().zip(&mono.0) {
                                if e != 0 {
                                    scale *= num_traits::pow::Pow::pow(v, e);
                                }
                            }
                            let c = match mode {
                                TpMode::Generic => c.scale(&scale),
                                TpMode::Value(t) => TpPoly::constant(c.eval_exact(t) * &scale, k.order),
                            };
                            let dmin: i32 = mono.0[..m].iter().sum();
                            let dexc: i32 = mono.0[m..].iter().sum();
                            (Monomial(vec![dmin, dexc]), c)
                        }),
                    )
                })
                .collect()
        })
        .collect();
    let coeffs = det_lambda(&entries, &vars, k.order, 1, k.cap);
    let mut terms: BTreeMap<(i64, i64), TpPoly> = BTreeMap::new();
    for (x, coeff) in coeffs.iter().enumerate() {
        for (mono, c) in coeff.terms() {
            let slot = terms.entry((x as i64, mono.degree())).or_insert_with(|| TpPoly::zero(k.order));
            slot.add_assign_ref(c);
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(RayPoly { nu: nu.to_vec(), mode: mode.clone(), terms, complete_to: complete_degree(&k.surface, k.cap) })
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Rational coefficients at an exact point (all `q_i` nonzero).
    pub fn evaluate_exact(&self, q: &[Q], tp: &Q) -> Result<Vec<Q>> {
        self.coeffs.iter().map(|c| c.evaluate_exact(q, tp)).collect()
    }

    /// Largest `q`-degree along any ray up to which every Newton pair is
    /// known: exceptional exponents are at least `-r`, so a term of ray
    /// degree `y` has minimal-model degree at most `y + r`.
    pub fn complete_ray_degree(&self) -> i64 {
        complete_degree(&self.surface, self.cap)
    }

    /// Collapses `q_i = nu_i q`.
    pub fn substitute_ray(&self, nu: &[Q], mode: &TpMode) -> Result<RayPoly> {
        if nu.len() != self.vars.len() {
            return Err(QspecError::Domain(format!("ray needs {} entries, got {}", self.vars.len(), nu.len())));
        }
        if let Some(i) = nu.iter().position(|x| x.is_zero()) {
            return Err(QspecError::Domain(format!("ray component {} is zero", i + 1)));
        }
        let mut terms: BTreeMap<(i64, i64), TpPoly> = BTreeMap::new();
        for (x, coeff) in self.coeffs.iter().enumerate() {
            for (mono, c) in coeff.terms() {
                let y: i64 = mono.degree();
                let mut scale = Q::one();
                for (v, &e) in nu.iter().zip(&mono.0) {
                    if e != 0 {
                        scale *= num_traits::pow::Pow::pow(v, e);
                    }
                }
                let c = match mode {
                    TpMode::Generic => c.scale(&scale),
                    TpMode::Value(t) => TpPoly::constant(c.eval_exact(t) * &scale, self.order),
                };
                let slot = terms.entry((x as i64, y)).or_insert_with(|| TpPoly::zero(self.order));
                slot.add_assign_ref(&c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(RayPoly { nu: nu.to_vec(), mode: mode.clone(), terms, complete_to: self.complete_ray_degree() })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": 1,
            "surface": self.surface.descriptor(),
            "blowups": self.surface.r,
            "D": self.cap,
            "T": self.order,
            "vars": *self.vars,
            "coeffs": self.coeffs.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Characteristic polynomial along a ray: terms `lambda^x q^y`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayPoly {
    pub nu: Vec<Q>,
    pub mode: TpMode,
    pub terms: BTreeMap<(i64, i64), TpPoly>,
    /// Pairs with `y` above this bound may be missing or spurious.
    pub complete_to: i64,
}

impl RayPoly {
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    /// Newton diagram of the support; pairs beyond the completeness bound
    /// are listed separately.
    pub fn newton_polygon(&self) -> Result<NewtonDiagram> {
        if self.terms.is_empty() {
            return Err(QspecError::Domain("empty polynomial has no Newton polygon".into()));
        }
        let (known, unknown): (Vec<_>, Vec<_>) = self.pairs().into_iter().partition(|&(_, y)| y <= self.complete_to);
        let hull = lower_hull(&known);
        let max_hull_y = hull.iter().map(|p| p.1).max().unwrap_or(i64::MIN);
        // Undecided pairs sit above every hull vertex; they cannot cut
        // below it as long as the hull spans from lambda^0 on.
        let exact = self.complete_to == i64::MAX;
        let hull_certified = exact || (max_hull_y <= self.complete_to && hull.first().is_some_and(|p| p.0 == 0));
        Ok(NewtonDiagram {
            pairs: known,
            hull,
            unknown_above: if unknown.is_empty() { None } else { Some(self.complete_to) },
            hull_certified,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "nu": self.nu.iter().map(rational_to_string).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(|((x, y), c)| json!({
                "x": x, "y": y,
                "tp": c.terms().map(|(p, v)| json!({"pow": p, "coeff": rational_to_string(v)})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubrovin::Potential;
    use crate::gw::GwTable;
    use crate::rings::{q, qi};

    fn plane_chi(r: usize, cap: i64) -> CharPoly {
        let mut t = GwTable::new(SurfaceModel::p2(r), cap);
        let p = Potential::new(&mut t, cap, 12).unwrap();
        char_poly(&p.k_matrix())
    }

    #[test]
    fn plane_minimal_at_zero_tp() {
        let chi = plane_chi(0, 3);
        let at0: Vec<Q> = chi.coeffs.iter().map(|c| {
            // only the q_h^1 part is exact at this cap for the constant term
            c.filter(|m| m.degree() <= 1).evaluate_exact(&[qi(1)], &qi(0)).unwrap()
        }).collect();
        assert_eq!(at0, vec![qi(-27), qi(0), qi(0), qi(1)]);
    }

    #[test]
    fn trace_identity() {
        let mut t = GwTable::new(SurfaceModel::p2(1), 3);
        let p = Potential::new(&mut t, 3, 8).unwrap();
        let k = p.k_matrix();
        let chi = char_poly(&k);
        let n = chi.degree();
        let tr = k.trace().filter(|m| m.0[0] <= 3);
        assert_eq!(chi.coeffs[n - 1], -&tr);
        assert!(chi.coeffs[n].evaluate_exact(&[qi(1), qi(1)], &qi(0)).unwrap().is_one());
    }

    #[test]
    fn ray_scaling() {
        let v: Vars = std::sync::Arc::new(vec!["q_h".into(), "q_e1".into()]);
        let s = SurfaceModel::p2(1);
        let mono = LaurentPoly::monomial(v.clone(), Monomial(vec![1, -1]), TpPoly::constant(qi(1), 4));
        let chi = CharPoly { surface: s, vars: v.clone(), order: 4, cap: 4, coeffs: vec![mono, LaurentPoly::one(v, 4)] };
        let ray = chi.substitute_ray(&[qi(2), qi(4)], &TpMode::Generic).unwrap();
        assert_eq!(ray.terms[&(0, 0)].coeff(0), q(1, 2));
        assert!(chi.substitute_ray(&[qi(0), qi(1)], &TpMode::Generic).is_err());
    }

    #[test]
    fn ray_first_matches_full_determinant() {
        for (s, cap) in [(SurfaceModel::p2(1), 3), (SurfaceModel::p2(2), 3), (SurfaceModel::ruled(2, 1, 1).unwrap(), 3)] {
            let mut t = GwTable::new(s.clone(), cap);
            let k = Potential::new(&mut t, cap, 6).unwrap().k_matrix();
            let chi = char_poly(&k);
            let nu: Vec<Q> = (0..s.ndiv()).map(|i| q(i as i64 + 2, 3)).collect();
            for mode in [TpMode::Generic, TpMode::Value(qi(0))] {
                let a = chi.substitute_ray(&nu, &mode).unwrap();
                let b = ray_char_poly(&k, &nu, &mode).unwrap();
                assert_eq!(a.terms, b.terms, "{}", s.key());
            }
        }
    }
}
