//! Third derivatives of the genus-0 potential, the small quantum product,
//! the operator `K` of quantum multiplication by the Euler field at `t_0 = 0`,
//! and the grading operator `G`.
//!
//! Monomials: a class `beta - sum a_i E_i` contributes `q^beta q_E^alpha`,
//! with `beta` in minimal-model divisor coordinates. Derivatives in the
//! divisor directions bring down intersection numbers (`beta . T_k` or `a_e`).

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::gw::GwTable;
use crate::rings::{factorial, qi, LaurentPoly, Monomial, TpPoly, Vars, Q};
use crate::surfaces::{BasisIndex, SurfaceModel};

/// A contributing class with everything the derivative rules need.
#[derive(Clone, Debug)]
struct Contribution {
    value: Q,
    n: i64,
    monomial: Monomial,
    /// `T'_k` for every basis index `k`.
    tprime: Vec<i64>,
}

/// Truncated genus-0 potential data of a surface: the nonzero invariants up
/// to degree `cap` and `t_p` order `order`.
#[derive(Clone, Debug)]
pub struct Potential {
    surface: SurfaceModel,
    vars: Vars,
    cap: i64,
    order: u32,
    g: Vec<Vec<Q>>,
    ginv: Vec<Vec<Q>>,
    classes: Vec<Contribution>,
}

impl Potential {
    pub fn new(table: &mut GwTable, cap: i64, order: u32) -> Result<Self> {
        let surface = table.surface().clone();
        let (g, ginv) = surface.pairing();
        let dim = surface.dim();
        let m = surface.m();
        let mut classes = Vec::new();
        for (c, value) in table.support(cap)? {
            let n = surface.expected_dim(&c);
            let mut tprime = vec![0i64; dim];
            for (k, t) in surface.beta_intersections(&c.beta).into_iter().enumerate() {
                tprime[1 + k] = t;
            }
            for (e, &a) in c.alpha.iter().enumerate() {
                tprime[1 + m + e] = a;
            }
            tprime[dim - 1] = 1;
            let mut exps: Vec<i32> = c.beta.iter().map(|&b| b as i32).collect();
            exps.extend(c.alpha.iter().map(|&a| a as i32));
            classes.push(Contribution { value, n, monomial: Monomial(exps), tprime });
        }
        Ok(Potential { vars: surface.vars(), surface, cap, order, g, ginv, classes })
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(self.vars.clone(), self.order)
    }

    fn constant(&self, c: Q) -> LaurentPoly {
        LaurentPoly::constant_q(self.vars.clone(), c, self.order)
    }

    /// Number of classes with nonzero invariant entering the potential.
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// `F_ijk` including the classical part `F_0jk = g_jk`.
    pub fn third_derivative(&self, i: usize, j: usize, k: usize) -> LaurentPoly {
        let dim = self.surface.dim();
        let mut out = self.zero();
        let idx = [i, j, k];
        let zeros = idx.iter().filter(|&&x| x == 0).count();
        if zeros >= 1 {
            // T_0 is the unit: only the classical cubic term survives.
            let rest: Vec<usize> = {
                let mut v = idx.to_vec();
                let pos = v.iter().position(|&x| x == 0).unwrap();
                v.remove(pos);
                v
            };
            return self.constant(self.g[rest[0]][rest[1]].clone());
        }
        let eps = idx.iter().filter(|&&x| x == dim - 1).count() as i64;
        for c in &self.classes {
            let pow = c.n - eps;
            if pow < 0 || pow > self.order as i64 {
                continue;
            }
            let t = c.tprime[i] * c.tprime[j] * c.tprime[k];
            if t == 0 {
                continue;
            }
            let coeff = &c.value * qi(t) / Q::from_integer(factorial(pow as u32));
            out.add_term(c.monomial.clone(), &TpPoly::monomial(pow as u32, coeff, self.order));
        }
        out
    }

    /// Coordinates of `T_i * T_j` in the basis.
    pub fn quantum_product(&self, i: usize, j: usize) -> Vec<LaurentPoly> {
        let dim = self.surface.dim();
        let f: Vec<LaurentPoly> = (0..dim).map(|k| self.third_derivative(i, j, k)).collect();
        (0..dim)
            .map(|l| {
                let mut acc = self.zero();
                for (k, fk) in f.iter().enumerate() {
                    let gkl = &self.ginv[k][l];
                    if !gkl.is_zero() && !fk.is_zero() {
                        acc = &acc + &fk.scale(gkl);
                    }
                }
                acc
            })
            .collect()
    }

    /// Product of two elements given by coordinates, truncated at the cap.
    pub fn multiply(&self, a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let dim = self.surface.dim();
        let mut out = vec![self.zero(); dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let coeff = ai * bj;
                let prod = self.quantum_product(i, j);
                for (l, pl) in prod.iter().enumerate() {
                    if !pl.is_zero() {
                        out[l] = &out[l] + &(&coeff * pl);
                    }
                }
            }
        }
        out.into_iter().map(|p| self.truncate(&p)).collect()
    }

    /// Basis triples `(i, j, k)` with `(T_i*T_j)*T_k != T_i*(T_j*T_k)` in
    /// the terms that are complete at the cap.
    pub fn associativity_defects(&self) -> Vec<(usize, usize, usize)> {
        let dim = self.surface.dim();
        let prod: Vec<Vec<Vec<LaurentPoly>>> =
            (0..dim).map(|i| (0..dim).map(|j| self.quantum_product(i, j)).collect()).collect();
        // sum_l c[l] * prod[l][k] (or prod[k][l]; the product is commutative)
        let combine = |c: &[LaurentPoly], k: usize| -> Vec<LaurentPoly> {
            let mut out = vec![self.zero(); dim];
            for (l, cl) in c.iter().enumerate() {
                if cl.is_zero() {
                    continue;
                }
                for (n, p) in prod[l][k].iter().enumerate() {
                    if !p.is_zero() {
                        out[n] = &out[n] + &self.truncate(&(cl * p));
                    }
                }
            }
            out.into_iter().map(|p| self.truncate(&p)).collect()
        };
        let mut bad = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = combine(&prod[i][j], k);
                    let right = combine(&prod[j][k], i);
                    if left != right {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Drops terms whose minimal-model degree exceeds the cap.
    pub fn truncate(&self, p: &LaurentPoly) -> LaurentPoly {
        let m = self.surface.m();
        let cap = self.cap;
        p.filter(|mono| mono.0[..m].iter().map(|&e| e as i64).sum::<i64>() <= cap)
    }

    /// Euler field at `t_0 = 0`: `c_1 - 2 t_p T_p`, as coordinates.
    pub fn euler_field(&self) -> Vec<LaurentPoly> {
        let dim = self.surface.dim();
        let mut e = vec![self.zero(); dim];
        for (a, c) in self.surface.first_chern().into_iter().enumerate() {
            e[1 + a] = self.constant(qi(c));
        }
        e[dim - 1] = LaurentPoly::constant(self.vars.clone(), TpPoly::monomial(1, qi(-2), self.order));
        e
    }

    /// The matrix of `X -> E * X`, column `j` holding `E * T_j`, with the
    /// trivial row `p` and column `0` set to their closed forms.
    pub fn k_matrix(&self) -> KMatrix {
        let mut m = self.k_matrix_raw();
        let dim = self.surface.dim();
        let p = dim - 1;
        let c1 = self.surface.first_chern();
        let gc1 = self.surface.divisor_pairing();
        m.entries[0][0] = self.zero();
        for (a, c) in c1.iter().enumerate() {
            m.entries[1 + a][0] = self.constant(qi(*c));
            let dot: i64 = gc1[a].iter().zip(&c1).map(|(x, y)| x * y).sum();
            m.entries[p][1 + a] = self.constant(qi(dot));
        }
        m.entries[p][p] = self.zero();
        m.entries[p][0] = LaurentPoly::constant(self.vars.clone(), TpPoly::monomial(1, qi(2), self.order));
        m
    }

    /// Quantum multiplication by the Euler field with no entry overridden.
    pub fn k_matrix_raw(&self) -> KMatrix {
        let dim = self.surface.dim();
        let e = self.euler_field();
        let mut entries = vec![vec![self.zero(); dim]; dim];
        for j in 0..dim {
            for (a, ea) in e.iter().enumerate() {
                if ea.is_zero() {
                    continue;
                }
                let prod = self.quantum_product(a, j);
                for (l, pl) in prod.iter().enumerate() {
                    if !pl.is_zero() {
                        entries[l][j] = &entries[l][j] + &(ea * pl);
                    }
                }
            }
        }
        KMatrix { surface: self.surface.clone(), vars: self.vars.clone(), cap: self.cap, order: self.order, entries }
    }

    /// Closed form for the nontrivial entries (`i != p`, `j != 0`):
    /// `sum N (sum_k g^{ki} T'_k) T'_j (1 - n + 2 eps) q^class t_p^{n-eps}/(n-eps)!`
    /// with `eps = [i = 0] + [j = p]`.
    pub fn k_entry_closed_form(&self, i: usize, j: usize) -> LaurentPoly {
        let dim = self.surface.dim();
        let eps = (i == 0) as i64 + (j == dim - 1) as i64;
        let mut out = self.zero();
        for c in &self.classes {
            let pow = c.n - eps;
            if pow < 0 || pow > self.order as i64 {
                continue;
            }
            let mut left = Q::zero();
            for k in 1..dim {
                if !self.ginv[k][i].is_zero() {
                    left += &self.ginv[k][i] * qi(c.tprime[k]);
                }
            }
            let factor = qi(c.tprime[j] * (1 - c.n + 2 * eps));
            let coeff = &c.value * left * factor / Q::from_integer(factorial(pow as u32));
            out.add_term(c.monomial.clone(), &TpPoly::monomial(pow as u32, coeff, self.order));
        }
        out
    }
}

/// `(m+r+2)`-square matrix of Laurent polynomials, rows and columns in
/// basis order `0, divisors, p`.
#[derive(Clone, Debug, PartialEq)]
pub struct KMatrix {
    pub surface: SurfaceModel,
    pub vars: Vars,
    /// Entries are complete up to this minimal-model degree.
    pub cap: i64,
    pub order: u32,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl KMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: BasisIndex, j: BasisIndex) -> &LaurentPoly {
        &self.entries[self.surface.index_of(i)][self.surface.index_of(j)]
    }

    /// Entrywise lowest-order part.
    pub fn lowest_order(&self) -> Vec<Vec<LaurentPoly>> {
        self.entries.iter().map(|row| row.iter().map(LaurentPoly::lowest_order).collect()).collect()
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut t = LaurentPoly::zero(self.vars.clone(), self.order);
        for (i, row) in self.entries.iter().enumerate() {
            t = &t + &row[i];
        }
        t
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": 1,
            "surface": self.surface.descriptor(),
            "blowups": self.surface.r,
            "D": self.cap,
            "T": self.order,
            "vars": *self.vars,
            "basis": self.surface.basis_labels(),
            "entries": self.entries.iter().map(|row| row.iter().map(LaurentPoly::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Lowest-order terms, one row per line.
    pub fn pretty_lowest(&self) -> String {
        let labels = self.surface.basis_labels();
        let low = self.lowest_order();
        let mut s = String::new();
        for (i, row) in low.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            s.push_str(&format!("{:>3} | {}\n", labels[i], cells.join(" | ")));
        }
        s
    }
}

/// Diagonal of the grading operator: `-1` on `T_0`, `0` on divisors, `1` on `T_p`.
pub fn grading_matrix(s: &SurfaceModel) -> Vec<Q> {
    let mut d = vec![Q::zero(); s.dim()];
    d[0] = qi(-1);
    d[s.dim() - 1] = qi(1);
    d
}
