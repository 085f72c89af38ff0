//! Genus-0 Gromov-Witten invariants `N_{beta, alpha}` of the supported
//! surfaces, computed from the blow-up rules and the WDVV recursions and
//! memoized in a table keyed by normalized classes.

mod cache;
pub mod relations;

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{QspecError, Result};
use crate::rings::Q;
use crate::surfaces::{CurveClass, SurfaceKind, SurfaceModel};

pub use cache::{load_cache, save_cache, CACHE_FORMAT};

/// Default degree cap for plane-type surfaces.
pub const DEFAULT_DEGREE_CAP: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Short-circuit classes of negative arithmetic genus to zero on plane
    /// blow-ups. Disabling it lets the recursion itself produce those zeros.
    pub pa_shortcut: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { pa_shortcut: true }
    }
}

/// Memoized invariants of one surface up to a degree cap.
#[derive(Clone, Debug)]
pub struct GwTable {
    surface: SurfaceModel,
    cap: i64,
    options: EngineOptions,
    entries: HashMap<CurveClass, Q>,
    /// Plane model used for `P1xP1` with blow-ups.
    plane: Option<Box<GwTable>>,
}

/// A class of an enumeration together with the size of its orbit under
/// permutations of the exceptional divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    pub class: CurveClass,
    pub multiplicity: u64,
}

impl GwTable {
    pub fn new(surface: SurfaceModel, cap: i64) -> Self {
        Self::with_options(surface, cap, EngineOptions::default())
    }

    pub fn with_options(surface: SurfaceModel, cap: i64, options: EngineOptions) -> Self {
        let plane = match surface.kind {
            SurfaceKind::QuadricP1xP1 if surface.r >= 1 => {
                Some(Box::new(GwTable::with_options(SurfaceModel::p2(surface.r + 1), cap.max(1), options)))
            }
            _ => None,
        };
        GwTable { surface, cap, options, entries: HashMap::new(), plane }
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries, keyed by normalized class.
    pub fn entries(&self) -> impl Iterator<Item = (&CurveClass, &Q)> {
        self.entries.iter()
    }

    /// Stores a value from a trusted source such as a cache file. `c` must
    /// already be normalized.
    pub fn insert_entry(&mut self, c: CurveClass, v: Q) {
        self.entries.insert(c, v);
    }

    fn check_shape(&self, c: &CurveClass) -> Result<()> {
        if c.beta.len() != self.surface.m() {
            return Err(QspecError::Domain(format!(
                "class {c} needs {} minimal-model coordinates",
                self.surface.m()
            )));
        }
        if c.alpha.len() > self.surface.r && c.alpha[self.surface.r..].iter().any(|&a| a != 0) {
            return Err(QspecError::Domain(format!(
                "class {c} has more exceptional entries than the {} blown-up points",
                self.surface.r
            )));
        }
        Ok(())
    }

    /// `N_{beta, alpha}` as an exact rational.
    pub fn invariant(&mut self, c: &CurveClass) -> Result<Q> {
        self.check_shape(c)?;
        let c = c.normalize();
        if let Some(v) = self.entries.get(&c) {
            return Ok(v.clone());
        }
        if let Some(v) = self.rule_value(&c) {
            return Ok(v);
        }
        if c.weight() > self.cap {
            return Err(QspecError::Capacity(format!(
                "class {c} has degree {} above the cap {}",
                c.weight(),
                self.cap
            )));
        }
        let v = match &self.surface.kind {
            SurfaceKind::ProjectivePlane => self.plane_recursive(&c)?,
            SurfaceKind::QuadricP1xP1 => self.quadric_recursive(&c)?,
            SurfaceKind::Ruled { .. } => ruled_value(&c),
            SurfaceKind::NefAnticanonical { .. } => Q::zero(),
        };
        self.entries.insert(c, v.clone());
        Ok(v)
    }

    /// Read-only query: stored entries and closed-form rules only.
    pub fn value(&self, c: &CurveClass) -> Result<Q> {
        self.check_shape(c)?;
        let c = c.normalize();
        if let Some(v) = self.entries.get(&c) {
            return Ok(v.clone());
        }
        if let Some(v) = self.rule_value(&c) {
            return Ok(v);
        }
        match &self.surface.kind {
            SurfaceKind::Ruled { .. } => Ok(ruled_value(&c)),
            SurfaceKind::NefAnticanonical { .. } => Ok(Q::zero()),
            _ => Err(QspecError::Capacity(format!("class {c} is not in the table"))),
        }
    }

    /// Vanishing and seed rules that need no recursion.
    fn rule_value(&self, c: &CurveClass) -> Option<Q> {
        let s = &self.surface;
        if c.beta_is_zero() {
            return Some(if c.alpha == [-1] { Q::one() } else { Q::zero() });
        }
        if c.beta.iter().any(|&b| b < 0) && !matches!(s.kind, SurfaceKind::NefAnticanonical { .. }) {
            return Some(Q::zero());
        }
        if c.alpha.iter().any(|&a| a < 0) {
            return Some(Q::zero());
        }
        if s.expected_dim(c) < 0 {
            return Some(Q::zero());
        }
        match s.kind {
            SurfaceKind::ProjectivePlane => {
                if c.beta[0] == 1 && c.alpha.iter().all(|&a| a <= 1) {
                    return Some(Q::one());
                }
                if self.options.pa_shortcut && s.arithmetic_genus(c).ok()? < Q::zero() {
                    return Some(Q::zero());
                }
                None
            }
            SurfaceKind::QuadricP1xP1 => {
                if c.alpha.is_empty() && c.weight() == 1 {
                    return Some(Q::one());
                }
                if c.alpha.is_empty() && c.beta == [1, 1] {
                    return Some(Q::one());
                }
                None
            }
            _ => None,
        }
    }

    fn plane_recursive(&mut self, c: &CurveClass) -> Result<Q> {
        let s = self.surface.with_blowups(c.alpha.len());
        let mut lookup = |x: &CurveClass| self.invariant(x);
        if c.alpha.is_empty() {
            return relations::relation_rm(&s, 0, 0, c, &mut lookup);
        }
        if c.alpha.last() == Some(&1) {
            let mut peeled = c.clone();
            peeled.alpha.pop();
            return lookup(&peeled);
        }
        // Largest multiplicity sits first after normalization and is >= 2 here.
        relations::relation_rk(&s, 0, 0, 0, c, &mut lookup)
    }

    fn quadric_recursive(&mut self, c: &CurveClass) -> Result<Q> {
        if c.alpha.is_empty() {
            let s = self.surface.with_blowups(0);
            let mut lookup = |x: &CurveClass| self.invariant(x);
            return relations::relation_rm(&s, 0, 1, c, &mut lookup);
        }
        let image = self.surface.quadric_to_plane_basis(c)?;
        self.plane.as_mut().expect("plane model for blown-up quadric").invariant(&image)
    }

    /// All classes with `n >= 0` and degree at most `cap`, one
    /// representative per orbit (exceptional entries sorted descending,
    /// padded to length `r`) together with the orbit size.
    pub fn enumerate_classes(&self, cap: i64) -> Vec<OrbitClass> {
        let s = &self.surface;
        let r = s.r;
        let mut out = Vec::new();
        if r > 0 {
            let mut alpha = vec![0; r];
            alpha[r - 1] = -1;
            out.push(OrbitClass { class: CurveClass::new(vec![0; s.m()], alpha), multiplicity: r as u64 });
        }
        let betas: Vec<Vec<i64>> = match &s.kind {
            SurfaceKind::ProjectivePlane => (1..=cap).map(|d| vec![d]).collect(),
            SurfaceKind::QuadricP1xP1 | SurfaceKind::Ruled { .. } => {
                let mut v = Vec::new();
                for w in 1..=cap {
                    for b in (0..=w).rev() {
                        v.push(vec![b, w - b]);
                    }
                }
                v
            }
            SurfaceKind::NefAnticanonical { .. } => Vec::new(),
        };
        for beta in betas {
            let bound = beta.iter().sum::<i64>();
            for alpha in descending_tuples(r, bound) {
                let c = CurveClass::new(beta.clone(), alpha);
                if s.expected_dim(&c) < 0 {
                    continue;
                }
                let multiplicity = orbit_size(&c.alpha);
                out.push(OrbitClass { class: c, multiplicity });
            }
        }
        out
    }

    /// Computes every enumerated class up to the cap.
    pub fn populate(&mut self) -> Result<()> {
        for oc in self.enumerate_classes(self.cap) {
            self.invariant(&oc.class)?;
        }
        Ok(())
    }

    /// Every class (all permutations of exceptional entries) with nonzero
    /// invariant and degree at most `cap`, as `(class padded to r, value)`.
    pub fn support(&mut self, cap: i64) -> Result<Vec<(CurveClass, Q)>> {
        let r = self.surface.r;
        let mut out = Vec::new();
        for oc in self.enumerate_classes(cap) {
            let v = self.invariant(&oc.class)?;
            if v.is_zero() {
                continue;
            }
            for alpha in distinct_permutations(&oc.class.alpha) {
                out.push((CurveClass::new(oc.class.beta.clone(), alpha).padded(r), v.clone()));
            }
        }
        Ok(out)
    }
}

/// Closed table for ruled surfaces of genus `g >= 1`.
///
/// The double fibre class `2f - 2E_i` gets 0: it is twice a rigid
/// `(-1)`-curve, relation (Rk) with the section divisor on both slots gives
/// `8 N = 0`, and associativity of the quantum product fails for any other value.
fn ruled_value(c: &CurveClass) -> Q {
    let one = |b: bool| if b { Q::one() } else { Q::zero() };
    if c.beta_is_zero() {
        return one(c.alpha == [-1]);
    }
    if c.beta != [1, 0] {
        return Q::zero();
    }
    one(c.alpha.is_empty() || c.alpha == [1])
}

/// Non-increasing tuples of length `r` with entries in `0..=bound`.
fn descending_tuples(r: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(r: usize, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in (0..=hi).rev() {
            cur.push(x);
            rec(r, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, bound, &mut Vec::new(), &mut out);
    out
}

/// `r! / prod(count_k!)` for the multiset of entries.
pub fn orbit_size(alpha: &[i64]) -> u64 {
    let mut counts: HashMap<i64, u64> = HashMap::new();
    for &a in alpha {
        *counts.entry(a).or_default() += 1;
    }
    let fact = |n: u64| (1..=n).product::<u64>();
    counts.values().fold(fact(alpha.len() as u64), |acc, &k| acc / fact(k))
}

/// Distinct permutations of a multiset.
pub fn distinct_permutations(v: &[i64]) -> Vec<Vec<i64>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // Lexicographic next-permutation walk.
    loop {
        let n = sorted.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| sorted[i] < sorted[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| sorted[j] > sorted[i]).unwrap();
        sorted.swap(i, j);
        sorted[i + 1..].reverse();
        out.push(sorted.clone());
    }
    out
}

/// Convenience: `N_d` on the plane.
pub fn plane_number(d: i64) -> Result<Q> {
    let mut t = GwTable::new(SurfaceModel::p2(0), d.max(1));
    t.invariant(&CurveClass::new(vec![d], vec![]))
}
