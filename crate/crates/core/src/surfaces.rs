//! Minimal surfaces and their blow-ups at generic points: cohomology basis,
//! intersection pairing, first Chern class and curve classes.
//!
//! Basis layout for a model with `m` minimal-model divisors and `r`
//! exceptional divisors: index 0 is the unit, `1..=m` the minimal-model
//! divisors, `m+1..=m+r` the exceptional divisors, `m+r+1` the point class.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QspecError, Result};
use crate::rings::{q, qi, Vars, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    QuadricP1xP1,
    /// Ruled surface over a curve of genus `genus >= 1`, section self-intersection `degree`.
    Ruled { genus: u32, degree: i64 },
    /// Nef anticanonical minimal model given by its divisor pairing and `c_1`.
    NefAnticanonical { pairing: Vec<Vec<i64>>, c1: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub r: usize,
}

/// Position in the cohomology basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisIndex {
    Unit,
    /// Divisor number `k` in `1..=m+r`.
    Divisor(usize),
    Point,
}

/// A curve class `beta - sum a_i E_i`: `beta` in minimal-model divisor
/// coordinates, `alpha` the exceptional multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    pub beta: Vec<i64>,
    pub alpha: Vec<i64>,
}

impl CurveClass {
    pub fn new(beta: Vec<i64>, alpha: Vec<i64>) -> Self {
        CurveClass { beta, alpha }
    }

    pub fn alpha_sum(&self) -> i64 {
        self.alpha.iter().sum()
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(|&b| b == 0)
    }

    /// Sum of `beta` coordinates; the degree used for truncation.
    pub fn weight(&self) -> i64 {
        self.beta.iter().sum()
    }

    /// Canonical representative of the orbit under permutations of the
    /// exceptional divisors: zero entries removed, the rest sorted descending.
    pub fn normalize(&self) -> CurveClass {
        let mut alpha: Vec<i64> = self.alpha.iter().copied().filter(|&a| a != 0).collect();
        alpha.sort_unstable_by(|a, b| b.cmp(a));
        CurveClass { beta: self.beta.clone(), alpha }
    }

    /// True for `(0, -[i])`.
    pub fn is_exceptional(&self) -> bool {
        self.beta_is_zero() && self.alpha.iter().filter(|&&a| a != 0).count() == 1 && self.alpha.iter().any(|&a| a == -1)
    }

    /// Pads `alpha` with zeros to length `r`.
    pub fn padded(&self, r: usize) -> CurveClass {
        let mut alpha = self.alpha.clone();
        alpha.resize(r.max(alpha.len()), 0);
        CurveClass { beta: self.beta.clone(), alpha }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.beta.iter().map(|x| x.to_string()).collect();
        let a: Vec<String> = self.alpha.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", b.join(","), a.join(","))
    }
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &a[i][l] * &b[l][j])).collect())
        .collect()
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind, r: usize) -> Result<Self> {
        match &kind {
            SurfaceKind::Ruled { genus, degree } => {
                if *genus < 1 {
                    return Err(QspecError::Unsupported(
                        "ruled surfaces need genus >= 1; genus 0 is covered by p2 and p1xp1".into(),
                    ));
                }
                if *degree == 0 || *degree == 2 - 2 * (*genus as i64) {
                    return Err(QspecError::Unsupported(format!(
                        "ruled degree u must avoid 0 and 2-2g (got u={degree}, g={genus})"
                    )));
                }
            }
            SurfaceKind::NefAnticanonical { pairing, c1 } => {
                let m = pairing.len();
                if m == 0 || pairing.iter().any(|row| row.len() != m) || c1.len() != m {
                    return Err(QspecError::Domain("nef model needs a square pairing and matching c1".into()));
                }
                for i in 0..m {
                    for j in 0..m {
                        if pairing[i][j] != pairing[j][i] {
                            return Err(QspecError::Domain("nef pairing must be symmetric".into()));
                        }
                    }
                }
                let g: Vec<Vec<Q>> = pairing.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
                if invert(&g).is_none() {
                    return Err(QspecError::Domain("nef pairing is singular".into()));
                }
            }
            _ => {}
        }
        Ok(SurfaceModel { kind, r })
    }

    pub fn p2(r: usize) -> Self {
        SurfaceModel { kind: SurfaceKind::ProjectivePlane, r }
    }

    pub fn p1xp1(r: usize) -> Self {
        SurfaceModel { kind: SurfaceKind::QuadricP1xP1, r }
    }

    pub fn ruled(genus: u32, degree: i64, r: usize) -> Result<Self> {
        Self::new(SurfaceKind::Ruled { genus, degree }, r)
    }

    /// Same minimal model, different number of blow-ups.
    pub fn with_blowups(&self, r: usize) -> Self {
        SurfaceModel { kind: self.kind.clone(), r }
    }

    /// Parses `p2`, `p1xp1`, `ruled:g=<int>,u=<int>` or `nef:<path-to-json>`.
    pub fn parse(descriptor: &str, r: usize) -> Result<Self> {
        let d = descriptor.trim();
        let perr = |pos: usize, msg: String| QspecError::Parse { pos, msg };
        match d {
            "p2" => return Ok(Self::p2(r)),
            "p1xp1" => return Ok(Self::p1xp1(r)),
            _ => {}
        }
        if let Some(rest) = d.strip_prefix("ruled:") {
            let (mut g, mut u) = (None, None);
            let mut pos = "ruled:".len();
            for part in rest.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(|| perr(pos, format!("expected key=value, got {part:?}")))?;
                let val: i64 = v.trim().parse().map_err(|_| perr(pos + k.len() + 1, format!("bad integer {v:?}")))?;
                match k.trim() {
                    "g" => g = Some(val),
                    "u" => u = Some(val),
                    other => return Err(perr(pos, format!("unknown key {other:?}"))),
                }
                pos += part.len() + 1;
            }
            let g = g.ok_or_else(|| perr(d.len(), "missing g".into()))?;
            let u = u.ok_or_else(|| perr(d.len(), "missing u".into()))?;
            if g < 0 {
                return Err(perr(6, "genus must be non-negative".into()));
            }
            return Self::ruled(g as u32, u, r);
        }
        if let Some(path) = d.strip_prefix("nef:") {
            return Self::from_nef_file(Path::new(path), r);
        }
        Err(perr(0, format!("unknown surface {d:?}; expected p2, p1xp1, ruled:g=..,u=.. or nef:<path>")))
    }

    /// Reads `{"pairing": [[..]], "c1": [..]}`.
    pub fn from_nef_file(path: &Path, r: usize) -> Result<Self> {
        #[derive(Deserialize)]
        struct NefSpec {
            pairing: Vec<Vec<i64>>,
            c1: Vec<i64>,
        }
        let text = std::fs::read_to_string(path)?;
        let spec: NefSpec = serde_json::from_str(&text)?;
        Self::new(SurfaceKind::NefAnticanonical { pairing: spec.pairing, c1: spec.c1 }, r)
    }

    /// Largest minimal-model degree of a class with nonzero invariant when
    /// that set is finite: nef models only carry the exceptional classes,
    /// ruled models of positive genus only the fibre classes.
    pub fn support_degree(&self) -> Option<i64> {
        match self.kind {
            SurfaceKind::NefAnticanonical { .. } => Some(0),
            SurfaceKind::Ruled { .. } => Some(1),
            _ => None,
        }
    }

    /// Descriptor of the minimal model, without the blow-up count.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            SurfaceKind::ProjectivePlane => "p2".into(),
            SurfaceKind::QuadricP1xP1 => "p1xp1".into(),
            SurfaceKind::Ruled { genus, degree } => format!("ruled:g={genus},u={degree}"),
            SurfaceKind::NefAnticanonical { pairing, c1 } => {
                format!("nef:{}", serde_json::json!({"pairing": pairing, "c1": c1}))
            }
        }
    }

    /// Descriptor including the blow-up count; used to key caches.
    pub fn key(&self) -> String {
        format!("{}@r={}", self.descriptor(), self.r)
    }

    /// Number of minimal-model divisors.
    pub fn m(&self) -> usize {
        match &self.kind {
            SurfaceKind::ProjectivePlane => 1,
            SurfaceKind::QuadricP1xP1 | SurfaceKind::Ruled { .. } => 2,
            SurfaceKind::NefAnticanonical { pairing, .. } => pairing.len(),
        }
    }

    /// Number of divisors `m + r`.
    pub fn ndiv(&self) -> usize {
        self.m() + self.r
    }

    /// Size of the full basis `m + r + 2`.
    pub fn dim(&self) -> usize {
        self.m() + self.r + 2
    }

    pub fn index_of(&self, b: BasisIndex) -> usize {
        match b {
            BasisIndex::Unit => 0,
            BasisIndex::Divisor(k) => k,
            BasisIndex::Point => self.dim() - 1,
        }
    }

    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut v = vec![BasisIndex::Unit];
        v.extend((1..=self.ndiv()).map(BasisIndex::Divisor));
        v.push(BasisIndex::Point);
        v
    }

    pub fn point_index(&self) -> usize {
        self.dim() - 1
    }

    /// Full-basis index of exceptional divisor `i` (0-based).
    pub fn exceptional_index(&self, i: usize) -> usize {
        1 + self.m() + i
    }

    /// Labels of the divisor basis, e.g. `["h", "e1"]`.
    pub fn divisor_labels(&self) -> Vec<String> {
        let mut v: Vec<String> = match &self.kind {
            SurfaceKind::ProjectivePlane => vec!["h".into()],
            SurfaceKind::QuadricP1xP1 | SurfaceKind::Ruled { .. } => vec!["f".into(), "c".into()],
            SurfaceKind::NefAnticanonical { pairing, .. } => (1..=pairing.len()).map(|i| format!("d{i}")).collect(),
        };
        v.extend((1..=self.r).map(|i| format!("e{i}")));
        v
    }

    /// Labels of the full basis: `0`, divisors, `p`.
    pub fn basis_labels(&self) -> Vec<String> {
        let mut v = vec!["0".to_string()];
        v.extend(self.divisor_labels());
        v.push("p".into());
        v
    }

    /// Novikov variables, one per divisor.
    pub fn vars(&self) -> Vars {
        Arc::new(self.divisor_labels().into_iter().map(|l| format!("q_{l}")).collect())
    }

    /// Pairing on the minimal-model divisors.
    pub fn minimal_pairing(&self) -> Vec<Vec<i64>> {
        match &self.kind {
            SurfaceKind::ProjectivePlane => vec![vec![1]],
            SurfaceKind::QuadricP1xP1 => vec![vec![0, 1], vec![1, 0]],
            SurfaceKind::Ruled { degree, .. } => vec![vec![0, 1], vec![1, *degree]],
            SurfaceKind::NefAnticanonical { pairing, .. } => pairing.clone(),
        }
    }

    /// Pairing on all `m + r` divisors; exceptional block is `-I`.
    pub fn divisor_pairing(&self) -> Vec<Vec<i64>> {
        let m = self.m();
        let n = self.ndiv();
        let gmin = self.minimal_pairing();
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = gmin[i][j];
            }
        }
        for e in m..n {
            g[e][e] = -1;
        }
        g
    }

    /// Full pairing `g_ij` and its exact inverse `g^ij` over the whole basis.
    pub fn pairing(&self) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
        let dim = self.dim();
        let mut g = vec![vec![Q::zero(); dim]; dim];
        g[0][dim - 1] = Q::one();
        g[dim - 1][0] = Q::one();
        for (i, row) in self.divisor_pairing().iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                g[1 + i][1 + j] = qi(x);
            }
        }
        let ginv = invert(&g).expect("supported models have a nonsingular pairing");
        (g, ginv)
    }

    /// First Chern class of the minimal model in divisor coordinates.
    pub fn minimal_c1(&self) -> Vec<i64> {
        match &self.kind {
            SurfaceKind::ProjectivePlane => vec![3],
            SurfaceKind::QuadricP1xP1 => vec![2, 2],
            SurfaceKind::Ruled { genus, degree } => vec![2 - 2 * (*genus as i64) - degree, 2],
            SurfaceKind::NefAnticanonical { c1, .. } => c1.clone(),
        }
    }

    /// First Chern class over all divisors: minimal part then `-1` per exceptional divisor.
    pub fn first_chern(&self) -> Vec<i64> {
        let mut c = self.minimal_c1();
        c.extend(std::iter::repeat_n(-1, self.r));
        c
    }

    /// Intersection numbers of `beta` with each minimal-model divisor.
    pub fn beta_intersections(&self, beta: &[i64]) -> Vec<i64> {
        let g = self.minimal_pairing();
        g.iter().map(|row| row.iter().zip(beta).map(|(a, b)| a * b).sum()).collect()
    }

    /// `beta . c1(X_min)`.
    pub fn beta_degree(&self, beta: &[i64]) -> i64 {
        self.beta_intersections(beta).iter().zip(self.minimal_c1()).map(|(a, c)| a * c).sum()
    }

    /// `n = beta . c1 - |alpha| - 1`.
    pub fn expected_dim(&self, c: &CurveClass) -> i64 {
        self.beta_degree(&c.beta) - c.alpha_sum() - 1
    }

    /// Self-intersection of the class `beta - sum a_i E_i`.
    pub fn self_intersection(&self, c: &CurveClass) -> i64 {
        let bb: i64 = self.beta_intersections(&c.beta).iter().zip(&c.beta).map(|(a, b)| a * b).sum();
        bb - c.alpha.iter().map(|a| a * a).sum::<i64>()
    }

    /// Arithmetic genus of a class on a blow-up of the plane.
    pub fn arithmetic_genus(&self, c: &CurveClass) -> Result<Q> {
        if self.kind != SurfaceKind::ProjectivePlane {
            return Err(QspecError::Unsupported("arithmetic genus is implemented for plane blow-ups".into()));
        }
        let d = c.beta[0];
        let mut p = q((d - 1) * (d - 2), 2);
        for a in &c.alpha {
            p -= q(a * (a - 1), 2);
        }
        Ok(p)
    }

    /// Change of basis from `P1xP1` blown up at `r >= 1` points to the plane
    /// blown up at `r + 1` points: `f -> h - E_Q`, `c -> h - E_P`,
    /// `E_1 -> h - E_P - E_Q`, other exceptional classes unchanged.
    /// The plane's exceptional order is `(E_P, E_Q, E_2, ..)`.
    pub fn quadric_to_plane_basis(&self, c: &CurveClass) -> Result<CurveClass> {
        if self.kind != SurfaceKind::QuadricP1xP1 {
            return Err(QspecError::Unsupported("basis change applies to p1xp1 only".into()));
        }
        if self.r == 0 {
            return Err(QspecError::Unsupported("p1xp1 without blow-ups is handled natively".into()));
        }
        let c = c.padded(self.r);
        let (b, d) = (c.beta[0], c.beta[1]);
        let a1 = c.alpha[0];
        let mut alpha = vec![d - a1, b - a1];
        alpha.extend_from_slice(&c.alpha[1..]);
        Ok(CurveClass::new(vec![b + d - a1], alpha))
    }

    /// Matrix of [`Self::quadric_to_plane_basis`] on divisor coefficient
    /// vectors `(f, c, E_1, .., E_r) -> (h, E_P, E_Q, E_2, .., E_r)`.
    pub fn quadric_to_plane_matrix(r: usize) -> Vec<Vec<i64>> {
        let n = r + 2;
        let mut m = vec![vec![0i64; n]; n];
        // column f = h - E_Q
        m[0][0] = 1;
        m[2][0] = -1;
        // column c = h - E_P
        m[0][1] = 1;
        m[1][1] = -1;
        // column E_1 = h - E_P - E_Q
        m[0][2] = 1;
        m[1][2] = -1;
        m[2][2] = -1;
        for k in 3..n {
            m[k][k] = 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_pairing_inverse() {
        let s = SurfaceModel::p2(1);
        let (g, gi) = s.pairing();
        assert_eq!(gi[1][1], qi(1));
        assert_eq!(gi[2][2], qi(-1));
        assert_eq!(gi[0][3], qi(1));
        assert_eq!(gi[3][0], qi(1));
        let id = mat_mul(&g, &gi);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { qi(1) } else { qi(0) });
            }
        }
    }

    #[test]
    fn ruled_inverse_block() {
        let s = SurfaceModel::ruled(2, 1, 0).unwrap();
        let (_, gi) = s.pairing();
        assert_eq!(gi[1][1], qi(-1));
        assert_eq!(gi[1][2], qi(1));
        assert_eq!(gi[2][1], qi(1));
        assert_eq!(gi[2][2], qi(0));
    }

    #[test]
    fn chern_classes() {
        assert_eq!(SurfaceModel::p2(2).first_chern(), vec![3, -1, -1]);
        assert_eq!(SurfaceModel::ruled(2, 1, 0).unwrap().first_chern(), vec![-3, 2]);
        assert_eq!(SurfaceModel::p1xp1(0).first_chern(), vec![2, 2]);
    }

    #[test]
    fn expected_dims() {
        let s = SurfaceModel::p2(1);
        assert_eq!(s.expected_dim(&CurveClass::new(vec![1], vec![])), 2);
        assert_eq!(s.expected_dim(&CurveClass::new(vec![1], vec![1])), 1);
        assert_eq!(s.expected_dim(&CurveClass::new(vec![2], vec![1])), 4);
        let r = SurfaceModel::ruled(2, 1, 1).unwrap();
        assert_eq!(r.expected_dim(&CurveClass::new(vec![1, 0], vec![])), 1);
        assert_eq!(r.expected_dim(&CurveClass::new(vec![2, 0], vec![2])), 1);
    }

    #[test]
    fn normalization() {
        let c = CurveClass::new(vec![3], vec![0, 2, 1, 0]).normalize();
        assert_eq!(c, CurveClass::new(vec![3], vec![2, 1]));
        let e = CurveClass::new(vec![0], vec![-1]);
        assert_eq!(e.normalize(), e);
        assert!(e.is_exceptional());
    }

    #[test]
    fn genus_formula() {
        let s = SurfaceModel::p2(2);
        assert_eq!(s.arithmetic_genus(&CurveClass::new(vec![1], vec![])).unwrap(), qi(0));
        assert_eq!(s.arithmetic_genus(&CurveClass::new(vec![3], vec![2, 2])).unwrap(), qi(-1));
        assert_eq!(s.arithmetic_genus(&CurveClass::new(vec![2], vec![1, 1])).unwrap(), qi(0));
        assert!(SurfaceModel::p1xp1(0).arithmetic_genus(&CurveClass::new(vec![1, 0], vec![])).is_err());
    }

    #[test]
    fn quadric_map() {
        let s = SurfaceModel::p1xp1(1);
        let img = s.quadric_to_plane_basis(&CurveClass::new(vec![1, 0], vec![])).unwrap();
        assert_eq!(img, CurveClass::new(vec![1], vec![0, 1]));
        assert!(SurfaceModel::p1xp1(0).quadric_to_plane_basis(&CurveClass::new(vec![1, 0], vec![])).is_err());
    }

    #[test]
    fn descriptors() {
        assert_eq!(SurfaceModel::parse("ruled:g=2,u=1", 1).unwrap(), SurfaceModel::ruled(2, 1, 1).unwrap());
        assert!(SurfaceModel::parse("ruled:g=2,u=-2", 0).is_err());
        assert!(SurfaceModel::parse("ruled:g=2,u=0", 0).is_err());
        assert!(SurfaceModel::parse("ruled:g=0,u=1", 0).is_err());
        assert!(matches!(SurfaceModel::parse("p3", 0), Err(QspecError::Parse { .. })));
        assert_eq!(SurfaceModel::p2(2).key(), "p2@r=2");
    }
}
