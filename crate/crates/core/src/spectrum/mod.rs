//! Numeric specialization of `K`, its spectrum along a ray, and the
//! comparison of blow-up and minimal-model spectra as `q -> 0`.

pub mod eigen;
pub mod hp;
pub mod matching;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dubrovin::KMatrix;
use crate::rings::{rational_to_f64, rational_to_string, Monomial, Q};
use crate::surfaces::{SurfaceKind, SurfaceModel};
use crate::{QspecError, Result};

pub use eigen::{balance, eigenvalues, CMatrix};
pub use hp::Hp;
pub use matching::{log_distance, match_spectra};

/// Left side of the plane convergence guard,
/// `(4/5) |q_1| (|t_p| + sum_{i>1} |q_i|)^3`; values `>= 1` leave the
/// region where the potential is known to converge.
pub fn plane_domain_value(q: &[Complex64], tp: Complex64) -> f64 {
    let Some(q1) = q.first() else {
        return 0.0;
    };
    let rest: f64 = q[1..].iter().map(|z| z.norm()).sum();
    0.8 * q1.norm() * (tp.norm() + rest).powi(3)
}

/// A specialized matrix together with any domain warnings.
#[derive(Clone, Debug)]
pub struct Specialized {
    pub matrix: CMatrix,
    pub warnings: Vec<String>,
}

/// Entrywise evaluation of `K` at nonzero `q` and `t_p`.
pub fn specialize(k: &KMatrix, q: &[Complex64], tp: Complex64) -> Result<Specialized> {
    if q.len() != k.vars.len() {
        return Err(QspecError::Domain(format!("expected {} q values, got {}", k.vars.len(), q.len())));
    }
    if let Some(i) = q.iter().position(|z| z.is_zero()) {
        return Err(QspecError::Domain(format!("q component {} is zero", i + 1)));
    }
    let mut warnings = Vec::new();
    if matches!(k.surface.kind, SurfaceKind::ProjectivePlane) {
        let v = plane_domain_value(q, tp);
        if v >= 1.0 {
            warnings.push(format!("outside the convergence guard: 0.8|q_1|(|t_p| + sum|q_i|)^3 = {v:.6} >= 1"));
        }
    }
    let matrix = k
        .entries
        .iter()
        .map(|row| row.iter().map(|p| p.evaluate(q, tp)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Specialized { matrix, warnings })
}

/// Exact evaluation of `K` at rational `q` and `t_p`.
pub fn specialize_exact(k: &KMatrix, q: &[Q], tp: &Q) -> Result<Vec<Vec<Q>>> {
    if let Some(i) = q.iter().position(|z| z.is_zero()) {
        return Err(QspecError::Domain(format!("q component {} is zero", i + 1)));
    }
    k.entries.iter().map(|row| row.iter().map(|p| p.evaluate_exact(q, tp)).collect()).collect()
}

/// Coefficient of `q_e^{-1}` in `K_ee` at the given `t_p`, one per
/// exceptional divisor.
pub fn exceptional_residues(k: &KMatrix, tp: &Q) -> Vec<Q> {
    let s = &k.surface;
    (0..s.r)
        .map(|e| {
            let idx = s.exceptional_index(e);
            let mut mono = vec![0i32; k.vars.len()];
            mono[s.m() + e] = -1;
            k.entries[idx][idx].coeff(&Monomial(mono)).map(|c| c.eval_exact(tp)).unwrap_or_else(Q::zero)
        })
        .collect()
}

fn exact_f64(x: f64) -> Q {
    BigRational::from_float(x).unwrap_or_default()
}

/// Parameters of a scan along `q_i = nu_i q`.
#[derive(Clone, Debug)]
pub struct ScanParams {
    pub nu: Vec<f64>,
    pub tp: Q,
    pub q_min: f64,
    pub q_max: f64,
    pub samples: usize,
    /// Refine eigenvalues on the exact characteristic polynomial.
    pub precise: bool,
}

impl ScanParams {
    pub fn new(nu: Vec<f64>, tp: Q, q_min: f64, q_max: f64, samples: usize) -> Self {
        ScanParams { nu, tp, q_min, q_max, samples, precise: true }
    }

    /// Log-spaced sample points, increasing.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.samples < 2 {
            return Err(QspecError::Domain("a scan needs at least 2 samples".into()));
        }
        if !(self.q_min > 0.0 && self.q_max > self.q_min && self.q_max.is_finite()) {
            return Err(QspecError::Domain(format!("need 0 < q_min < q_max, got {} and {}", self.q_min, self.q_max)));
        }
        let (a, b) = (self.q_min.log10(), self.q_max.log10());
        let n = self.samples - 1;
        Ok((0..=n).map(|k| 10f64.powf(a + (b - a) * k as f64 / n as f64)).collect())
    }
}

/// Spectrum at one point of a scan, in label order.
#[derive(Clone, Debug)]
pub struct Sample {
    pub q: f64,
    /// The actual point `q_i = nu_i q`.
    pub point: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
    /// Extended-precision values in label order, when refinement succeeded.
    pub precise: Option<Vec<Hp>>,
    /// Double-precision solver output, in solver order.
    pub raw: Vec<Complex64>,
    /// `eigenvalues[label]` came from root `perm[label]` of this sample.
    pub perm: Vec<usize>,
    /// `|sum mu - tr K| / (1 + |tr K|)`.
    pub trace_residual: f64,
    /// `|prod mu - det K| / |det K|` (absolute when `det K = 0`).
    pub det_residual: f64,
    /// Largest distance from a raw eigenvalue to its refined value,
    /// relative to `max(1, |mu|)`.
    pub raw_discrepancy: f64,
    pub warnings: Vec<String>,
}

/// Eigenvalue branches along a ray, labelled by slot: `0..m+2` follow the
/// minimal model, `m+2..` the exceptional divisors.
#[derive(Clone, Debug)]
pub struct SpectrumTrace {
    pub surface: SurfaceModel,
    pub nu: Vec<f64>,
    pub tp: Q,
    /// Post-hoc shift `2 t_0` added to every eigenvalue.
    pub shift: Q,
    pub residues: Vec<Q>,
    pub labels: Vec<String>,
    pub samples: Vec<Sample>,
    /// Largest relative jump between consecutive samples, per label.
    pub max_jump: Vec<f64>,
}

struct RawSample {
    q: f64,
    point: Vec<f64>,
    roots: Vec<Complex64>,
    precise: Option<Vec<Hp>>,
    raw: Vec<Complex64>,
    trace_residual: f64,
    det_residual: f64,
    raw_discrepancy: f64,
    warnings: Vec<String>,
}

fn hp_sum(v: &[Hp]) -> Hp {
    v.iter().fold(Hp::zero(), |a, b| a.add(b))
}

fn hp_prod(v: &[Hp]) -> Hp {
    let one = Hp::from_q(&Q::from_integer(1.into()), &Q::zero());
    v.iter().fold(one, |a, b| a.mul(b))
}

fn sample_at(k: &KMatrix, params: &ScanParams, q: f64) -> Result<RawSample> {
    let point: Vec<f64> = params.nu.iter().map(|v| v * q).collect();
    let qc: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let tp64 = rational_to_f64(&params.tp);
    let spec = specialize(k, &qc, Complex64::new(tp64, 0.0))?;
    let raw = eigenvalues(&spec.matrix)?;
    let tr = eigen::trace(&spec.matrix);
    let n = raw.len();
    let exact_q: Vec<Q> = point.iter().map(|&x| exact_f64(x)).collect();
    let exact = specialize_exact(k, &exact_q, &params.tp)?;
    let chi = hp::exact_char_poly(&exact);
    let det = if n % 2 == 0 { chi.coeff(0) } else { -chi.coeff(0) };
    let mut warnings = spec.warnings;
    let precise = if params.precise {
        match hp::refine_roots(&chi, &raw) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(format!("refinement failed, using double precision: {e}"));
                None
            }
        }
    } else {
        None
    };
    let (roots, trace_residual, det_residual) = match &precise {
        Some(p) => {
            let roots: Vec<Complex64> = p.iter().map(Hp::to_c64).collect();
            let s = hp_sum(p).to_c64();
            let pr = hp_prod(p);
            let dq = Hp::from_q(&det, &Q::zero());
            let dd = pr.sub(&dq).abs_f64();
            let det_res = if det.is_zero() { dd } else { dd / rational_to_f64(&det.abs()) };
            (roots, (s - tr).norm() / (1.0 + tr.norm()), det_res)
        }
        None => {
            let s: Complex64 = raw.iter().sum();
            let pr: Complex64 = raw.iter().product();
            let d = rational_to_f64(&det);
            let dd = (pr - d).norm();
            (raw.clone(), (s - tr).norm() / (1.0 + tr.norm()), if d == 0.0 { dd } else { dd / d.abs() })
        }
    };
    let raw_discrepancy = match match_spectra(&roots, &raw) {
        Some(perm) => roots
            .iter()
            .zip(&perm)
            .map(|(a, &j)| (a - raw[j]).norm() / a.norm().max(1.0))
            .fold(0.0, f64::max),
        None => f64::NAN,
    };
    Ok(RawSample { q, point, roots, precise, raw, trace_residual, det_residual, raw_discrepancy, warnings })
}

/// Default order of an unlabelled spectrum: by argument, then modulus.
fn canonical_order(v: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let key = |z: Complex64| {
        let a = if z.norm() < 1e-300 { -4.0 } else { z.arg() };
        (a, z.norm())
    };
    idx.sort_by(|&i, &j| {
        let (a, b) = (key(v[i]), key(v[j]));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(i.cmp(&j))
    });
    idx
}

/// Spectrum of `K` along `q_i = nu_i q`. Samples are computed in
/// parallel, then labelled at the smallest `q` and followed by continuity
/// towards larger `q`.
///
/// With a minimal-model `reference` on the same grid, labels are assigned
/// by matching against its spectrum plus the exceptional targets
/// `rho_e / q_e`; otherwise by argument and modulus.
pub fn ray_scan(k: &KMatrix, params: &ScanParams, reference: Option<&SpectrumTrace>) -> Result<SpectrumTrace> {
    let s = &k.surface;
    if params.nu.len() != k.vars.len() {
        return Err(QspecError::Domain(format!("ray needs {} entries, got {}", k.vars.len(), params.nu.len())));
    }
    if let Some(i) = params.nu.iter().position(|&v| v == 0.0 || !v.is_finite()) {
        return Err(QspecError::Domain(format!("ray component {} must be finite and nonzero", i + 1)));
    }
    let grid = params.grid()?;
    let residues = exceptional_residues(k, &params.tp);
    let raw: Vec<RawSample> = grid.par_iter().map(|&q| sample_at(k, params, q)).collect::<Result<_>>()?;

    let n = k.dim();
    let mslots = s.m() + 2;
    let first = &raw[0];
    let perm0 = match reference {
        Some(rt) => {
            if rt.samples.len() != raw.len() || rt.samples[0].q != first.q || rt.labels.len() != mslots {
                return Err(QspecError::Precondition("reference trace must share the q grid and minimal slots".into()));
            }
            let mut targets = rt.unshifted(0);
            for (e, rho) in residues.iter().enumerate() {
                targets.push(Complex64::new(rational_to_f64(rho) / first.point[s.m() + e], 0.0));
            }
            let p = match_spectra(&targets, &first.roots)
                .ok_or_else(|| QspecError::Capacity("spectrum too large to match".into()))?;
            p
        }
        None => canonical_order(&first.roots),
    };
    let mut perms = vec![perm0];
    for w in 1..raw.len() {
        let prev: Vec<Complex64> = perms[w - 1].iter().map(|&j| raw[w - 1].roots[j]).collect();
        let p = match_spectra(&prev, &raw[w].roots).ok_or_else(|| QspecError::Capacity("spectrum too large to match".into()))?;
        perms.push(p);
    }

    let mut labels: Vec<String> = (0..mslots).map(|j| format!("min{j}")).collect();
    labels.extend((1..=s.r).map(|e| format!("e{e}")));
    let mut max_jump = vec![0.0f64; n];
    let samples: Vec<Sample> = raw
        .into_iter()
        .zip(perms)
        .map(|(r, perm)| {
            let eigenvalues: Vec<Complex64> = perm.iter().map(|&j| r.roots[j]).collect();
            let precise = r.precise.map(|p| perm.iter().map(|&j| p[j].clone()).collect());
            Sample {
                q: r.q,
                point: r.point,
                eigenvalues,
                precise,
                raw: r.raw,
                perm,
                trace_residual: r.trace_residual,
                det_residual: r.det_residual,
                raw_discrepancy: r.raw_discrepancy,
                warnings: r.warnings,
            }
        })
        .collect();
    for w in samples.windows(2) {
        for (l, jump) in max_jump.iter_mut().enumerate() {
            let (a, b) = (w[0].eigenvalues[l], w[1].eigenvalues[l]);
            let scale = a.norm().max(b.norm()).max(1e-300);
            *jump = jump.max((a - b).norm() / scale);
        }
    }
    Ok(SpectrumTrace {
        surface: s.clone(),
        nu: params.nu.clone(),
        tp: params.tp.clone(),
        shift: Q::zero(),
        residues,
        labels,
        samples,
        max_jump,
    })
}

impl SpectrumTrace {
    pub fn m(&self) -> usize {
        self.surface.m()
    }

    /// The same trace with every eigenvalue moved by `shift` (the `2 t_0`
    /// term of the Euler field).
    pub fn shifted(&self, shift: &Q) -> SpectrumTrace {
        let mut out = self.clone();
        out.shift = &self.shift + shift;
        let hs = Hp::from_q(shift, &Q::zero());
        let fs = rational_to_f64(shift);
        for s in &mut out.samples {
            for z in &mut s.eigenvalues {
                *z += fs;
            }
            if let Some(p) = &mut s.precise {
                for z in p.iter_mut() {
                    *z = z.add(&hs);
                }
            }
        }
        out
    }

    /// Eigenvalues of sample `w` with the shift removed.
    fn unshifted(&self, w: usize) -> Vec<Complex64> {
        let fs = rational_to_f64(&self.shift);
        self.samples[w].eigenvalues.iter().map(|z| z - fs).collect()
    }

    /// Extended-precision eigenvalues of sample `w`, shift removed. Falls
    /// back to double precision when refinement was unavailable.
    pub fn precise_unshifted(&self, w: usize) -> Vec<Hp> {
        let hs = Hp::from_q(&self.shift, &Q::zero());
        match &self.samples[w].precise {
            Some(p) => p.iter().map(|z| z.sub(&hs)).collect(),
            None => self.unshifted(w).into_iter().map(Hp::from_c64).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("q,label,re,im,abs\n");
        for smp in &self.samples {
            for (l, z) in self.labels.iter().zip(&smp.eigenvalues) {
                s.push_str(&format!("{:.16e},{},{:.16e},{:.16e},{:.16e}\n", smp.q, l, z.re, z.im, z.norm()));
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": 1,
            "surface": self.surface.descriptor(),
            "blowups": self.surface.r,
            "ray": self.nu,
            "t_p": rational_to_string(&self.tp),
            "shift": rational_to_string(&self.shift),
            "labels": self.labels,
            "residues": self.residues.iter().map(rational_to_string).collect::<Vec<_>>(),
            "samples": self.samples.iter().map(|s| json!({
                "q": s.q,
                "eigenvalues": s.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "perm": s.perm,
                "trace_residual": s.trace_residual,
                "det_residual": s.det_residual,
                "warnings": s.warnings,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Per-surface deviation thresholds, frozen from verified runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToleranceEntry {
    /// Matches `SurfaceModel::key()` exactly, or `"*"`.
    pub surface: String,
    /// Largest exceptional deviation allowed at the smallest sample.
    pub exceptional: f64,
    /// Largest minimal-slot deviation allowed at the smallest sample.
    pub minimal: f64,
    /// Monotonicity is required for samples with `q <= q_min * 10^decades`.
    pub decades: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToleranceSchedule {
    pub entries: Vec<ToleranceEntry>,
}

impl ToleranceSchedule {
    pub fn builtin() -> Self {
        serde_json::from_str(include_str!("tolerances.json")).expect("builtin tolerance schedule parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn lookup(&self, s: &SurfaceModel) -> Option<&ToleranceEntry> {
        let key = s.key();
        self.entries.iter().find(|e| e.surface == key).or_else(|| self.entries.iter().find(|e| e.surface == "*"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelReport {
    pub label: String,
    pub exceptional: bool,
    /// Deviation per sample, in sample order (increasing `q`).
    pub deviations: Vec<f64>,
    /// `|mu_e q_e - 1|` without residue normalization (exceptional only).
    pub literal: Vec<f64>,
    pub monotone: bool,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub surface: String,
    pub q: Vec<f64>,
    pub labels: Vec<LabelReport>,
    pub diagnostics: Vec<String>,
    pub pass: bool,
}

/// Relative deviations below this are rounding noise of the fixed-point
/// format and read as exact agreement.
pub const HP_NOISE: f64 = 1e-150;

fn hp_rel_dev(mu: &Hp, target: &Hp) -> f64 {
    if target.is_zero() {
        return if mu.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let d = mu.sub(target).div(target).map(|d| d.abs_f64()).unwrap_or(f64::INFINITY);
    if d < HP_NOISE {
        0.0
    } else {
        d
    }
}

/// Deviations of the blow-up spectrum from its limits: `|mu_j/lambda_j - 1|`
/// on minimal slots and `|mu_e q_e / rho_e - 1|` on exceptional slots,
/// where `rho_e` is the residue of `K_ee` at `q_e = 0`.
pub fn verify_main_theorem(trace: &SpectrumTrace, min_trace: &SpectrumTrace, schedule: &ToleranceSchedule) -> TheoremReport {
    let mut diagnostics = Vec::new();
    let m = trace.m();
    let mslots = m + 2;
    let surface = trace.surface.key();
    let q: Vec<f64> = trace.samples.iter().map(|s| s.q).collect();
    let fail = |diagnostics: Vec<String>| TheoremReport { surface: surface.clone(), q: q.clone(), labels: Vec::new(), diagnostics, pass: false };
    if trace.tp != min_trace.tp || trace.nu.get(..m) != Some(&min_trace.nu[..]) || min_trace.surface.r != 0 {
        diagnostics.push("minimal trace must be the r = 0 model with the same ray prefix and t_p".into());
        return fail(diagnostics);
    }
    if min_trace.samples.len() != trace.samples.len() || min_trace.samples.iter().zip(&trace.samples).any(|(a, b)| a.q != b.q) {
        diagnostics.push("traces are sampled on different grids".into());
        return fail(diagnostics);
    }
    let Some(tol) = schedule.lookup(&trace.surface) else {
        diagnostics.push(format!("no tolerance entry for {surface}"));
        return fail(diagnostics);
    };
    for (w, s) in trace.samples.iter().enumerate() {
        if s.precise.is_none() {
            diagnostics.push(format!("sample {w} (q = {:e}) uses double precision only", s.q));
        }
    }
    let nsamp = trace.samples.len();
    let mut per_label: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); trace.labels.len()];
    for w in 0..nsamp {
        let mu = trace.precise_unshifted(w);
        let lam = min_trace.precise_unshifted(w);
        let point = &trace.samples[w].point;
        for (l, slot) in per_label.iter_mut().enumerate() {
            if l < mslots {
                slot.0.push(hp_rel_dev(&mu[l], &lam[l]));
            } else {
                let e = l - mslots;
                let qe = exact_f64(point[m + e]);
                let prod = mu[l].mul_q(&qe);
                let one = Hp::from_q(&Q::from_integer(1.into()), &Q::zero());
                let rho = Hp::from_q(&trace.residues[e], &Q::zero());
                slot.0.push(hp_rel_dev(&prod, &rho));
                slot.1.push(hp_rel_dev(&prod, &one));
            }
        }
    }
    let q_lo = q[0];
    let window = q_lo * 10f64.powf(tol.decades) * (1.0 + 1e-9);
    let mut labels = Vec::new();
    for (l, (devs, literal)) in per_label.into_iter().enumerate() {
        let exceptional = l >= mslots;
        let tolerance = if exceptional { tol.exceptional } else { tol.minimal };
        // Non-increasing as q decreases, i.e. non-decreasing in sample order.
        let monotone = (1..nsamp).filter(|&w| q[w] <= window).all(|w| devs[w - 1] <= devs[w]);
        let pass = monotone && devs[0] <= tolerance;
        if !pass {
            diagnostics.push(format!("{}: final deviation {:e} (tolerance {:e}), monotone {}", trace.labels[l], devs[0], tolerance, monotone));
        }
        labels.push(LabelReport { label: trace.labels[l].clone(), exceptional, deviations: devs, literal, monotone, tolerance, pass });
    }
    let pass = labels.iter().all(|l| l.pass);
    TheoremReport { surface, q, labels, diagnostics, pass }
}

/// Index of the sample closest to `q` on the log scale.
pub fn nearest_sample(trace: &SpectrumTrace, q: f64) -> usize {
    (0..trace.samples.len())
        .min_by(|&a, &b| {
            let da = (trace.samples[a].q.ln() - q.ln()).abs();
            let db = (trace.samples[b].q.ln() - q.ln()).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubrovin::Potential;
    use crate::gw::GwTable;
    use crate::rings::{q, qi};

    fn kmat(s: SurfaceModel, cap: i64) -> KMatrix {
        let mut t = GwTable::new(s, cap);
        Potential::new(&mut t, cap, 8).unwrap().k_matrix()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn domain_guard_value() {
        let v = plane_domain_value(&[c(0.1), c(0.1), c(0.1)], c(0.5));
        assert!((v - 0.02744).abs() < 1e-15);
        let k = kmat(SurfaceModel::p2(2), 2);
        assert!(specialize(&k, &[c(0.1), c(0.1), c(0.1)], c(0.5)).unwrap().warnings.is_empty());
        assert_eq!(specialize(&k, &[c(2.0), c(1.0), c(1.0)], c(0.5)).unwrap().warnings.len(), 1);
    }

    #[test]
    fn zero_q_is_domain_error() {
        let k = kmat(SurfaceModel::p2(1), 2);
        assert!(matches!(specialize(&k, &[c(0.1), c(0.0)], c(0.0)), Err(QspecError::Domain(_))));
    }

    #[test]
    fn plane_cube_roots() {
        let k = kmat(SurfaceModel::p2(0), 3);
        let m = specialize(&k, &[c(1e-3)], c(0.0)).unwrap().matrix;
        for z in eigenvalues(&m).unwrap() {
            assert!((z.norm() - 0.3).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn nef_triangular() {
        let s = SurfaceModel::new(SurfaceKind::NefAnticanonical { pairing: vec![vec![0, 1], vec![1, 0]], c1: vec![0, 0] }, 2).unwrap();
        let k = kmat(s, 3);
        let m = specialize(&k, &[c(0.3), c(0.2), c(1e-3), c(2e-3)], c(0.1)).unwrap().matrix;
        for (i, row) in m.iter().enumerate() {
            for z in &row[i + 1..] {
                assert_eq!(*z, c(0.0));
            }
        }
        let diag: Vec<Complex64> = (0..m.len()).map(|i| m[i][i]).collect();
        let want = [0.0, 0.0, 0.0, -1e3, -5e2, 0.0];
        for (z, w) in diag.iter().zip(want) {
            assert!((z - w).norm() <= 1e-12 * w.abs(), "{z} vs {w}");
        }
        assert_eq!(exceptional_residues(&k, &q(1, 10)), vec![qi(-1), qi(-1)]);
    }

    #[test]
    fn scan_validation() {
        let k = kmat(SurfaceModel::p2(0), 2);
        let p = ScanParams::new(vec![1.0], q(1, 10), 1e-3, 1e-1, 1);
        assert!(matches!(ray_scan(&k, &p, None), Err(QspecError::Domain(_))));
        let p = ScanParams::new(vec![0.0], q(1, 10), 1e-3, 1e-1, 3);
        assert!(matches!(ray_scan(&k, &p, None), Err(QspecError::Domain(_))));
    }

    #[test]
    fn shift_is_exact() {
        let k = kmat(SurfaceModel::p2(1), 3);
        let p = ScanParams::new(vec![1.0, 1.0], q(1, 10), 1e-4, 1e-2, 3);
        let t = ray_scan(&k, &p, None).unwrap();
        let s = t.shifted(&q(3, 4));
        for w in 0..3 {
            let a = t.samples[w].precise.as_ref().unwrap();
            let b = s.samples[w].precise.as_ref().unwrap();
            let d = Hp::from_q(&q(3, 4), &Q::zero());
            for (x, y) in a.iter().zip(b) {
                assert_eq!(&x.add(&d), y);
            }
            assert_eq!(s.precise_unshifted(w), *a);
        }
    }
}
