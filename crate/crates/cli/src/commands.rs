//! Subcommand implementations. Each returns `Ok(pass)`; errors carry their
//! own exit-code class.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qspec_core::bounds::appendix_suite;
use qspec_core::charpoly::{char_poly, ray_char_poly, verify_blowup_polygon, NewtonDiagram, TpMode};
use qspec_core::dubrovin::{KMatrix, Potential};
use qspec_core::gw::GwTable;
use qspec_core::rings::{parse_rational, rational_to_f64, rational_to_string, Q};
use qspec_core::spectrum::{ray_scan, verify_main_theorem, ScanParams, SpectrumTrace, ToleranceSchedule};
use qspec_core::surfaces::{CurveClass, SurfaceModel};
use qspec_core::{QspecError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{cache, svg, Common, OutFormat, ScanArgs, Suite};

/// Ranges of the bound checks run by `verify --suite appendix`.
const APPENDIX_R_MAX: usize = 3;
const APPENDIX_D_CLASS: i64 = 5;
const APPENDIX_D_ASYM: i64 = 8;
/// Random rays drawn by `verify --suite polygon`.
const POLYGON_RAYS: usize = 8;
const POLYGON_SEED: u64 = 20240611;

struct Ctx {
    surface: SurfaceModel,
    cap: i64,
    order: u32,
    cache: Option<PathBuf>,
}

impl Ctx {
    fn new(c: &Common) -> Result<Ctx> {
        if c.degree < 1 {
            return Err(QspecError::Config(format!("degree cap must be at least 1, got {}", c.degree)));
        }
        if c.order < 1 {
            return Err(QspecError::Config("t_p order must be at least 1".into()));
        }
        let surface = SurfaceModel::parse(&c.surface, c.blowups)?;
        let cache = if c.no_cache { None } else { Some(cache::resolve_dir(c.cache.as_deref())) };
        Ok(Ctx { surface, cap: c.degree, order: c.order, cache })
    }

    fn config(&self, extra: Value) -> Value {
        let mut v = json!({
            "surface": self.surface.descriptor(),
            "blowups": self.surface.r,
            "degree_cap": self.cap,
            "tp_order": self.order,
            "version": env!("CARGO_PKG_VERSION"),
        });
        if let (Some(base), Value::Object(more)) = (v.as_object_mut(), extra) {
            base.extend(more);
        }
        v
    }

    fn table(&self, s: &SurfaceModel) -> GwTable {
        cache::open_table(self.cache.as_deref(), s, self.cap)
    }

    /// A failed cache write only costs time later, so it is reported and ignored.
    fn save(&self, t: &GwTable) {
        if let Err(e) = cache::store_table(self.cache.as_deref(), t) {
            eprintln!("warning: could not write cache: {e}");
        }
    }

    fn k_matrix(&self, s: &SurfaceModel) -> Result<KMatrix> {
        let mut t = self.table(s);
        let p = Potential::new(&mut t, self.cap, self.order)?;
        self.save(&t);
        Ok(p.k_matrix())
    }

    fn potential(&self, s: &SurfaceModel) -> Result<Potential> {
        let mut t = self.table(s);
        let p = Potential::new(&mut t, self.cap, self.order)?;
        self.save(&t);
        Ok(p)
    }
}

/// Comma-separated list; parse errors report the position in the whole string.
fn parse_list<T>(s: &str, mut f: impl FnMut(&str) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let lead = part.len() - part.trim_start().len();
        match f(part.trim()) {
            Ok(v) => out.push(v),
            Err(QspecError::Parse { pos: p, msg }) => return Err(QspecError::Parse { pos: pos + lead + p, msg }),
            Err(e) => return Err(e),
        }
        pos += part.len() + 1;
    }
    Ok(out)
}

fn parse_class(s: &SurfaceModel, text: &str) -> Result<CurveClass> {
    let v = parse_list(text, |t| {
        t.parse::<i64>().map_err(|_| QspecError::Parse { pos: 0, msg: format!("not an integer: {t:?}") })
    })?;
    let m = s.m();
    if v.len() < m || v.len() > m + s.r {
        let pos = if v.len() < m { text.len() } else { text.match_indices(',').nth(m + s.r - 1).map_or(0, |(i, _)| i + 1) };
        return Err(QspecError::Parse {
            pos,
            msg: format!("{} expects {m} minimal-model entries and at most {} exceptional ones", s.key(), s.r),
        });
    }
    Ok(CurveClass::new(v[..m].to_vec(), v[m..].to_vec()).padded(s.r))
}

fn parse_ray(s: &SurfaceModel, text: Option<&str>) -> Result<Vec<Q>> {
    let n = s.ndiv();
    let nu = match text {
        None => vec![Q::from_integer(1.into()); n],
        Some(t) => parse_list(t, parse_rational)?,
    };
    if nu.len() != n {
        return Err(QspecError::Parse { pos: text.map_or(0, str::len), msg: format!("ray needs {n} entries, got {}", nu.len()) });
    }
    if let Some(i) = nu.iter().position(|x| *x <= Q::from_integer(0.into())) {
        return Err(QspecError::Domain(format!("ray entry {i} must be positive, got {}", rational_to_string(&nu[i]))));
    }
    Ok(nu)
}

fn parse_tp_mode(text: &str) -> Result<TpMode> {
    if text.trim().eq_ignore_ascii_case("generic") {
        Ok(TpMode::Generic)
    } else {
        Ok(TpMode::Value(parse_rational(text)?))
    }
}

fn mode_string(m: &TpMode) -> String {
    match m {
        TpMode::Generic => "generic".into(),
        TpMode::Value(v) => rational_to_string(v),
    }
}

fn ray_strings(nu: &[Q]) -> Vec<String> {
    nu.iter().map(rational_to_string).collect()
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    if let Some(dir) = p.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(p, text)?;
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn gw(c: &Common, class: &str, as_json: bool) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let cls = parse_class(&ctx.surface, class)?;
    let mut t = ctx.table(&ctx.surface);
    let v = t.invariant(&cls)?;
    ctx.save(&t);
    if as_json {
        let out = json!({
            "format": 1,
            "config": ctx.config(json!({})),
            "class": {"beta": cls.beta, "alpha": cls.alpha},
            "value": rational_to_string(&v),
        });
        print!("{}", pretty(&out));
    } else {
        println!("{v}");
    }
    Ok(true)
}

pub fn kmatrix(c: &Common, lowest: bool) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let k = ctx.k_matrix(&ctx.surface)?;
    if lowest {
        print!("{}", k.pretty_lowest());
    } else {
        print!("{}", pretty(&json!({"format": 1, "config": ctx.config(json!({})), "kmatrix": k.to_json()})));
    }
    Ok(true)
}

pub fn charpoly(c: &Common) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let k = ctx.k_matrix(&ctx.surface)?;
    let chi = char_poly(&k);
    print!("{}", pretty(&json!({"format": 1, "config": ctx.config(json!({})), "charpoly": chi.to_json()})));
    Ok(true)
}

struct PolygonOutcome {
    json: Value,
    svg: String,
    pass: bool,
}

/// Newton diagram along `nu`; for `r >= 1` also the minimal-model diagram
/// along the first `m` entries and the comparison with the blow-up law.
fn polygon_outcome(ctx: &Ctx, k: &KMatrix, k_min: Option<&KMatrix>, nu: &[Q], mode: &TpMode) -> Result<PolygonOutcome> {
    let blown = ray_char_poly(k, nu, mode)?.newton_polygon()?;
    let title = format!("{} along ({})", ctx.surface.key(), ray_strings(nu).join(", "));
    let diag = |d: &NewtonDiagram| serde_json::to_value(d).expect("diagram serializes");
    let mut out = json!({"ray": ray_strings(nu), "tp": mode_string(mode), "diagram": diag(&blown)});
    let Some(k_min) = k_min else {
        let svg = svg::polygon(&title, &blown.pairs, &blown.hull, None);
        out["pass"] = json!(blown.hull_certified);
        return Ok(PolygonOutcome { json: out, svg, pass: blown.hull_certified });
    };
    let min = ray_char_poly(k_min, &nu[..ctx.surface.m()], mode)?.newton_polygon()?;
    let law = verify_blowup_polygon(&min, &blown, ctx.surface.r as i64);
    let svg = svg::polygon(&title, &blown.pairs, &blown.hull, Some(&law.expected));
    out["minimal"] = diag(&min);
    out["law"] = serde_json::to_value(&law).expect("report serializes");
    out["pass"] = json!(law.pass);
    Ok(PolygonOutcome { json: out, svg, pass: law.pass })
}

fn minimal_k(ctx: &Ctx) -> Result<Option<KMatrix>> {
    if ctx.surface.r == 0 {
        Ok(None)
    } else {
        ctx.k_matrix(&ctx.surface.with_blowups(0)).map(Some)
    }
}

pub fn polygon(c: &Common, ray: Option<&str>, tp: &str, svg_path: Option<&Path>) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let nu = parse_ray(&ctx.surface, ray)?;
    let mode = parse_tp_mode(tp)?;
    let k = ctx.k_matrix(&ctx.surface)?;
    let k_min = minimal_k(&ctx)?;
    let o = polygon_outcome(&ctx, &k, k_min.as_ref(), &nu, &mode)?;
    if let Some(p) = svg_path {
        write_file(p, &o.svg)?;
    }
    let mut out = json!({"format": 1, "config": ctx.config(json!({}))});
    if let (Some(base), Value::Object(more)) = (out.as_object_mut(), o.json) {
        base.extend(more);
    }
    print!("{}", pretty(&out));
    Ok(o.pass)
}

struct ScanOutcome {
    trace: SpectrumTrace,
    minimal: Option<SpectrumTrace>,
    config: Value,
}

fn scan(ctx: &Ctx, a: &ScanArgs) -> Result<ScanOutcome> {
    let nu = parse_ray(&ctx.surface, a.ray.as_deref())?;
    let tp = parse_rational(&a.tp)?;
    let shift = a.shift.as_deref().map(parse_rational).transpose()?;
    let mut params = ScanParams::new(nu.iter().map(rational_to_f64).collect(), tp.clone(), a.qmin, a.qmax, a.samples);
    params.precise = !a.fast;
    // Validate the grid before any invariant is computed.
    params.grid()?;
    let minimal = match minimal_k(ctx)? {
        Some(k_min) => {
            let mut p = params.clone();
            p.nu.truncate(ctx.surface.m());
            Some(ray_scan(&k_min, &p, None)?)
        }
        None => None,
    };
    let k = ctx.k_matrix(&ctx.surface)?;
    let mut trace = ray_scan(&k, &params, minimal.as_ref())?;
    if let Some(s) = &shift {
        trace = trace.shifted(s);
    }
    let warnings: BTreeSet<&String> = trace.samples.iter().flat_map(|s| &s.warnings).collect();
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let config = ctx.config(json!({
        "ray": ray_strings(&nu),
        "tp": rational_to_string(&tp),
        "q_min": a.qmin,
        "q_max": a.qmax,
        "samples": a.samples,
        "shift": shift.as_ref().map(rational_to_string),
        "precise": !a.fast,
    }));
    Ok(ScanOutcome { trace, minimal, config })
}

fn spectrum_text(o: &ScanOutcome, fmt: OutFormat) -> String {
    match fmt {
        OutFormat::Csv => format!("# {}\n{}", o.config, o.trace.to_csv()),
        OutFormat::Json => {
            let mut v = o.trace.to_json();
            v["config"] = o.config.clone();
            pretty(&v)
        }
    }
}

pub fn spectrum(c: &Common, a: &ScanArgs, fmt: OutFormat, svg_path: Option<&Path>, output: Option<&Path>) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let o = scan(&ctx, a)?;
    if let Some(p) = svg_path {
        write_file(p, &svg::spectrum(&ctx.surface.key(), &o.trace))?;
    }
    emit(&spectrum_text(&o, fmt), output)?;
    Ok(true)
}

fn suite_entry(name: &str, pass: bool, report: Value, started: Instant) -> Value {
    json!({"suite": name, "pass": pass, "seconds": started.elapsed().as_secs_f64(), "report": report})
}

fn run_appendix() -> Result<Value> {
    let started = Instant::now();
    let reports = appendix_suite(APPENDIX_R_MAX, APPENDIX_D_CLASS, APPENDIX_D_ASYM)?;
    let pass = reports.iter().all(|r| r.pass);
    Ok(suite_entry("appendix", pass, reports.iter().map(|r| r.to_json()).collect(), started))
}

fn run_wdvv(ctx: &Ctx) -> Result<Value> {
    let started = Instant::now();
    let p = ctx.potential(&ctx.surface)?;
    let defects = p.associativity_defects();
    let labels = ctx.surface.basis_labels();
    let report: Vec<Value> = defects.iter().map(|&(i, j, k)| json!([labels[i], labels[j], labels[k]])).collect();
    Ok(suite_entry("wdvv", defects.is_empty(), json!({"defects": report}), started))
}

/// The law needs at least one blow-up; a minimal surface is checked with one.
fn law_surface(ctx: &Ctx) -> Ctx {
    let surface = if ctx.surface.r == 0 { ctx.surface.with_blowups(1) } else { ctx.surface.clone() };
    Ctx { surface, cap: ctx.cap, order: ctx.order, cache: ctx.cache.clone() }
}

fn run_polygon(ctx: &Ctx) -> Result<Value> {
    let started = Instant::now();
    let ctx = law_surface(ctx);
    let k = ctx.k_matrix(&ctx.surface)?;
    let k_min = minimal_k(&ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(POLYGON_SEED);
    let mut rays = vec![vec![Q::from_integer(1.into()); ctx.surface.ndiv()]];
    while rays.len() < POLYGON_RAYS {
        rays.push((0..ctx.surface.ndiv()).map(|_| Q::new(rng.random_range(1..=9).into(), rng.random_range(1..=4).into())).collect());
    }
    let mut results = Vec::new();
    let mut pass = true;
    for nu in &rays {
        let o = polygon_outcome(&ctx, &k, k_min.as_ref(), nu, &TpMode::Generic)?;
        pass &= o.pass;
        results.push(o.json);
    }
    Ok(suite_entry("polygon", pass, json!({"surface": ctx.surface.key(), "seed": POLYGON_SEED, "rays": results}), started))
}

fn theorem_entry(trace: &SpectrumTrace, minimal: &SpectrumTrace, started: Instant) -> Value {
    let report = verify_main_theorem(trace, minimal, &ToleranceSchedule::builtin());
    suite_entry("spectral", report.pass, serde_json::to_value(&report).expect("report serializes"), started)
}

fn run_spectral(ctx: &Ctx) -> Result<Value> {
    let started = Instant::now();
    let ctx = law_surface(ctx);
    let a = ScanArgs { ray: None, tp: "1/10".into(), qmin: 1e-6, qmax: 1e-1, samples: 26, shift: None, fast: false };
    let o = scan(&ctx, &a)?;
    let minimal = o.minimal.as_ref().ok_or_else(|| QspecError::Internal("missing minimal trace".into()))?;
    Ok(theorem_entry(&o.trace, minimal, started))
}

fn verify_report(ctx: &Ctx, suites: Vec<Value>) -> (Value, bool) {
    let pass = suites.iter().all(|s| s["pass"] == json!(true));
    (json!({"format": 1, "config": ctx.config(json!({})), "suites": suites, "pass": pass}), pass)
}

pub fn verify(c: &Common, suite: Suite, output: Option<&Path>) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    let mut suites = Vec::new();
    if matches!(suite, Suite::Appendix | Suite::All) {
        suites.push(run_appendix()?);
    }
    if matches!(suite, Suite::Wdvv | Suite::All) {
        suites.push(run_wdvv(&ctx)?);
    }
    if matches!(suite, Suite::Polygon | Suite::All) {
        suites.push(run_polygon(&ctx)?);
    }
    if matches!(suite, Suite::Spectral | Suite::All) {
        suites.push(run_spectral(&ctx)?);
    }
    for s in &suites {
        eprintln!("{}: {}", s["suite"].as_str().unwrap_or("?"), if s["pass"] == json!(true) { "pass" } else { "FAIL" });
    }
    let (report, pass) = verify_report(&ctx, suites);
    emit(&pretty(&report), output)?;
    Ok(pass)
}

pub fn cache_info(dir: Option<&Path>) -> Result<bool> {
    let dir = cache::resolve_dir(dir);
    let files = cache::list(&dir)?;
    println!("cache directory: {}", dir.display());
    if files.is_empty() {
        println!("no cached tables");
    }
    for f in files {
        println!("{}  {} entries  {}", f.path.display(), f.entries, f.header);
    }
    Ok(true)
}

pub fn cache_clear(dir: Option<&Path>) -> Result<bool> {
    let dir = cache::resolve_dir(dir);
    let n = cache::clear(&dir)?;
    println!("removed {n} cached table(s) from {}", dir.display());
    Ok(true)
}

/// Runs stages in order; after a failure later stages are recorded as skipped.
struct Stages {
    records: Vec<Value>,
    failed: Option<QspecError>,
}

impl Stages {
    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        if self.failed.is_some() {
            self.records.push(json!({"stage": name, "status": "skipped"}));
            return None;
        }
        let started = Instant::now();
        match f() {
            Ok(v) => {
                self.records.push(json!({"stage": name, "status": "ok", "seconds": started.elapsed().as_secs_f64()}));
                Some(v)
            }
            Err(e) => {
                eprintln!("stage {name} failed: {e}");
                self.records.push(json!({"stage": name, "status": "failed", "error": e.to_string()}));
                self.failed = Some(e);
                None
            }
        }
    }
}

fn with_header(config: &Value, key: &str, body: Value) -> String {
    pretty(&json!({"format": 1, "config": config, key: body}))
}

pub fn pipeline(c: &Common, a: &ScanArgs, polygon_tp: &str, out_dir: &Path) -> Result<bool> {
    let ctx = Ctx::new(c)?;
    std::fs::create_dir_all(out_dir)?;
    let config = ctx.config(json!({}));
    let mut st = Stages { records: Vec::new(), failed: None };
    let k = st.run("kmatrix", || {
        let k = ctx.k_matrix(&ctx.surface)?;
        write_file(&out_dir.join("kmatrix.json"), &with_header(&config, "kmatrix", k.to_json()))?;
        Ok(k)
    });
    st.run("charpoly", || {
        let chi = char_poly(k.as_ref().expect("kmatrix stage succeeded"));
        write_file(&out_dir.join("charpoly.json"), &with_header(&config, "charpoly", chi.to_json()))
    });
    let polygon = st.run("polygon", || {
        let nu = parse_ray(&ctx.surface, a.ray.as_deref())?;
        let mode = parse_tp_mode(polygon_tp)?;
        let k_min = minimal_k(&ctx)?;
        let o = polygon_outcome(&ctx, k.as_ref().expect("kmatrix stage succeeded"), k_min.as_ref(), &nu, &mode)?;
        write_file(&out_dir.join("polygon.json"), &with_header(&config, "polygon", o.json.clone()))?;
        write_file(&out_dir.join("polygon.svg"), &o.svg)?;
        Ok(o)
    });
    let spectrum = st.run("spectrum", || {
        let o = scan(&ctx, a)?;
        write_file(&out_dir.join("spectrum.csv"), &spectrum_text(&o, OutFormat::Csv))?;
        write_file(&out_dir.join("spectrum.svg"), &svg::spectrum(&ctx.surface.key(), &o.trace))?;
        Ok(o)
    });
    let verified = st.run("verify", || {
        let started = Instant::now();
        let poly = polygon.as_ref().expect("polygon stage succeeded");
        let mut suites = vec![run_wdvv(&ctx)?, suite_entry("polygon", poly.pass, poly.json.clone(), started)];
        let o = spectrum.as_ref().expect("spectrum stage succeeded");
        if let Some(minimal) = &o.minimal {
            suites.push(theorem_entry(&o.trace, minimal, Instant::now()));
        }
        let (report, pass) = verify_report(&ctx, suites);
        write_file(&out_dir.join("verify.json"), &pretty(&report))?;
        Ok(pass)
    });
    let summary = json!({"format": 1, "config": config, "stages": st.records, "pass": verified});
    write_file(&out_dir.join("pipeline.json"), &pretty(&summary))?;
    match st.failed {
        Some(e) => Err(e),
        None => Ok(verified.unwrap_or(false)),
    }
}
