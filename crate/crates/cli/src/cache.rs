//! On-disk invariant tables, one file per surface.

use std::path::{Path, PathBuf};

use qspec_core::gw::{load_cache, save_cache, GwTable};
use qspec_core::surfaces::SurfaceModel;
use qspec_core::{QspecError, Result};

pub const ENV_VAR: &str = "QSPEC_CACHE";
const SUFFIX: &str = ".gw.jsonl";

/// Cache directory: `--cache`, then `$QSPEC_CACHE`, then the user cache dir.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(p);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("qspec")
}

pub fn file_for(dir: &Path, s: &SurfaceModel) -> PathBuf {
    let name: String = s.key().chars().map(|c| if c.is_ascii_alphanumeric() || c == '=' { c } else { '_' }).collect();
    dir.join(format!("{name}{SUFFIX}"))
}

/// Table for `s` at degree cap `cap`, seeded from the cache when a valid
/// file exists. Unusable files are reported and ignored.
pub fn open_table(dir: Option<&Path>, s: &SurfaceModel, cap: i64) -> GwTable {
    let mut t = GwTable::new(s.clone(), cap);
    let Some(dir) = dir else {
        return t;
    };
    let path = file_for(dir, s);
    if !path.exists() {
        return t;
    }
    match load_cache(&path, s) {
        Ok(cached) => {
            for (c, v) in cached.entries() {
                t.insert_entry(c.clone(), v.clone());
            }
        }
        Err(e) => eprintln!("warning: ignoring cache {}: {e}", path.display()),
    }
    t
}

pub fn store_table(dir: Option<&Path>, t: &GwTable) -> Result<()> {
    match dir {
        Some(dir) => save_cache(t, &file_for(dir, t.surface())),
        None => Ok(()),
    }
}

pub struct CacheFile {
    pub path: PathBuf,
    pub header: String,
    pub entries: usize,
}

pub fn list(dir: &Path) -> Result<Vec<CacheFile>> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(SUFFIX))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default().to_string();
        let entries = lines.filter(|l| !l.trim().is_empty()).count();
        out.push(CacheFile { path, header, entries });
    }
    Ok(out)
}

/// Removes cache files (only those this tool writes). Returns the count.
pub fn clear(dir: &Path) -> Result<usize> {
    let files = list(dir)?;
    for f in &files {
        std::fs::remove_file(&f.path).map_err(QspecError::from)?;
    }
    Ok(files.len())
}
