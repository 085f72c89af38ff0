//! Newline-delimited JSON persistence of a [`GwTable`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

use super::{EngineOptions, GwTable};
use crate::error::{QspecError, Result};
use crate::rings::{parse_rational, rational_to_string};
use crate::surfaces::{CurveClass, SurfaceModel};

pub const CACHE_FORMAT: u64 = 1;

/// Writes the header and one record per stored entry, sorted for determinism.
pub fn save_cache(t: &GwTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    let header = json!({"surface": t.surface().key(), "D": t.cap(), "format": CACHE_FORMAT});
    writeln!(w, "{header}")?;
    let mut entries: Vec<_> = t.entries().collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    for (c, v) in entries {
        let rec = json!({"class": {"beta": c.beta, "alpha": c.alpha}, "value": rational_to_string(v)});
        writeln!(w, "{rec}")?;
    }
    w.flush()?;
    Ok(())
}

/// Loads a table for `surface`. A header for a different surface or format
/// is a [`QspecError::CacheInvalid`]; an unreadable record reports its
/// 1-based line number.
pub fn load_cache(path: &Path, surface: &SurfaceModel) -> Result<GwTable> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| QspecError::CacheInvalid("empty cache file".into()))?;
    let header: Value = serde_json::from_str(&header?)
        .map_err(|e| QspecError::CacheCorrupt { line: 1, msg: e.to_string() })?;
    if header["format"].as_u64() != Some(CACHE_FORMAT) {
        return Err(QspecError::CacheInvalid(format!("unsupported format {}", header["format"])));
    }
    let key = header["surface"].as_str().unwrap_or_default();
    if key != surface.key() {
        return Err(QspecError::CacheInvalid(format!("cache is for {key:?}, expected {:?}", surface.key())));
    }
    let cap = header["D"]
        .as_i64()
        .ok_or_else(|| QspecError::CacheCorrupt { line: 1, msg: "missing degree cap".into() })?;
    let mut table = GwTable::with_options(surface.clone(), cap, EngineOptions::default());
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let corrupt = |msg: String| QspecError::CacheCorrupt { line: line_no, msg };
        let rec: Value = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
        let class: CurveClass =
            serde_json::from_value(rec["class"].clone()).map_err(|e| corrupt(format!("bad class: {e}")))?;
        let value = rec["value"].as_str().ok_or_else(|| corrupt("missing value".into()))?;
        let value = parse_rational(value).map_err(|e| corrupt(e.to_string()))?;
        table.insert_entry(class.normalize(), value);
    }
    Ok(table)
}
