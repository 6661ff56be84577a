use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Bumped whenever the column set or its meaning changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 12] = [
    "schema_version",
    "experiment_id",
    "command",
    "generator",
    "seed",
    "n",
    "d",
    "alpha_measured",
    "selected_size",
    "measured_value",
    "oracle_optimum",
    "wall_time_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment_id: String,
    pub command: String,
    pub generator: String,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    /// Fraction of good tuples, in `[0, 1]`.
    pub alpha_measured: f64,
    pub selected_size: usize,
    /// Volume or diameter of the selection, or the LP value.
    pub measured_value: Option<f64>,
    pub oracle_optimum: Option<f64>,
    pub wall_time_ms: Option<f64>,
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.11e}", x);
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let v = format!("{:.*}", decimals, x);
        if v.contains('.') {
            v.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            v
        }
    } else {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

impl ResultRow {
    pub fn fields(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(fmt12).unwrap_or_default();
        vec![
            CSV_SCHEMA_VERSION.to_string(),
            self.experiment_id.clone(),
            self.command.clone(),
            self.generator.clone(),
            self.seed.to_string(),
            self.n.to_string(),
            self.d.to_string(),
            fmt12(self.alpha_measured),
            self.selected_size.to_string(),
            opt(self.measured_value),
            opt(self.oracle_optimum),
            opt(self.wall_time_ms),
        ]
    }
}

/// Writes through a temporary file in the target directory and renames
/// it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Appends rows to a CSV file, writing the header when the file is new.
/// The whole file is rewritten atomically.
pub fn append_rows(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
    };
    {
        let mut w = csv::WriterBuilder::new().from_writer(&mut bytes);
        if w.get_ref().is_empty() {
            w.write_record(CSV_COLUMNS)?;
        }
        for r in rows {
            w.write_record(r.fields())?;
        }
        w.flush()?;
    }
    write_atomic(path, &bytes)
}
