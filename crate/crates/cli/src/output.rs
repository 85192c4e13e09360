//! Tabular output, CSV/JSON rendering and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LMGLAB_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_g6(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Six significant digits in the style of C's `%g`.
pub fn format_g6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round to six significant digits first so the exponent reflects the rounded value.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        return format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A named table with a fixed column order.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(
            row.len(),
            self.columns.len(),
            "row width for table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| ((*c).to_owned(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Result of one command: tables plus what the manifest needs to know.
#[derive(Debug, Clone)]
pub struct Output {
    pub tables: Vec<Table>,
    /// Index of the table written in CSV mode.
    pub csv_table: usize,
    pub parameters: Value,
    pub seed: Option<u64>,
}

impl Output {
    pub fn single(table: Table, parameters: Value) -> Self {
        Self {
            tables: vec![table],
            csv_table: 0,
            parameters,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub command: String,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

/// Where the document goes: `--out`, else `$LMGLAB_OUT_DIR/<command>.<ext>`,
/// else stdout. Relative `--out` paths are resolved against the directory in
/// `$LMGLAB_OUT_DIR` when it is set.
pub fn resolve_target(out: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(format!("{command}.{}", format.extension()))),
        (None, None) => None,
    }
}

fn manifest_path(target: &Path) -> PathBuf {
    let mut name = target
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    target.with_file_name(name)
}

/// Renders `output` and writes it with its manifest.
pub fn emit(output: &Output, command: &str, format: Format, out: Option<&Path>) -> Result<()> {
    let target = resolve_target(out, command, format);
    let mut outputs = Vec::new();
    if let Some(t) = &target {
        outputs.push(t.display().to_string());
        outputs.push(manifest_path(t).display().to_string());
    }
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        command: command.to_owned(),
        parameters: output.parameters.clone(),
        seed: output.seed,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
        outputs,
    };
    let manifest_json = serde_json::to_value(&manifest)?;
    let body = match format {
        Format::Csv => output.tables[output.csv_table].to_csv(),
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("manifest".into(), manifest_json.clone());
            for t in &output.tables {
                doc.insert(t.name.into(), t.to_json());
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
            s.push('\n');
            s
        }
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            let mpath = manifest_path(&path);
            fs::write(&mpath, serde_json::to_string_pretty(&manifest_json)? + "\n")
                .with_context(|| format!("writing {}", mpath.display()))?;
            log::info!("wrote {} and {}", path.display(), mpath.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if format == Format::Csv {
                writeln!(lock, "# {}", serde_json::to_string(&manifest_json)?)?;
            }
            lock.write_all(body.as_bytes())?;
        }
    }
    Ok(())
}
