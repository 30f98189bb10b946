//! Deterministic table output: CSV or JSON, 6 significant digits.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use persnorm::econ::CorrelationMatrix;
use persnorm::format::sig6;
use persnorm::Scalar;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv|json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => csv_escape(s),
            Cell::Num(x) => sig6(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(x) if x.is_finite() => sig6(*x).parse::<f64>().map(|v| json!(v)).unwrap_or(Value::Null),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => json!(i),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A rectangular table with a fixed column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// `{"columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let mut s = serde_json::to_string_pretty(&json!({ "columns": self.columns, "rows": rows }))
            .expect("serializable table");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Lower triangle Pearson, upper Spearman; first column holds row names.
    pub fn from_correlation<T: Scalar>(m: &CorrelationMatrix<T>) -> Self {
        let mut columns = vec![String::new()];
        columns.extend(m.names.iter().cloned());
        let mut t = Table::new(columns);
        for (i, name) in m.names.iter().enumerate() {
            let mut row = vec![Cell::from(name.as_str())];
            row.extend((0..m.len()).map(|j| Cell::Num(m.get(i, j).to_f64_lossy())));
            t.push(row);
        }
        t
    }
}

/// Writes `table` to `path` with the extension of `format`.
pub fn emit_table(table: &Table, format: Format, path: &Path) -> io::Result<PathBuf> {
    let path = path.with_extension(format.extension());
    fs::write(&path, table.render(format))?;
    Ok(path)
}

/// One emitted file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

/// The single writer for an output directory; records every file it writes.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    format: Format,
    entries: Vec<ManifestEntry>,
}

impl OutputDir {
    pub fn create(root: &Path, format: Format) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf(), format, entries: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes raw content under `name` (a bare file name).
    pub fn write_raw(&mut self, name: &str, content: &str) -> io::Result<PathBuf> {
        assert!(!name.contains(['/', '\\']), "flat file names only");
        let path = self.root.join(name);
        fs::write(&path, content)?;
        self.entries.push(ManifestEntry {
            file: name.to_string(),
            bytes: content.len() as u64,
            sha256: hex::encode(Sha256::digest(content.as_bytes())),
        });
        Ok(path)
    }

    /// Writes `table` as `<stem>.<csv|json>`.
    pub fn write_table(&mut self, stem: &str, table: &Table) -> io::Result<PathBuf> {
        let name = format!("{stem}.{}", self.format.extension());
        self.write_raw(&name, &table.render(self.format))
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    /// Writes `manifest.json` listing every file written so far, by name.
    pub fn finish(mut self) -> io::Result<Vec<ManifestEntry>> {
        self.entries.sort_by(|a, b| a.file.cmp(&b.file));
        let files: Vec<Value> =
            self.entries.iter().map(|e| json!({ "file": e.file, "bytes": e.bytes, "sha256": e.sha256 })).collect();
        let mut s = serde_json::to_string_pretty(&json!({ "files": files })).expect("manifest");
        s.push('\n');
        fs::write(self.root.join("manifest.json"), s)?;
        Ok(self.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use persnorm::econ::correlation_table;

    #[test]
    fn one_by_one_correlation_is_two_lines() {
        let m = correlation_table(&[("FIN1".to_string(), vec![1.0, 2.0, 3.0])]).unwrap();
        assert_eq!(Table::from_correlation(&m).to_csv(), ",FIN1\nFIN1,1\n");
    }

    #[test]
    fn formatting_and_escaping() {
        let mut t = Table::new(vec!["a".into(), "b,c".into(), "n".into(), "e".into()]);
        t.push(vec![Cell::Num(0.1234567), "x\"y".into(), Cell::Int(3), Cell::Empty]);
        t.push(vec![Cell::Num(f64::NAN), "z".into(), 2usize.into(), Cell::Num(1e7)]);
        assert_eq!(t.to_csv(), "a,\"b,c\",n,e\n0.123457,\"x\"\"y\",3,\nNaN,z,2,1e+07\n");
        let j: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(j["rows"][0][0], json!(0.123457));
        assert_eq!(j["rows"][1][0], Value::Null);
        assert_eq!(j["columns"][1], json!("b,c"));
    }

    #[test]
    fn emitting_twice_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(vec!["x".into()]);
        t.push(vec![Cell::Num(std::f64::consts::PI)]);
        let a = emit_table(&t, Format::Json, &dir.path().join("a")).unwrap();
        let b = emit_table(&t, Format::Json, &dir.path().join("b")).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }
}
