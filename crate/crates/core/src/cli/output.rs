use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::{CliError, Format, RunConfig};

pub const TOOL: &str = "parity-loqc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal; `inf`/`nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON value for `x`; non-finite values become strings.
pub fn json_num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

/// Tabular form of a result, written as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Provenance of the numeric columns, recorded in the sidecar.
    pub column_provenance: BTreeMap<String, String>,
    /// Non-tabular results recorded in the sidecar.
    pub summary: serde_json::Value,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn provenance(&mut self, column: &str, tag: &str) {
        self.column_provenance.insert(column.into(), tag.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
struct Header<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
}

/// One command's output ready to be written.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub json: serde_json::Value,
    pub table: Table,
    pub meta: serde_json::Value,
}

impl Artifact {
    pub fn new(rc: &RunConfig, body: serde_json::Value, table: Table) -> Self {
        let header = Header { tool: TOOL, version: VERSION, command: rc.command.name(), config: rc };
        let mut json = serde_json::to_value(&header).expect("serializable");
        json["result"] = body;
        let mut meta = serde_json::to_value(&header).expect("serializable");
        meta["columns"] = json!(table.header);
        meta["column_provenance"] = json!(table.column_provenance);
        if !table.summary.is_null() {
            meta["summary"] = table.summary.clone();
        }
        Self { json, table, meta }
    }

    fn pretty(v: &serde_json::Value) -> String {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => Self::pretty(&self.json),
        }
    }

    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    }

    /// Writes to `rc.out` (plus the sidecar for CSV) or to `stdout`.
    pub fn write(&self, rc: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
        let text = self.render(rc.format);
        let io = |p: &Path, e: std::io::Error| CliError::Config(format!("{}: {e}", p.display()));
        match &rc.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| io(path, e))?;
                if rc.format == Format::Csv {
                    let side = Self::sidecar_path(path);
                    std::fs::write(&side, Self::pretty(&self.meta)).map_err(|e| io(&side, e))?;
                }
            }
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("stdout: {e}")))?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(num(7.5), "7.5");
        assert_eq!(num(16.0), "16");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(json_num(f64::INFINITY), json!("inf"));
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "1".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1\n");
    }
}
