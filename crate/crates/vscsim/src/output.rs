//! Result files: CSV with a provenance comment line, and a whitespace
//! delimited plot-data format.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use vscsim_core::sim::{Cell, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cli-io: cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cli-io: line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Plain decimal for ordinary magnitudes, exponent form otherwise.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x.is_finite() && a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_number(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n', '\r']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

/// `# vscsim <version> config_hash=<hex> seed=<n>`
pub fn provenance_line(config_hash: &str, seed: u64) -> String {
    format!("# vscsim {VERSION} config_hash={config_hash} seed={seed}")
}

pub fn render_csv(table: &Table, provenance: &str) -> String {
    let mut s = String::new();
    writeln!(s, "{provenance}").unwrap();
    writeln!(s, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(csv_field).collect();
        writeln!(s, "{}", fields.join(",")).unwrap();
    }
    s
}

pub fn render_plot_data(table: &Table, provenance: &str) -> String {
    let mut s = String::new();
    writeln!(s, "{provenance}").unwrap();
    writeln!(s, "# {}", table.columns.join(" ")).unwrap();
    for row in &table.rows {
        let fields: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(x) => format!("{x:.8e}"),
                Cell::Int(i) => i.to_string(),
                Cell::Text(t) if t.is_empty() => "-".into(),
                Cell::Text(t) => t.split_whitespace().collect::<Vec<_>>().join("_"),
            })
            .collect();
        writeln!(s, "{}", fields.join(" ")).unwrap();
    }
    s
}

/// Parsed text table: header plus raw string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

fn split_csv_line(line: &str, n: usize) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(ch) = chars.next() {
        match (ch, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                chars.next();
                cur.push('"');
            }
            ('"', _) => quoted = !quoted,
            (',', false) => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    if quoted {
        return Err(format!("unterminated quote in record {n}"));
    }
    out.push(cur);
    Ok(out)
}

/// Reads CSV written by [`render_csv`]; comment lines are kept aside.
pub fn parse_csv(text: &str) -> Result<ParsedTable, OutputError> {
    let mut comments = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_csv_line(line, n).map_err(|msg| OutputError::Parse { line: n, msg })?;
        match &columns {
            None => columns = Some(fields),
            Some(cols) if cols.len() != fields.len() => {
                return Err(OutputError::Parse {
                    line: n,
                    msg: format!("expected {} fields, found {}", cols.len(), fields.len()),
                })
            }
            Some(_) => rows.push(fields),
        }
    }
    let columns = columns.ok_or(OutputError::Parse { line: 0, msg: "missing header".into() })?;
    Ok(ParsedTable { comments, columns, rows })
}

/// Reads plot data; the last comment line names the columns.
pub fn parse_plot_data(text: &str) -> Result<ParsedTable, OutputError> {
    let mut comments: Vec<String> = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix('#') {
            Some(c) => comments.push(c.trim().to_string()),
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let header = comments.pop().ok_or(OutputError::Parse { line: 1, msg: "missing column comment".into() })?;
    let columns: Vec<String> = header.split_whitespace().map(String::from).collect();
    let mut rows = Vec::new();
    for (i, line) in body.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<String> = line.split_whitespace().map(String::from).collect();
        if fields.len() != columns.len() {
            return Err(OutputError::Parse {
                line: comments.len() + 2 + i,
                msg: format!("expected {} fields, found {}", columns.len(), fields.len()),
            });
        }
        rows.push(fields);
    }
    Ok(ParsedTable { comments, columns, rows })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    let wrap = |source| OutputError::Write { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(wrap)?;
    }
    fs::write(path, contents).map_err(wrap)
}
