//! Versioned output records and their CSV / JSON encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One table cell. Non-finite numbers are stored as `Missing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Missing(Option<()>),
}

impl Cell {
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Missing(None)
        }
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing(None), Cell::num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(n) => Some(*n as f64),
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing(_) => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(n.into())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    /// Header labels, units in parentheses.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub command: String,
    pub inputs_echo: serde_json::Value,
    pub conventions: Vec<String>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl OutputRecord {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serialises");
        s.push('\n');
        s
    }

    /// Comment lines (`#`) carry the command, conventions and notes; each table
    /// follows as a header row plus data rows, tables separated by a blank line.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "# schema_version: {}", self.schema_version)?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# inputs: {}", self.inputs_echo)?;
        for c in &self.conventions {
            writeln!(out, "# convention: {c}")?;
        }
        for n in &self.notes {
            writeln!(out, "# note: {n}")?;
        }
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            writeln!(out, "# table: {}", t.name)?;
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&t.columns)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

/// Parses the CSV encoding back into tables, numbers where they parse.
pub fn parse_csv_tables(text: &str) -> Vec<Table> {
    let mut tables = Vec::new();
    let mut current: Option<Table> = None;
    let mut block = String::new();
    let flush = |current: &mut Option<Table>, block: &mut String, tables: &mut Vec<Table>| {
        if let Some(mut t) = current.take() {
            let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(block.as_bytes());
            t.columns = r
                .headers()
                .map(|h| h.iter().map(str::to_string).collect())
                .unwrap_or_default();
            for rec in r.records().map_while(|r| r.ok()) {
                t.rows.push(
                    rec.iter()
                        .map(|f| match (f.parse::<i64>(), f.parse::<f64>()) {
                            (Ok(n), _) => Cell::Int(n),
                            (_, Ok(x)) => Cell::Num(x),
                            _ if f.is_empty() => Cell::Missing(None),
                            _ => Cell::Text(f.to_string()),
                        })
                        .collect(),
                );
            }
            tables.push(t);
        }
        block.clear();
    };
    for line in text.lines() {
        if let Some(name) = line.strip_prefix("# table: ") {
            flush(&mut current, &mut block, &mut tables);
            current = Some(Table::new(name, &[]));
        } else if line.starts_with('#') || line.is_empty() {
            continue;
        } else if current.is_some() {
            block.push_str(line);
            block.push('\n');
        }
    }
    flush(&mut current, &mut block, &mut tables);
    tables
}
