//! Plot-ready CSV tables with a `#` provenance header.

use std::fmt;
use std::io::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Floats carry 17 significant digits, enough to round-trip any `f64`.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(v) if v.is_nan() => "NaN".to_owned(),
            Cell::Float(v) if *v > 0.0 => "inf".to_owned(),
            Cell::Float(_) => "-inf".to_owned(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn parse(field: &str) -> Cell {
        if field.is_empty() {
            Cell::Empty
        } else if let Ok(v) = field.parse::<i64>() {
            Cell::Int(v)
        } else if let Ok(v) = field.parse::<f64>() {
            Cell::Float(v)
        } else {
            Cell::Text(field.to_owned())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("row has {got} fields, table has {want} columns")]
    Width { got: usize, want: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("table has no column line")]
    NoColumns,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    /// Provenance lines, written with a `# ` prefix.
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: vec![],
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), TableError> {
        if row.len() != self.columns.len() {
            return Err(TableError::Width {
                got: row.len(),
                want: self.columns.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Column line plus rows, without the provenance header.
    pub fn body(&self) -> Result<String, TableError> {
        let mut w = csv::WriterBuilder::new().from_writer(vec![]);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| TableError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_to(&self, out: &mut dyn Write) -> Result<(), TableError> {
        for line in &self.header {
            writeln!(out, "# {line}")?;
        }
        out.write_all(self.body()?.as_bytes())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let header = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.trim_start_matches('#').trim_start().to_owned())
            .collect();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if columns.is_empty() || columns.iter().all(String::is_empty) {
            return Err(TableError::NoColumns);
        }
        let mut table = Self {
            header,
            columns,
            rows: vec![],
        };
        for rec in r.records() {
            table.push(rec?.iter().map(Cell::parse).collect())?;
        }
        Ok(table)
    }
}

impl fmt::Display for ResultTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = vec![];
        self.write_to(&mut buf).map_err(|_| fmt::Error)?;
        f.write_str(&String::from_utf8_lossy(&buf))
    }
}
