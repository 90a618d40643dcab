use std::fmt;

use serde_json::{json, Map, Value};

use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Int(i) => Some(*i as f64),
            Self::Num(x) => Some(*x),
            Self::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Self::Int(i) => json!(i),
            Self::Num(x) if x.is_finite() => json!(x),
            Self::Num(_) => Value::Null,
            Self::Text(s) => json!(s),
        }
    }

    /// Integers first, then floats, else text.
    fn parse(field: &str) -> Self {
        if let Ok(i) = field.parse::<i64>() {
            Self::Int(i)
        } else if let Ok(x) = field.parse::<f64>() {
            Self::Num(x)
        } else {
            Self::Text(field.to_string())
        }
    }
}

/// Floats carry 12 significant digits.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(i) => write!(f, "{i}"),
            Self::Num(x) if x.is_finite() => write!(f, "{x:.11e}"),
            Self::Num(x) => write!(f, "{x}"),
            Self::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Self::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

/// Named column-oriented result table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table `{}`", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column; text cells read as `NaN`.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Header plus one record per row, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(ToString::to_string)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    /// `{"metadata": {...}, "columns": [...], "data": {column: [...]}}`;
    /// non-finite numbers become `null`.
    pub fn to_json(&self, metadata: &Value) -> Value {
        let mut data = Map::new();
        for (i, c) in self.columns.iter().enumerate() {
            data.insert(c.clone(), Value::Array(self.rows.iter().map(|r| r[i].to_json()).collect()));
        }
        let mut meta = match metadata {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        };
        meta.insert("table".into(), json!(self.name));
        meta.insert("rows".into(), json!(self.rows.len()));
        json!({ "metadata": meta, "columns": self.columns, "data": data })
    }
}

/// Reads a table written by [`Table::to_csv`].
pub fn read_csv_table(name: &str, text: &str) -> Result<Table, Error> {
    let bad = |e: csv::Error| Error::Serialization(format!("table `{name}`: {e}"));
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
    if columns.is_empty() {
        return Err(Error::Serialization(format!("table `{name}`: missing header row")));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        rows.push(record.map_err(bad)?.iter().map(Cell::parse).collect());
    }
    Ok(Table { name: name.to_string(), columns, rows })
}
