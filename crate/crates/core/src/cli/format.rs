//! Deterministic rendering of command reports as aligned tables, CSV or JSON lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    JsonLines,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(Error::validation(
                "format",
                format!("must be table, csv or json-lines; got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Bool(bool),
    Text(String),
    /// Not applicable for this row.
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Number)
    }
}

/// Six significant digits in scientific notation with a lowercase `e`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // -0.0 prints as 0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.5e}")
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Number(x) => format_number(*x),
            Cell::Integer(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "na".into(),
        }
    }

    fn render_json(&self) -> String {
        match self {
            Cell::Number(x) if x.is_finite() => format_number(*x),
            Cell::Number(_) | Cell::Missing => "null".into(),
            Cell::Integer(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }
}

/// A table of named columns; the first column is the sweep variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Builds a one-row report from `(column, cell)` pairs.
    pub fn single(pairs: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) =
            pairs.into_iter().map(|(c, v)| (c.to_string(), v)).unzip();
        Report {
            columns,
            rows: vec![row],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Appends the rows of `other`, which must have the same columns.
    pub fn extend(&mut self, other: Report) {
        assert_eq!(self.columns, other.columns, "column schema");
        self.rows.extend(other.rows);
    }

    /// Puts a constant column in front of every row.
    pub fn prepend_column(&mut self, name: &str, value: Cell) {
        self.columns.insert(0, name.to_string());
        for row in &mut self.rows {
            row.insert(0, value.clone());
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::JsonLines => self.to_json_lines(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| {
                    format!(
                        "{}:{}",
                        serde_json::to_string(c).expect("strings serialize"),
                        v.render_json()
                    )
                })
                .collect();
            let _ = writeln!(out, "{{{}}}", fields.join(","));
        }
        out
    }

    /// Key/value listing for one row, aligned columns otherwise.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if self.rows.len() == 1 {
            let width = self.columns.iter().map(String::len).max().unwrap_or(0);
            for (c, v) in self.columns.iter().zip(&self.rows[0]) {
                let _ = writeln!(out, "{c:<width$}  {}", v.render());
            }
            return out;
        }
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                rendered
                    .iter()
                    .map(|r| r[j].len())
                    .chain([self.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&self.columns));
        for r in &rendered {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }

    /// Reads CSV written by [`Report::to_csv`]. Numbers come back as `Number`,
    /// `true`/`false` as `Bool`, `na` as `Missing`, anything else as `Text`.
    pub fn from_csv(text: &str) -> Result<Report> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing CSV header".into(),
        })?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let cells: Vec<Cell> = line
                .split(',')
                .map(|c| match c {
                    "na" => Cell::Missing,
                    "true" => Cell::Bool(true),
                    "false" => Cell::Bool(false),
                    _ => c
                        .parse::<f64>()
                        .map(Cell::Number)
                        .unwrap_or_else(|_| Cell::Text(c.into())),
                })
                .collect();
            if cells.len() != columns.len() {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("expected {} fields, got {}", columns.len(), cells.len()),
                });
            }
            rows.push(cells);
        }
        Ok(Report { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(561.2310), "5.61231e2");
        assert_eq!(format_number(-0.0), "0.00000e0");
        assert_eq!(format_number(4.1078e-2), "4.10780e-2");
        assert_eq!(format_number(1e6), "1.00000e6");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_round_trip() {
        let mut r = Report::new(&["energy_erg", "stable", "regime", "h"]);
        r.push(vec![1e6.into(), true.into(), "weak".into(), Cell::Missing]);
        r.push(vec![
            2e6.into(),
            false.into(),
            "strong".into(),
            3.5e-24.into(),
        ]);
        let back = Report::from_csv(&r.to_csv()).unwrap();
        assert_eq!(back.columns, r.columns);
        assert_eq!(back.to_csv(), r.to_csv());
    }

    #[test]
    fn json_lines_are_valid_json() {
        let r = Report::single(vec![
            ("nu", 561.2.into()),
            ("ok", true.into()),
            ("tag", "a\"b".into()),
            ("x", Cell::Missing),
        ]);
        let line = r.to_json_lines();
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["nu"], 561.2);
        assert_eq!(v["tag"], "a\"b");
        assert!(v["x"].is_null());
    }

    #[test]
    fn table_layouts() {
        let r = Report::single(vec![("nu_rad_s", 561.2.into()), ("stable", true.into())]);
        assert_eq!(r.to_table(), "nu_rad_s  5.61200e2\nstable    true\n");
        let mut m = Report::new(&["a", "b"]);
        m.push(vec![1.0.into(), 2.0.into()]);
        m.push(vec![3.0.into(), 4.0.into()]);
        assert_eq!(m.to_table().lines().count(), 3);
    }
}
