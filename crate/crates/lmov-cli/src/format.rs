//! Deterministic rendering of invariant tables and verification reports.
//!
//! Three encodings share one table model: JSON (exact arbitrary-precision
//! integer tokens, schema {"meta": {...}, "rows": [...]}), CSV with a
//! header row, and an aligned human table. Conventions everywhere:
//! half-integer charges travel as doubled integers, rationals as
//! "num/den", and a value that fails an integrality expectation is
//! emitted exactly and flagged, never rounded. JSON object keys are
//! alphabetical, so identical data serializes identically.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{Map, Number, Value};

use crate::verify::VerifyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// The fixed metadata header carried by every output.
#[derive(Clone, Debug)]
pub struct Meta {
    pub command: &'static str,
    pub tau: Option<i64>,
    pub orientation: Option<String>,
    pub seed: Option<u64>,
}

/// A computed value: integral results are plain integers, anything else
/// is an exact fraction the consumer is forced to notice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(BigInt),
    Frac(BigRational),
}

impl Cell {
    pub fn from_rational(r: &BigRational) -> Cell {
        if r.is_integer() {
            Cell::Int(r.to_integer())
        } else {
            Cell::Frac(r.clone())
        }
    }

    pub fn flagged(&self) -> bool {
        matches!(self, Cell::Frac(_))
    }

    fn text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Frac(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::Number(
                n.to_string()
                    .parse::<Number>()
                    .expect("integer literal is a valid JSON number"),
            ),
            Cell::Frac(_) => Value::String(self.text()),
        }
    }
}

/// One table entry.
#[derive(Clone, Debug)]
pub enum Field {
    /// Plain integer coordinate (m, l, g, r, p).
    Int(i64),
    /// Half-integer stored doubled; machine formats keep it doubled,
    /// the human format prints the exact half.
    Half(i64),
    Cell(Cell),
}

impl Field {
    fn flagged(&self) -> bool {
        matches!(self, Field::Cell(c) if c.flagged())
    }

    fn machine_text(&self) -> String {
        match self {
            Field::Int(v) | Field::Half(v) => v.to_string(),
            Field::Cell(c) => c.text(),
        }
    }

    fn pretty_text(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Half(v) => {
                if v % 2 == 0 {
                    (v / 2).to_string()
                } else {
                    format!("{v}/2")
                }
            }
            Field::Cell(c) => c.text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) | Field::Half(v) => Value::Number((*v).into()),
            Field::Cell(c) => c.json(),
        }
    }
}

/// Column with its machine key and its human header.
#[derive(Clone, Copy, Debug)]
pub struct Column {
    pub key: &'static str,
    pub pretty: &'static str,
}

pub const fn col(key: &'static str) -> Column {
    Column { key, pretty: key }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub meta: Meta,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Field>>,
}

fn meta_json(meta: &Meta) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(meta.command.into()));
    m.insert(
        "tau".into(),
        meta.tau.map_or(Value::Null, |t| Value::Number(t.into())),
    );
    m.insert(
        "orientation".into(),
        meta.orientation
            .as_ref()
            .map_or(Value::Null, |o| Value::String(o.clone())),
    );
    m.insert(
        "seed".into(),
        meta.seed.map_or(Value::Null, |s| Value::Number(s.into())),
    );
    Value::Object(m)
}

fn meta_comment_lines(meta: &Meta) -> String {
    let dash = |o: Option<String>| o.unwrap_or_else(|| "-".into());
    format!(
        "# command: {}\n# tau: {}\n# orientation: {}\n# seed: {}\n",
        meta.command,
        dash(meta.tau.map(|t| t.to_string())),
        dash(meta.orientation.clone()),
        dash(meta.seed.map(|s| s.to_string())),
    )
}

fn table_json(table: &Table) -> String {
    let mut root = Map::new();
    root.insert("meta".into(), meta_json(&table.meta));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (c, f) in table.columns.iter().zip(row) {
                obj.insert(c.key.into(), f.json());
            }
            obj.insert(
                "flagged".into(),
                Value::Bool(row.iter().any(Field::flagged)),
            );
            Value::Object(obj)
        })
        .collect();
    root.insert("rows".into(), Value::Array(rows));
    let mut s = serde_json::to_string(&Value::Object(root)).expect("in-memory serialization");
    s.push('\n');
    s
}

fn table_csv(table: &Table) -> String {
    let mut out = meta_comment_lines(&table.meta);
    let header: Vec<&str> = table.columns.iter().map(|c| c.key).collect();
    out.push_str(&header.join(","));
    out.push_str(",flagged\n");
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Field::machine_text).collect();
        out.push_str(&cells.join(","));
        out.push_str(if row.iter().any(Field::flagged) {
            ",true\n"
        } else {
            ",false\n"
        });
    }
    out
}

fn table_pretty(table: &Table) -> String {
    let mut out = meta_comment_lines(&table.meta);
    let any_flagged = table
        .rows
        .iter()
        .any(|row| row.iter().any(Field::flagged));
    let headers: Vec<String> = table.columns.iter().map(|c| c.pretty.to_string()).collect();
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(Field::pretty_text).collect())
        .collect();
    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let emit = |cells: &[String], widths: &[usize]| {
        let mut line = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&" ".repeat(w - cell.len()));
            line.push_str(cell);
        }
        line
    };
    out.push_str(&emit(&headers, &widths));
    out.push('\n');
    for (row, cells) in table.rows.iter().zip(&body) {
        out.push_str(&emit(cells, &widths));
        if row.iter().any(Field::flagged) {
            out.push_str("  [non-integral]");
        }
        out.push('\n');
    }
    if any_flagged {
        out.push_str("# warning: non-integral entries present\n");
    }
    out
}

pub fn render_table(table: &Table, fmt: Format) -> String {
    match fmt {
        Format::Json => table_json(table),
        Format::Csv => table_csv(table),
        Format::Pretty => table_pretty(table),
    }
}

pub fn render_reports(meta: &Meta, reports: &[VerifyReport], fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let mut root = Map::new();
            root.insert("meta".into(), meta_json(meta));
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| serde_json::to_value(r).expect("report serialization"))
                .collect();
            root.insert("rows".into(), Value::Array(rows));
            let mut s =
                serde_json::to_string(&Value::Object(root)).expect("in-memory serialization");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = meta_comment_lines(meta);
            out.push_str("suite,cases_run,skipped,failures,seed\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.suite,
                    r.cases_run,
                    r.skipped,
                    r.failures.len(),
                    r.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                ));
            }
            out
        }
        Format::Pretty => {
            let mut out = meta_comment_lines(meta);
            for r in reports {
                out.push_str(&format!(
                    "{}: {} ({} cases, {} skipped)\n",
                    r.suite,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.cases_run,
                    r.skipped,
                ));
                for f in &r.failures {
                    out.push_str(&format!("  {f}\n"));
                }
            }
            out
        }
    }
}

/// Inverse of the machine cell encoding: a plain integer or "num/den".
pub fn parse_cell(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        s.parse::<BigInt>().ok().map(BigRational::from_integer)
    }
}
