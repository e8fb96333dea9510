//! Labeled indicator tables: CSV parsing, centering / standardization and
//! the three embedded case-study tables.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::linalg::Matrix;

/// Row and column labels of a table, carried along with fitted models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

/// Labeled n×p table: rows are cases, columns are variables.
///
/// Always has `n >= 3`, `p >= 2`, unique labels on each axis and finite
/// values.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    name: String,
    labels: Labels,
    values: Matrix,
}

impl DataTable {
    pub fn new(
        name: impl Into<String>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: Matrix,
    ) -> Result<Self> {
        let (n, p) = values.shape();
        if n < 3 || p < 2 {
            return Err(Error::input(format!(
                "table needs at least 3 rows and 2 columns, got {n}x{p}"
            )));
        }
        if row_labels.len() != n || col_labels.len() != p {
            return Err(Error::input(format!(
                "{} row labels and {} column labels for a {n}x{p} table",
                row_labels.len(),
                col_labels.len()
            )));
        }
        check_unique(&row_labels, "row")?;
        check_unique(&col_labels, "column")?;
        Ok(DataTable {
            name: name.into(),
            labels: Labels {
                rows: row_labels,
                cols: col_labels,
            },
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_rows(&self) -> usize {
        self.values.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.cols()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn row_labels(&self) -> &[String] {
        &self.labels.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.labels.cols
    }

    pub fn labels(&self) -> Labels {
        self.labels.clone()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.labels.rows.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.labels.cols.iter().position(|l| l == label)
    }

    /// Serializes to the CSV layout accepted by [`parse_table`]. The table
    /// name goes in the (otherwise ignored) top-left header cell, and
    /// values use the shortest representation that parses back exactly.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let header =
            std::iter::once(self.name.as_str()).chain(self.labels.cols.iter().map(String::as_str));
        // Writing into a Vec cannot fail.
        w.write_record(header).expect("in-memory csv");
        for (i, label) in self.labels.rows.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend(self.values.row(i).iter().map(|v| format!("{v}")));
            w.write_record(&rec).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 labels")
    }
}

fn check_unique(labels: &[String], axis: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, l) in labels.iter().enumerate() {
        if !seen.insert(l.as_str()) {
            return Err(Error::input(format!(
                "duplicate {axis} label '{l}' at {axis} {}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Parses a CSV table: a header row (first cell ignored, remaining cells are
/// column labels) followed by rows of `label, v1, ..., vp`.
///
/// Errors name the 1-based line and column of the first offending cell.
pub fn parse_table(source: &str, name: &str) -> Result<DataTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());
    let mut records = rdr.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| Error::input(format!("line 1: {e}")))?,
        None => return Err(Error::input("empty table: missing header row")),
    };
    let col_labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let p = col_labels.len();
    if let Some(j) = col_labels.iter().position(String::is_empty) {
        return Err(Error::input(format!(
            "line 1: column {} has an empty label",
            j + 2
        )));
    }

    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for (idx, rec) in records.enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(|e| Error::input(format!("line {line}: {e}")))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != p + 1 {
            return Err(Error::input(format!(
                "line {line} (row '{}'): {} fields, expected {}",
                rec.get(0).unwrap_or(""),
                rec.len(),
                p + 1
            )));
        }
        let label = rec.get(0).unwrap_or("").to_owned();
        if label.is_empty() {
            return Err(Error::input(format!("line {line}: empty row label")));
        }
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let v = cell
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Error::input(format!(
                        "line {line} (row '{label}'), column {} ('{}'): '{cell}' is not a finite number",
                        j + 2,
                        col_labels[j]
                    ))
                })?;
            data.push(v);
        }
        row_labels.push(label);
    }

    let n = row_labels.len();
    if n < 3 || p < 2 {
        return Err(Error::input(format!(
            "table needs at least 3 rows and 2 columns, got {n}x{p}"
        )));
    }
    let values = Matrix::from_row_major(n, p, data)?;
    DataTable::new(name, row_labels, col_labels, values)
}

/// Returns the top-left header cell of a CSV source, if non-empty.
pub fn corner_label(source: &str) -> Option<String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());
    let rec = rdr.records().next()?.ok()?;
    rec.get(0).filter(|s| !s.is_empty()).map(str::to_owned)
}

/// Column preprocessing applied before factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    None,
    Center,
    #[default]
    Zscore,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::None => "none",
            Scale::Center => "center",
            Scale::Zscore => "zscore",
        })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Scale::None),
            "center" => Ok(Scale::Center),
            "zscore" => Ok(Scale::Zscore),
            other => Err(Error::input(format!(
                "unknown scaling '{other}' (expected none, center or zscore)"
            ))),
        }
    }
}

/// What [`preprocess`] did, so the transform can be audited and replayed.
///
/// `means` are always recorded; `sds` (sample, divisor n−1) only for
/// [`Scale::Zscore`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessRecord {
    pub mode: Scale,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl PreprocessRecord {
    /// Replays the recorded transform on a table of matching width.
    pub fn apply(&self, t: &DataTable) -> Result<Matrix> {
        let x = t.values();
        if self.means.len() != x.cols()
            || (self.mode == Scale::Zscore && self.sds.len() != x.cols())
        {
            return Err(Error::input(format!(
                "preprocess record is for {} columns, table has {}",
                self.means.len(),
                x.cols()
            )));
        }
        let mut out = x.clone();
        if self.mode == Scale::None {
            return Ok(out);
        }
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let mut v = x[(i, j)] - self.means[j];
                if self.mode == Scale::Zscore {
                    v /= self.sds[j];
                }
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// Sample standard deviation (divisor n−1) of each column.
pub fn column_sds(x: &Matrix, means: &[f64]) -> Vec<f64> {
    let n = x.rows() as f64;
    (0..x.cols())
        .map(|j| {
            let ss: f64 = (0..x.rows()).map(|i| (x[(i, j)] - means[j]).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        })
        .collect()
}

/// Centers (and for `Zscore` also scales to unit sample sd) each column.
pub fn preprocess(t: &DataTable, mode: Scale) -> Result<(Matrix, PreprocessRecord)> {
    let x = t.values();
    let means = x.column_means();
    let sds = if mode == Scale::Zscore {
        let sds = column_sds(x, &means);
        if let Some(j) = sds.iter().position(|&s| s <= 0.0) {
            return Err(Error::input(format!(
                "column '{}' is constant and cannot be standardized",
                t.col_labels()[j]
            )));
        }
        sds
    } else {
        Vec::new()
    };
    let record = PreprocessRecord { mode, means, sds };
    let m = record.apply(t)?;
    Ok((m, record))
}

/// Loads one of the embedded case tables:
///
/// 1. European countries, 21×8 R&D and bibliometric indicators
/// 2. Top 25 universities, 4 ranking scores
/// 3. Twelve scientific fields, 6 normalized bibliometric indicators
pub fn load_case(id: u8) -> Result<DataTable> {
    let (name, csv) = match id {
        1 => (fixtures::CASE1_NAME, fixtures::CASE1_CSV),
        2 => (fixtures::CASE2_NAME, fixtures::CASE2_CSV),
        3 => (fixtures::CASE3_NAME, fixtures::CASE3_CSV),
        other => {
            return Err(Error::input(format!(
                "unknown case {other} (expected 1, 2 or 3)"
            )))
        }
    };
    parse_table(csv, name)
}
