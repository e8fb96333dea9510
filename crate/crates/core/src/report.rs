//! Serializable analysis reports.
//!
//! Reports serialize to key-sorted JSON. Floats are written in their
//! shortest round-trip form, so parsing a report back yields bit-identical
//! numbers.

use serde::{Deserialize, Serialize};

use crate::biplot::{
    column_cosines, fit_biplot, pearson, quality, BiplotKind, BiplotModel, Cosines, QualityReport,
};
use crate::data::{preprocess, DataTable, PreprocessRecord, Scale};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// QR below this produces a "poorly represented" warning.
pub const LOW_QUALITY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodInfo {
    pub kind: BiplotKind,
    pub gamma: f64,
    pub dims: usize,
}

/// Everything produced by one biplot analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub dataset: DatasetInfo,
    pub preprocess: PreprocessRecord,
    pub method: MethodInfo,
    pub singular_values: Vec<f64>,
    pub row_markers: Vec<Vec<f64>>,
    pub col_markers: Vec<Vec<f64>>,
    pub quality: QualityReport,
    /// Pearson correlations of the raw columns.
    pub correlations: Vec<Vec<f64>>,
    /// Column-marker cosines; `null` where undefined.
    pub cosines: Cosines,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Map is a BTreeMap unless `preserve_order` is enabled,
    // so going through Value sorts every object's keys.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Assembles a report, checking that every piece describes the same model.
pub fn build_report(
    dataset_name: &str,
    model: &BiplotModel,
    quality: &QualityReport,
    correlations: &Matrix,
    cosines: &Cosines,
    warnings: Vec<String>,
) -> Result<AnalysisReport> {
    let labels = model.labels();
    let (n, p) = (labels.rows.len(), labels.cols.len());
    if quality.qr_rows.len() != n || quality.qr_cols.len() != p {
        return Err(Error::input(format!(
            "quality report covers {}x{} but the model is {n}x{p}",
            quality.qr_rows.len(),
            quality.qr_cols.len()
        )));
    }
    if correlations.shape() != (p, p) {
        return Err(Error::input(format!(
            "correlation matrix is {}x{}, expected {p}x{p}",
            correlations.rows(),
            correlations.cols()
        )));
    }
    if cosines.len() != p || cosines.iter().any(|r| r.len() != p) {
        return Err(Error::input(format!("cosine matrix must be {p}x{p}")));
    }
    Ok(AnalysisReport {
        dataset: DatasetInfo {
            name: dataset_name.to_owned(),
            n_rows: n,
            n_cols: p,
            row_labels: labels.rows.clone(),
            col_labels: labels.cols.clone(),
        },
        preprocess: model.preprocess().clone(),
        method: MethodInfo {
            kind: model.kind(),
            gamma: model.gamma(),
            dims: model.dims(),
        },
        singular_values: model.sigma_all().to_vec(),
        row_markers: model.row_markers().to_rows(),
        col_markers: model.col_markers().to_rows(),
        quality: quality.clone(),
        correlations: correlations.to_rows(),
        cosines: cosines.clone(),
        warnings,
    })
}

/// Warnings about undefined cosines and poorly represented rows/columns.
pub fn diagnostic_warnings(
    model: &BiplotModel,
    quality: &QualityReport,
    cosines: &Cosines,
) -> Vec<String> {
    let labels = model.labels();
    let mut out = Vec::new();
    for (j, row) in cosines.iter().enumerate() {
        if row[j].is_none() {
            out.push(format!(
                "column '{}' has a zero-length marker; its cosines are undefined",
                labels.cols[j]
            ));
        }
    }
    for (label, q) in labels.cols.iter().zip(&quality.qr_cols) {
        if *q < LOW_QUALITY {
            out.push(format!(
                "column '{label}' is poorly represented (QR {q:.3})"
            ));
        }
    }
    for (label, q) in labels.rows.iter().zip(&quality.qr_rows) {
        if *q < LOW_QUALITY {
            out.push(format!("row '{label}' is poorly represented (QR {q:.3})"));
        }
    }
    out
}

/// A complete biplot analysis of one table.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub matrix: Matrix,
    pub model: BiplotModel,
    pub quality: QualityReport,
    pub report: AnalysisReport,
}

/// Preprocess, fit, assess and report in one step.
pub fn analyze(t: &DataTable, gamma: f64, dims: usize, scale: Scale) -> Result<Analysis> {
    let (x, record) = preprocess(t, scale)?;
    let model = fit_biplot(&x, gamma, dims, t.labels(), record)?;
    let q = quality(&model, &x)?;
    let correlations = pearson(t)?;
    let cosines = column_cosines(&model);
    let warnings = diagnostic_warnings(&model, &q, &cosines);
    let report = build_report(t.name(), &model, &q, &correlations, &cosines, warnings)?;
    Ok(Analysis {
        matrix: x,
        model,
        quality: q,
        report,
    })
}

/// Report for a non-biplot comparison map (PCA, MDS or CA).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub method: String,
    pub dataset: DatasetInfo,
    pub row_coords: Vec<Vec<f64>>,
    /// Column coordinates (CA only).
    pub col_coords: Option<Vec<Vec<f64>>>,
    /// Per-axis variance, eigenvalue or inertia for the kept axes.
    pub axis_values: Vec<f64>,
    /// Share of total variance / eigenvalue mass / inertia on the kept axes.
    pub share: f64,
    pub warnings: Vec<String>,
}

impl BaselineReport {
    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }
}

pub fn dataset_info(t: &DataTable) -> DatasetInfo {
    DatasetInfo {
        name: t.name().to_owned(),
        n_rows: t.n_rows(),
        n_cols: t.n_cols(),
        row_labels: t.row_labels().to_vec(),
        col_labels: t.col_labels().to_vec(),
    }
}
