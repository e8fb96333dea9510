//! Gamma-parameterized biplot factorization and its diagnostics.
//!
//! For the sign-normalized SVD `X = UΛV'` of the preprocessed matrix and a
//! retained dimension `s`, the markers are
//!
//! ```text
//! A = U_(s) Λ_(s)^γ        (row markers, one per case)
//! B = V_(s) Λ_(s)^(1-γ)    (column markers, one per variable)
//! ```
//!
//! so `A·B'` is the rank-`s` Eckart–Young approximation of `X` for every
//! `γ`. The choice of `γ` only decides which geometry is kept exact: row
//! distances for JK (`γ = 1`), column inner products for GH (`γ = 0`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{column_sds, DataTable, Labels, PreprocessRecord};
use crate::error::{Error, Result};
use crate::linalg::{low_rank_approx, svd, Matrix, SvdResult};

/// Number of axes drawn in a standard biplot.
pub const DEFAULT_DIMS: usize = 2;

/// Named factorizations. `Gamma` covers any other split in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiplotKind {
    /// Row metric preserving, `γ = 1`.
    Jk,
    /// Column metric preserving, `γ = 0`.
    Gh,
    /// Symmetric, `γ = 0.5`.
    Sqrt,
    Gamma,
}

impl BiplotKind {
    pub fn gamma(self) -> Option<f64> {
        match self {
            BiplotKind::Jk => Some(1.0),
            BiplotKind::Gh => Some(0.0),
            BiplotKind::Sqrt => Some(0.5),
            BiplotKind::Gamma => None,
        }
    }

    /// The named kind for a gamma value, or `Gamma` for anything else.
    pub fn for_gamma(gamma: f64) -> Self {
        if gamma == 1.0 {
            BiplotKind::Jk
        } else if gamma == 0.0 {
            BiplotKind::Gh
        } else if gamma == 0.5 {
            BiplotKind::Sqrt
        } else {
            BiplotKind::Gamma
        }
    }
}

impl fmt::Display for BiplotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BiplotKind::Jk => "jk",
            BiplotKind::Gh => "gh",
            BiplotKind::Sqrt => "sqrt",
            BiplotKind::Gamma => "gamma",
        })
    }
}

impl FromStr for BiplotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jk" => Ok(BiplotKind::Jk),
            "gh" => Ok(BiplotKind::Gh),
            "sqrt" => Ok(BiplotKind::Sqrt),
            other => Err(Error::input(format!(
                "unknown biplot type '{other}' (expected jk, gh or sqrt)"
            ))),
        }
    }
}

/// A fitted biplot. Immutable; all diagnostics read from it.
#[derive(Debug, Clone)]
pub struct BiplotModel {
    gamma: f64,
    dims: usize,
    row_markers: Matrix,
    col_markers: Matrix,
    preprocess: PreprocessRecord,
    labels: Labels,
    fitted: Matrix,
    svd: SvdResult,
}

impl BiplotModel {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kind(&self) -> BiplotKind {
        BiplotKind::for_gamma(self.gamma)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// `A`, n×s.
    pub fn row_markers(&self) -> &Matrix {
        &self.row_markers
    }

    /// `B`, p×s.
    pub fn col_markers(&self) -> &Matrix {
        &self.col_markers
    }

    pub fn sigma_retained(&self) -> &[f64] {
        &self.svd.sigma[..self.dims]
    }

    pub fn sigma_all(&self) -> &[f64] {
        &self.svd.sigma
    }

    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    pub fn preprocess(&self) -> &PreprocessRecord {
        &self.preprocess
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// The preprocessed matrix the model was fitted on.
    pub fn fitted(&self) -> &Matrix {
        &self.fitted
    }

    pub fn svd(&self) -> &SvdResult {
        &self.svd
    }

    /// Share of total squared singular values carried by each retained axis.
    pub fn axis_shares(&self) -> Vec<f64> {
        let total: f64 = self.svd.sigma.iter().map(|s| s * s).sum();
        self.sigma_retained()
            .iter()
            .map(|s| if total > 0.0 { s * s / total } else { 0.0 })
            .collect()
    }
}

/// Fits `X ≅ A·B'` with `A = U_(s)Λ^γ`, `B = V_(s)Λ^(1-γ)`.
///
/// `x` must already be preprocessed; the engine does not re-center.
pub fn fit_biplot(
    x: &Matrix,
    gamma: f64,
    dims: usize,
    labels: Labels,
    preprocess: PreprocessRecord,
) -> Result<BiplotModel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::input(format!("gamma {gamma} outside [0, 1]")));
    }
    if labels.rows.len() != x.rows() || labels.cols.len() != x.cols() {
        return Err(Error::input(format!(
            "{} row / {} column labels for a {}x{} matrix",
            labels.rows.len(),
            labels.cols.len(),
            x.rows(),
            x.cols()
        )));
    }
    let s = svd(x)?;
    if dims == 0 || dims > s.rank {
        return Err(Error::input(format!(
            "dims {dims} outside 1..={} (numerical rank)",
            s.rank
        )));
    }
    let mut a = s.u.leading_columns(dims);
    let mut b = s.v.leading_columns(dims);
    for k in 0..dims {
        let row_w = s.sigma[k].powf(gamma);
        let col_w = s.sigma[k].powf(1.0 - gamma);
        for i in 0..a.rows() {
            a[(i, k)] *= row_w;
        }
        for j in 0..b.rows() {
            b[(j, k)] *= col_w;
        }
    }
    Ok(BiplotModel {
        gamma,
        dims,
        row_markers: a,
        col_markers: b,
        preprocess,
        labels,
        fitted: x.clone(),
        svd: s,
    })
}

/// Row metric preserving biplot (`γ = 1`).
pub fn jk(x: &Matrix, dims: usize, labels: Labels, pre: PreprocessRecord) -> Result<BiplotModel> {
    fit_biplot(x, 1.0, dims, labels, pre)
}

/// Column metric preserving biplot (`γ = 0`).
pub fn gh(x: &Matrix, dims: usize, labels: Labels, pre: PreprocessRecord) -> Result<BiplotModel> {
    fit_biplot(x, 0.0, dims, labels, pre)
}

/// Symmetric biplot (`γ = 0.5`).
pub fn sqrt_biplot(
    x: &Matrix,
    dims: usize,
    labels: Labels,
    pre: PreprocessRecord,
) -> Result<BiplotModel> {
    fit_biplot(x, 0.5, dims, labels, pre)
}

/// Quality of representation of each row, each column and overall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub qr_rows: Vec<f64>,
    pub qr_cols: Vec<f64>,
    pub qr_overall: f64,
    pub residual_frobenius: f64,
}

/// Squared-cosine quality of representation.
///
/// For row `i`, the share of `‖x_i‖² = Σ_k (σ_k u_ik)²` carried by the
/// retained axes; columns likewise with `v_jk`. A row or column with zero
/// norm is represented exactly and gets quality 1.
pub fn quality(model: &BiplotModel, x: &Matrix) -> Result<QualityReport> {
    if x.shape() != model.fitted.shape() {
        return Err(Error::input(format!(
            "quality: matrix is {}x{}, model was fitted on {}x{}",
            x.rows(),
            x.cols(),
            model.fitted.rows(),
            model.fitted.cols()
        )));
    }
    if *x != model.fitted {
        return Err(Error::input(
            "quality: matrix differs from the one the model was fitted on",
        ));
    }
    let s = &model.svd;
    let dims = model.dims;
    let floor = (f64::EPSILON * x.frobenius_norm()).powi(2);
    let share = |factor: &Matrix, i: usize| {
        let (mut kept, mut rest) = (0.0, 0.0);
        for k in 0..s.len() {
            let c = (s.sigma[k] * factor[(i, k)]).powi(2);
            if k < dims {
                kept += c;
            } else {
                rest += c;
            }
        }
        let total = kept + rest;
        if total <= floor {
            1.0
        } else {
            kept / total
        }
    };
    let qr_rows = (0..x.rows()).map(|i| share(&s.u, i)).collect();
    let qr_cols = (0..x.cols()).map(|j| share(&s.v, j)).collect();

    let sq: Vec<f64> = s.sigma.iter().map(|v| v * v).collect();
    let kept: f64 = sq[..dims].iter().sum();
    let total = kept + sq[dims..].iter().sum::<f64>();
    let qr_overall = if total > 0.0 { kept / total } else { 1.0 };

    let residual_frobenius = x.sub(&reconstruct(model)).frobenius_norm();
    Ok(QualityReport {
        qr_rows,
        qr_cols,
        qr_overall,
        residual_frobenius,
    })
}

/// `A·B'`, the rank-`s` approximation of the fitted matrix.
pub fn reconstruct(model: &BiplotModel) -> Matrix {
    model.row_markers.matmul(&model.col_markers.transpose())
}

/// Marker cosine matrix; `None` where a column marker has zero length.
pub type Cosines = Vec<Vec<Option<f64>>>;

/// Cosines of the angles between column markers, approximating the
/// correlations between variables.
pub fn column_cosines(model: &BiplotModel) -> Cosines {
    let b = &model.col_markers;
    let lengths = column_lengths(model);
    let longest = lengths.iter().cloned().fold(0.0, f64::max);
    let degenerate = |l: f64| l <= longest * 1e-12 || l == 0.0;
    let p = b.rows();
    (0..p)
        .map(|j| {
            (0..p)
                .map(|l| {
                    if degenerate(lengths[j]) || degenerate(lengths[l]) {
                        None
                    } else if j == l {
                        Some(1.0)
                    } else {
                        let d: f64 = b.row(j).iter().zip(b.row(l)).map(|(x, y)| x * y).sum();
                        Some((d / (lengths[j] * lengths[l])).clamp(-1.0, 1.0))
                    }
                })
                .collect()
        })
        .collect()
}

/// Length of each column marker `‖b_j‖`.
pub fn column_lengths(model: &BiplotModel) -> Vec<f64> {
    (0..model.col_markers.rows())
        .map(|j| norm(model.col_markers.row(j)))
        .collect()
}

/// Euclidean distances between row markers.
pub fn row_distances(model: &BiplotModel) -> Matrix {
    pairwise_distances(&model.row_markers)
}

/// Euclidean distances between the rows of `m`.
pub fn pairwise_distances(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let dist = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            d[(i, j)] = dist;
            d[(j, i)] = dist;
        }
    }
    d
}

/// Signed length of the perpendicular projection of row marker `a_i` onto
/// the direction of column marker `b_j`. Multiplied by `‖b_j‖` it gives the
/// approximated entry `x̂_ij`. `None` when `b_j` has zero length.
pub fn projection(model: &BiplotModel, row: usize, col: usize) -> Option<f64> {
    let a = model.row_markers.row(row);
    let b = model.col_markers.row(col);
    let len = norm(b);
    (len > 0.0).then(|| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / len)
}

/// Principal component scores `X·V_(s)` of a column-centered matrix.
pub fn pca_scores(x: &Matrix, dims: usize) -> Result<Matrix> {
    let scale = x.max_abs().max(1.0);
    if x.column_means().iter().any(|m| m.abs() > 1e-8 * scale) {
        return Err(Error::input("pca_scores requires a column-centered matrix"));
    }
    let s = svd(x)?;
    if dims == 0 || dims > s.rank {
        return Err(Error::input(format!(
            "dims {dims} outside 1..={} (numerical rank)",
            s.rank
        )));
    }
    Ok(x.matmul(&s.v.leading_columns(dims)))
}

/// Sample Pearson correlation matrix of the table's columns.
pub fn pearson(t: &DataTable) -> Result<Matrix> {
    pearson_matrix(t.values()).map_err(|j| {
        Error::input(format!(
            "column '{}' is constant; correlation undefined",
            t.col_labels()[j]
        ))
    })
}

/// Correlations of the columns of `x`; `Err(j)` names a constant column.
pub(crate) fn pearson_matrix(x: &Matrix) -> std::result::Result<Matrix, usize> {
    let means = x.column_means();
    let sds = column_sds(x, &means);
    if let Some(j) = sds.iter().position(|&s| s <= 0.0) {
        return Err(j);
    }
    let (n, p) = x.shape();
    let mut r = Matrix::identity(p);
    for j in 0..p {
        for l in j + 1..p {
            let cov: f64 = (0..n)
                .map(|i| (x[(i, j)] - means[j]) * (x[(i, l)] - means[l]))
                .sum::<f64>()
                / (n as f64 - 1.0);
            let c = (cov / (sds[j] * sds[l])).clamp(-1.0, 1.0);
            r[(j, l)] = c;
            r[(l, j)] = c;
        }
    }
    Ok(r)
}

/// Largest entrywise gap between `A·B'` and the direct rank-`s` truncation.
pub fn truncation_error(model: &BiplotModel) -> Result<f64> {
    let direct = low_rank_approx(&model.svd, model.dims)?;
    Ok(direct.sub(&reconstruct(model)).max_abs())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
