//! Comparison maps: PCA scores, classical (Torgerson) MDS and
//! correspondence analysis with symmetric principal-coordinate scaling.

use crate::biplot::pca_scores;
use crate::data::{preprocess, DataTable, Scale};
use crate::error::{Error, Result};
use crate::linalg::{svd, sym_eigen, Matrix};

/// Column means differing by more than this factor trigger the mixed-unit
/// warning on correspondence analysis.
const MIXED_UNIT_RATIO: f64 = 100.0;

/// Classical MDS embedding.
#[derive(Debug, Clone)]
pub struct MdsEmbedding {
    /// n×k coordinates, k ≤ requested dims.
    pub coords: Matrix,
    /// Eigenvalues of the double-centered matrix for the kept axes.
    pub eigenvalues: Vec<f64>,
    /// Dropped share of the positive eigenvalue mass.
    pub strain: f64,
    /// Set when fewer than the requested dims had positive eigenvalues.
    pub truncated: bool,
}

impl MdsEmbedding {
    pub fn dims(&self) -> usize {
        self.coords.cols()
    }
}

/// Torgerson scaling: eigendecomposition of `B = -½·H·D²·H`, coordinates
/// are the top eigenvectors scaled by the square roots of their eigenvalues.
pub fn classical_mds(d: &Matrix, dims: usize) -> Result<MdsEmbedding> {
    let n = d.rows();
    if n == 0 || d.cols() != n {
        return Err(Error::input(format!(
            "distance matrix must be square, got {}x{}",
            d.rows(),
            d.cols()
        )));
    }
    if dims == 0 {
        return Err(Error::input("MDS needs at least one dimension"));
    }
    let scale = d.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..n {
        if d[(i, i)].abs() > 1e-12 * scale {
            return Err(Error::input(format!(
                "distance matrix has nonzero diagonal at {i}"
            )));
        }
        for j in 0..n {
            if d[(i, j)] < 0.0 {
                return Err(Error::input(format!("negative distance at ({i}, {j})")));
            }
            if (d[(i, j)] - d[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::input(format!(
                    "distance matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    // B = -1/2 H D² H, written out as double centering of the squared distances.
    let mut sq = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sq[(i, j)] = d[(i, j)] * d[(i, j)];
        }
    }
    let row_means: Vec<f64> = (0..n)
        .map(|i| sq.row(i).iter().sum::<f64>() / n as f64)
        .collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand);
        }
    }
    // Symmetrize away rounding before the eigensolver's symmetry check.
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }

    let eig = sym_eigen(&b)?;
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let tol = top * n as f64 * 1e-12;
    let positive: Vec<f64> = eig.values.iter().copied().filter(|&v| v > tol).collect();
    let kept = dims.min(positive.len());

    let mut coords = Matrix::zeros(n, kept);
    for k in 0..kept {
        let w = positive[k].sqrt();
        for i in 0..n {
            coords[(i, k)] = eig.vectors[(i, k)] * w;
        }
    }
    let total: f64 = positive.iter().sum();
    let retained: f64 = positive[..kept].iter().sum();
    let strain = if total > 0.0 {
        (total - retained) / total
    } else {
        0.0
    };
    Ok(MdsEmbedding {
        coords,
        eigenvalues: positive[..kept].to_vec(),
        strain,
        truncated: kept < dims,
    })
}

/// Correspondence analysis solution in symmetric (principal) scaling.
#[derive(Debug, Clone)]
pub struct CaModel {
    pub row_coords: Matrix,
    pub col_coords: Matrix,
    /// Principal inertias `σ_k²` of the retained axes.
    pub inertias: Vec<f64>,
    /// Sum of all principal inertias, equal to χ² / grand total.
    pub total_inertia: f64,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    pub warnings: Vec<String>,
}

/// CA of a nonnegative table via the SVD of the standardized residuals
/// `S = D_r^{-1/2} (P - r c') D_c^{-1/2}`.
pub fn correspondence_analysis(t: &DataTable, dims: usize) -> Result<CaModel> {
    let x = t.values();
    let (n, p) = x.shape();
    for i in 0..n {
        for j in 0..p {
            if x[(i, j)] < 0.0 {
                return Err(Error::input(format!(
                    "correspondence analysis needs nonnegative entries; row '{}', column '{}' is {}",
                    t.row_labels()[i],
                    t.col_labels()[j],
                    x[(i, j)]
                )));
            }
        }
    }
    let total: f64 = x.as_slice().iter().sum();
    let row_masses: Vec<f64> = (0..n)
        .map(|i| x.row(i).iter().sum::<f64>() / total)
        .collect();
    let col_masses: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| x[(i, j)]).sum::<f64>() / total)
        .collect();
    if let Some(i) = row_masses.iter().position(|&m| m <= 0.0) {
        return Err(Error::input(format!(
            "row '{}' sums to zero",
            t.row_labels()[i]
        )));
    }
    if let Some(j) = col_masses.iter().position(|&m| m <= 0.0) {
        return Err(Error::input(format!(
            "column '{}' sums to zero",
            t.col_labels()[j]
        )));
    }
    let max_axes = n.min(p) - 1;
    if dims == 0 || dims > max_axes {
        return Err(Error::input(format!(
            "CA dims {dims} outside 1..={max_axes} for a {n}x{p} table"
        )));
    }

    let mut s = Matrix::zeros(n, p);
    for i in 0..n {
        for j in 0..p {
            let expected = row_masses[i] * col_masses[j];
            s[(i, j)] = (x[(i, j)] / total - expected) / expected.sqrt();
        }
    }
    let dec = svd(&s)?;

    let mut row_coords = Matrix::zeros(n, dims);
    let mut col_coords = Matrix::zeros(p, dims);
    for k in 0..dims {
        let sk = dec.sigma[k];
        for i in 0..n {
            row_coords[(i, k)] = dec.u[(i, k)] * sk / row_masses[i].sqrt();
        }
        for j in 0..p {
            col_coords[(j, k)] = dec.v[(j, k)] * sk / col_masses[j].sqrt();
        }
    }

    let mut warnings = Vec::new();
    let means = x.column_means();
    let (lo, hi) = means.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &m| {
        (lo.min(m), hi.max(m))
    });
    if lo > 0.0 && hi / lo > MIXED_UNIT_RATIO {
        warnings.push(format!(
            "column scales differ by a factor of {:.0}; chi-square distances are dominated by \
             the large-valued columns, so the map mixes units",
            hi / lo
        ));
    }

    Ok(CaModel {
        row_coords,
        col_coords,
        inertias: dec.sigma[..dims].iter().map(|v| v * v).collect(),
        total_inertia: dec.sigma.iter().map(|v| v * v).sum(),
        row_masses,
        col_masses,
        warnings,
    })
}

/// PCA map: z-score the table, then project onto the leading components.
pub fn pca_map(t: &DataTable, dims: usize) -> Result<Matrix> {
    let (x, _) = preprocess(t, Scale::Zscore)?;
    pca_scores(&x, dims)
}
