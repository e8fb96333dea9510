//! Dense real-matrix primitives: a row-major [`Matrix`], a one-sided Jacobi
//! SVD with a deterministic sign convention, Eckart–Young truncation and a
//! cyclic Jacobi eigensolver for symmetric matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Relative factor for the numerical rank cut-off: `sigma[0] * max(n, p) * RANK_EPS`.
pub const RANK_EPS: f64 = 1e-12;

/// Dense row-major matrix of finite `f64` values.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting empty shapes and
    /// non-finite entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::input(format!(
                "matrix must have at least one row and column, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * p);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {p}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n, p, data)
    }

    /// Builds a matrix from column vectors of equal length.
    pub(crate) fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self · rhs`. Panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Elementwise difference. Panics on shape mismatch.
    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Keeps the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        assert!(k <= self.cols);
        let mut out = Matrix::zeros(self.rows, k);
        for i in 0..self.rows {
            for j in 0..k {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn column_means(&self) -> Vec<f64> {
        let n = self.rows as f64;
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)]).sum::<f64>() / n)
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Thin singular value decomposition `X = U · diag(sigma) · V'`.
///
/// `u` is n×r, `v` is p×r with `r = min(n, p)`; `sigma` is nonincreasing.
/// `rank` counts singular values above `sigma[0] * max(n, p) * 1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
    pub rank: usize,
}

impl SvdResult {
    /// Assembles a decomposition from its factors and recounts the rank.
    pub fn from_parts(u: Matrix, sigma: Vec<f64>, v: Matrix) -> Result<Self> {
        let r = sigma.len();
        if u.cols() != r || v.cols() != r {
            return Err(Error::input(format!(
                "factor shapes {}x{} / {} / {}x{} are inconsistent",
                u.rows(),
                u.cols(),
                r,
                v.rows(),
                v.cols()
            )));
        }
        let rank = numerical_rank(&sigma, u.rows().max(v.rows()));
        Ok(SvdResult { u, sigma, v, rank })
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `U · diag(sigma) · V'` over all `r` components.
    pub fn reconstruct(&self) -> Matrix {
        truncated_product(self, self.len())
    }
}

fn numerical_rank(sigma: &[f64], max_dim: usize) -> usize {
    let top = sigma.first().copied().unwrap_or(0.0);
    let tol = top * max_dim as f64 * RANK_EPS;
    sigma.iter().filter(|&&s| s > tol).count()
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations, followed by
/// [`sign_normalize`].
pub fn svd(m: &Matrix) -> Result<SvdResult> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::input("svd of an empty matrix"));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::input("svd input contains non-finite entries"));
    }
    let raw = if m.rows() >= m.cols() {
        jacobi_tall(m)?
    } else {
        let t = jacobi_tall(&m.transpose())?;
        SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            rank: t.rank,
        }
    };
    Ok(sign_normalize(raw))
}

/// One-sided Jacobi for `rows >= cols`.
fn jacobi_tall(m: &Matrix) -> Result<SvdResult> {
    let (n, p) = m.shape();
    let mut a: Vec<Vec<f64>> = (0..p).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..p)
        .map(|j| (0..p).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = f64::EPSILON * (n as f64).sqrt();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let alpha = dot(&a[i], &a[i]);
                let beta = dot(&a[j], &a[j]);
                let gamma = dot(&a[i], &a[j]);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi SVD did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<f64> = a.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    // Stable sort keeps ties in original column order.
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let rank_tol = sigma[0] * n.max(p) as f64 * RANK_EPS;

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for (slot, &k) in order.iter().enumerate() {
        let candidate = if sigma[slot] > rank_tol {
            let inv = 1.0 / sigma[slot];
            let mut u: Vec<f64> = a[k].iter().map(|x| x * inv).collect();
            (orthonormalize_against(&mut u, &u_cols) > 0.5).then_some(u)
        } else {
            None
        };
        let u = match candidate {
            Some(u) => u,
            None => complete_basis(n, &u_cols),
        };
        u_cols.push(u);
    }
    let v_cols: Vec<Vec<f64>> = order.iter().map(|&k| v[k].clone()).collect();

    let rank = numerical_rank(&sigma, n.max(p));
    Ok(SvdResult {
        u: Matrix::from_columns(n, &u_cols),
        sigma,
        v: Matrix::from_columns(p, &v_cols),
        rank,
    })
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two passes of modified Gram–Schmidt against `basis`, then normalization.
/// Returns the norm retained before normalization (relative to the input norm 1).
fn orthonormalize_against(u: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let proj = dot(u, b);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
    let norm = dot(u, u).sqrt();
    if norm > 0.0 {
        for x in u.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Unit vector orthogonal to `basis`, taken from the standard basis vector
/// with the largest residual (lowest index on ties).
fn complete_basis(n: usize, basis: &[Vec<f64>]) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in 0..n {
        let mut u = vec![0.0; n];
        u[e] = 1.0;
        let kept = orthonormalize_against(&mut u, basis);
        if best.as_ref().is_none_or(|(b, _)| kept > *b) {
            best = Some((kept, u));
        }
    }
    best.expect("n >= 1").1
}

/// Flips each singular pair so that the largest-magnitude entry of the
/// `V` column is nonnegative (first index wins ties).
pub fn sign_normalize(mut s: SvdResult) -> SvdResult {
    for k in 0..s.len() {
        let mut pivot = 0;
        for i in 1..s.v.rows() {
            if s.v[(i, k)].abs() > s.v[(pivot, k)].abs() {
                pivot = i;
            }
        }
        if s.v[(pivot, k)] < 0.0 {
            for i in 0..s.v.rows() {
                s.v[(i, k)] = -s.v[(i, k)];
            }
            for i in 0..s.u.rows() {
                s.u[(i, k)] = -s.u[(i, k)];
            }
        }
    }
    s
}

fn truncated_product(s: &SvdResult, dims: usize) -> Matrix {
    let (n, p) = (s.u.rows(), s.v.rows());
    let mut out = Matrix::zeros(n, p);
    for k in 0..dims {
        let sk = s.sigma[k];
        for i in 0..n {
            let uik = s.u[(i, k)] * sk;
            if uik == 0.0 {
                continue;
            }
            for j in 0..p {
                out[(i, j)] += uik * s.v[(j, k)];
            }
        }
    }
    out
}

/// Best rank-`dims` approximation `U_(dims) · diag(sigma_(dims)) · V'_(dims)`.
pub fn low_rank_approx(s: &SvdResult, dims: usize) -> Result<Matrix> {
    if dims == 0 || dims > s.len() {
        return Err(Error::input(format!(
            "approximation rank {dims} outside 1..={}",
            s.len()
        )));
    }
    Ok(truncated_product(s, dims))
}

/// Eigendecomposition of a symmetric matrix: eigenvalues in nonincreasing
/// order, eigenvectors as the matching columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigensolver. Each eigenvector is oriented so its
/// largest-magnitude entry is nonnegative.
pub fn sym_eigen(m: &Matrix) -> Result<SymEigen> {
    let n = m.rows();
    if n == 0 || m.cols() != n {
        return Err(Error::input(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::input(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    let mut a = m.clone();
    let mut vecs = Matrix::identity(n);
    // Entries below this are rounding noise; a global off-norm test can stall on them.
    let tiny = f64::EPSILON * a.frobenius_norm() / n as f64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= tiny {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp - s * vkq;
                    vecs[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        let col = vecs.column(k);
        let pivot = (0..n).fold(0, |b, i| if col[i].abs() > col[b].abs() { i } else { b });
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, slot)] = sign * col[i];
        }
    }
    Ok(SymEigen { values, vectors })
}
