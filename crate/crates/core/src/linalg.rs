//! Dense row-major vectors and matrices, plus the handful of kernels the
//! regression and classification code needs.
//!
//! Everything is `f64`. There is no BLAS and no sparse storage; the largest
//! design matrices this crate deals with (tens of thousands of rows, a few
//! hundred one-hot columns) fit comfortably in memory.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot tolerance for the Cholesky factorization. A pivot at or
/// below `SPD_PIVOT_RTOL * max_i |A_ii|` is treated as non-positive.
pub const SPD_PIVOT_RTOL: f64 = 1e-12;

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Parameter(format!(
            "{what} has a non-finite entry at position {i}"
        ))),
        None => Ok(()),
    }
}

/// An owned vector of finite `f64` values.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_finite(&values, "vector")?;
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest absolute entry, 0 for the empty vector.
    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.0)
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    // Crate-internal constructor for values already known to be finite.
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl Deref for DenseVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// A row-major matrix of finite `f64` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        check_finite(&values, "matrix")?;
        Ok(Self { rows, cols, values })
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        Self { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact panics on a zero chunk size
        let cols = self.cols.max(1);
        self.values
            .chunks_exact(cols)
            .take(if self.cols == 0 { 0 } else { self.rows })
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.values[j * self.rows + i] = self.values[i * self.cols + j];
            }
        }
        out
    }

    /// New matrix holding the listed rows, in the listed order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self::from_vec_unchecked(indices.len(), self.cols, values)
    }

    /// Appends a column of ones on the right.
    pub fn with_ones_column(&self) -> Self {
        let cols = self.cols + 1;
        let mut values = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            values.extend_from_slice(self.row(i));
            values.push(1.0);
        }
        Self::from_vec_unchecked(self.rows, cols, values)
    }

    /// `AᵀA`, computed on the upper triangle and mirrored so the result is
    /// exactly symmetric.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = vec![0.0; n * n];
        for row in self.row_iter() {
            for a in 0..n {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                let out = &mut g[a * n..(a + 1) * n];
                for b in a..n {
                    out[b] += ra * row[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                g[a * n + b] = g[b * n + a];
            }
        }
        Self::from_vec_unchecked(n, n, g)
    }

    /// `Aᵀx`.
    pub fn t_matvec(&self, x: &[f64]) -> Result<DenseVector> {
        if x.len() != self.rows {
            return Err(Error::Dimension(format!(
                "transpose product needs {} entries, got {}",
                self.rows,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (row, &xi) in self.row_iter().zip(x) {
            axpy(xi, row, &mut out);
        }
        Ok(DenseVector(out))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.values[i * self.cols + j]
    }
}

/// Σ aᵢbᵢ.
pub fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "dot of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dot_unchecked(a, b))
}

#[inline]
pub(crate) fn dot_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// y += alpha·x
#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Standard matrix-vector product `Ax`.
pub fn matvec(a: &DenseMatrix, x: &[f64]) -> Result<DenseVector> {
    if a.cols != x.len() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix times vector of length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    Ok(DenseVector(
        a.row_iter().map(|row| dot_unchecked(row, x)).collect(),
    ))
}

/// Solves `Ax = b` for symmetric positive definite `A` via Cholesky.
///
/// No jitter is added. A pivot at or below [`SPD_PIVOT_RTOL`] times the
/// largest diagonal entry yields [`Error::Singular`] carrying its index.
pub fn solve_spd(a: &DenseMatrix, b: &[f64]) -> Result<DenseVector> {
    let n = a.rows;
    if a.cols != n {
        return Err(Error::Dimension(format!(
            "solve_spd needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "solve_spd: matrix is {n}x{n}, right-hand side has length {}",
            b.len()
        )));
    }
    let scale = (0..n).fold(0.0_f64, |m, i| m.max(a.get(i, i).abs()));
    for i in 0..n {
        for j in 0..i {
            if (a.get(i, j) - a.get(j, i)).abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::Parameter(format!(
                    "solve_spd: matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    // Lower-triangular factor, row-major.
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut pivot = a.get(j, j);
        for k in 0..j {
            pivot -= l[j * n + k] * l[j * n + k];
        }
        if !(pivot > SPD_PIVOT_RTOL * scale) {
            return Err(Error::Singular { pivot: j });
        }
        let d = pivot.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }

    let mut x = cholesky_solve(&l, n, b);
    // One round of iterative refinement tightens the residual on
    // ill-conditioned systems.
    let r: Vec<f64> = a
        .row_iter()
        .zip(b)
        .map(|(row, &bi)| bi - dot_unchecked(row, &x))
        .collect();
    let dx = cholesky_solve(&l, n, &r);
    axpy(1.0, &dx, &mut x);
    Ok(DenseVector(x))
}

// Forward substitution Lz = b, then back substitution Lᵀx = z.
fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; n];
    for i in 0..n {
        let s = b[i] - dot_unchecked(&l[i * n..i * n + i], &z[..i]);
        z[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}
