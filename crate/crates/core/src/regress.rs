//! Least-squares regression: the closed-form simple fit, multiple and
//! polynomial regression through the normal equations, the residual sum of
//! squares objective with its R² fit statistic, and the ridge and lasso
//! penalized variants.
//!
//! Ridge and lasso work on centered data so the intercept is never
//! penalized. Both assume the caller has standardized `X`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, solve_spd, DenseMatrix, DenseVector};

/// Denominators below this count as zero for degenerate-input checks.
const DEGENERATE_EPS: f64 = 1e-12;

/// Default lasso stopping threshold on the largest per-sweep coefficient change.
pub const LASSO_TOL: f64 = 1e-8;
/// Default cap on lasso coordinate-descent sweeps.
pub const LASSO_MAX_SWEEPS: usize = 10_000;

/// `ŷ = intercept + X·coefficients`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub intercept: f64,
    pub coefficients: DenseVector,
    /// False only when an iterative fit (lasso) hit its sweep cap.
    pub converged: bool,
    /// Coordinate-descent sweeps used; 0 for closed-form fits.
    pub iterations: usize,
}

impl LinearModel {
    pub fn new(intercept: f64, coefficients: Vec<f64>) -> Result<Self> {
        if !intercept.is_finite() {
            return Err(Error::Parameter("intercept is not finite".into()));
        }
        Ok(Self {
            intercept,
            coefficients: DenseVector::new(coefficients)?,
            converged: true,
            iterations: 0,
        })
    }

    pub fn predict(&self, x: &DenseMatrix) -> Result<DenseVector> {
        let mut y = linalg::matvec(x, &self.coefficients)?.into_vec();
        y.iter_mut().for_each(|v| *v += self.intercept);
        Ok(DenseVector::from_vec_unchecked(y))
    }
}

/// Residual sum of squares and coefficient of determination of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitStat {
    pub lsr: f64,
    pub r_squared: f64,
}

impl FitStat {
    pub fn evaluate(m: &LinearModel, x: &DenseMatrix, y: &[f64]) -> Result<Self> {
        Ok(Self {
            lsr: lsr_objective(m, x, y)?,
            r_squared: r_squared(m, x, y)?,
        })
    }
}

/// JSON shape of a fitted regression model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub feature_names: Vec<String>,
    pub fit: FitStat,
}

impl RegressionReport {
    pub fn new(
        m: &LinearModel,
        feature_names: Vec<String>,
        x: &DenseMatrix,
        y: &[f64],
    ) -> Result<Self> {
        if feature_names.len() != m.coefficients.len() {
            return Err(Error::Dimension(format!(
                "{} names for {} coefficients",
                feature_names.len(),
                m.coefficients.len()
            )));
        }
        Ok(Self {
            intercept: m.intercept,
            coefficients: m.coefficients.to_vec(),
            feature_names,
            fit: FitStat::evaluate(m, x, y)?,
        })
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn check_rows(x: &DenseMatrix, y: &[f64]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::Dimension(format!(
            "{} rows in X but {} targets",
            x.rows(),
            y.len()
        )));
    }
    Ok(())
}

/// One-predictor least squares:
/// slope = Σ(yᵢ−ȳ)(xᵢ−x̄) / Σ(xᵢ−x̄)², intercept = ȳ − slope·x̄.
pub fn fit_simple(x: &[f64], y: &[f64]) -> Result<LinearModel> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "x has {} points, y has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Parameter(
            "simple regression needs at least 2 points".into(),
        ));
    }
    let (xm, ym) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (b - ym) * (a - xm)).sum();
    let sxx: f64 = x.iter().map(|a| (a - xm) * (a - xm)).sum();
    if sxx < DEGENERATE_EPS {
        return Err(Error::DegeneratePredictor);
    }
    let slope = sxy / sxx;
    LinearModel::new(ym - slope * xm, vec![slope])
}

/// Ordinary least squares with an intercept, via the normal equations
/// `[X|1]ᵀ[X|1]β = [X|1]ᵀy`.
pub fn fit_multiple(x: &DenseMatrix, y: &[f64]) -> Result<LinearModel> {
    check_rows(x, y)?;
    if x.rows() < x.cols() + 1 {
        return Err(Error::Parameter(format!(
            "{} rows cannot determine {} coefficients and an intercept",
            x.rows(),
            x.cols()
        )));
    }
    let aug = x.with_ones_column();
    let normal = aug.gram();
    let rhs = aug.t_matvec(y)?;
    let beta = solve_spd(&normal, &rhs).map_err(|e| match e {
        Error::Singular { pivot } => Error::Multicollinear { pivot },
        other => other,
    })?;
    let mut coef = beta.into_vec();
    let intercept = coef.pop().expect("augmented system has an intercept");
    LinearModel::new(intercept, coef)
}

/// Columns `x, x², …, x^degree`.
pub fn polynomial_features(x: &[f64], degree: usize) -> Result<DenseMatrix> {
    if degree == 0 {
        return Err(Error::Parameter(
            "polynomial degree must be at least 1".into(),
        ));
    }
    let mut values = Vec::with_capacity(x.len() * degree);
    for &xi in x {
        let mut p = 1.0;
        for _ in 0..degree {
            p *= xi;
            values.push(p);
        }
    }
    DenseMatrix::new(x.len(), degree, values)
}

/// Σ (yᵢ − ŷᵢ)².
pub fn lsr_objective(m: &LinearModel, x: &DenseMatrix, y: &[f64]) -> Result<f64> {
    check_rows(x, y)?;
    let pred = m.predict(x)?;
    Ok(y.iter()
        .zip(pred.iter())
        .map(|(a, p)| (a - p) * (a - p))
        .sum())
}

/// 1 − SSE/SST with SST taken about ȳ.
pub fn r_squared(m: &LinearModel, x: &DenseMatrix, y: &[f64]) -> Result<f64> {
    check_rows(x, y)?;
    if y.is_empty() {
        return Err(Error::DegenerateTarget);
    }
    let ym = mean(y);
    let sst: f64 = y.iter().map(|v| (v - ym) * (v - ym)).sum();
    if sst < DEGENERATE_EPS {
        return Err(Error::DegenerateTarget);
    }
    Ok(1.0 - lsr_objective(m, x, y)? / sst)
}

struct Centered {
    /// Column-major centered design: column j is `xc[j*n..(j+1)*n]`.
    cols: Vec<f64>,
    x_means: Vec<f64>,
    y: Vec<f64>,
    y_mean: f64,
    n: usize,
    d: usize,
}

fn center(x: &DenseMatrix, y: &[f64]) -> Result<Centered> {
    check_rows(x, y)?;
    let (n, d) = (x.rows(), x.cols());
    if n == 0 {
        return Err(Error::Dimension("no rows to fit".into()));
    }
    let y_mean = mean(y);
    let mut cols = x.transpose().into_vec();
    let mut x_means = Vec::with_capacity(d);
    for col in cols.chunks_exact_mut(n) {
        let m = mean(col);
        col.iter_mut().for_each(|v| *v -= m);
        x_means.push(m);
    }
    Ok(Centered {
        cols,
        x_means,
        y: y.iter().map(|v| v - y_mean).collect(),
        y_mean,
        n,
        d,
    })
}

impl Centered {
    fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    fn model(&self, beta: Vec<f64>) -> Result<LinearModel> {
        let shift = linalg::dot_unchecked(&self.x_means, &beta);
        LinearModel::new(self.y_mean - shift, beta)
    }
}

/// Ridge regression: `(XcᵀXc + λI)β = Xcᵀyc` on centered data, intercept
/// recovered as `ȳ − x̄ᵀβ`.
pub fn fit_ridge(x: &DenseMatrix, y: &[f64], lambda: f64) -> Result<LinearModel> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!(
            "ridge lambda must be ≥ 0, got {lambda}"
        )));
    }
    let c = center(x, y)?;
    let d = c.d;
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let v = linalg::dot_unchecked(c.col(i), c.col(j));
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
        a[i * d + i] += lambda;
    }
    let rhs: Vec<f64> = (0..d)
        .map(|j| linalg::dot_unchecked(c.col(j), &c.y))
        .collect();
    let beta = solve_spd(&DenseMatrix::new(d, d, a)?, &rhs).map_err(|e| match e {
        Error::Singular { pivot } => Error::Multicollinear { pivot },
        other => other,
    })?;
    c.model(beta.into_vec())
}

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Lasso by cyclic coordinate descent on
/// `(1/2n)‖y − β₀ − Xβ‖² + λ‖β‖₁` with an unpenalized intercept.
///
/// Stops once the largest coefficient change in a sweep drops below `tol`.
/// Hitting `max_sweeps` first is not an error; the returned model carries
/// `converged = false`.
pub fn fit_lasso(
    x: &DenseMatrix,
    y: &[f64],
    lambda: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<LinearModel> {
    Ok(fit_lasso_traced(x, y, lambda, tol, max_sweeps)?.0)
}

/// [`fit_lasso`] plus the objective value after every sweep (index 0 is the
/// objective at β = 0).
pub fn fit_lasso_traced(
    x: &DenseMatrix,
    y: &[f64],
    lambda: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<(LinearModel, Vec<f64>)> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!(
            "lasso lambda must be ≥ 0, got {lambda}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "lasso tol must be > 0, got {tol}"
        )));
    }
    let c = center(x, y)?;
    let n = c.n as f64;
    let sq_norms: Vec<f64> = (0..c.d)
        .map(|j| linalg::dot_unchecked(c.col(j), c.col(j)) / n)
        .collect();
    let mut beta = vec![0.0; c.d];
    let mut resid = c.y.clone();
    let objective = |r: &[f64], b: &[f64]| {
        r.iter().map(|v| v * v).sum::<f64>() / (2.0 * n)
            + lambda * b.iter().map(|v| v.abs()).sum::<f64>()
    };
    let mut trace = vec![objective(&resid, &beta)];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut max_change = 0.0_f64;
        for j in 0..c.d {
            let z = sq_norms[j];
            if z < DEGENERATE_EPS {
                continue;
            }
            let col = c.col(j);
            let old = beta[j];
            let rho = linalg::dot_unchecked(col, &resid) / n + z * old;
            let new = soft_threshold(rho, lambda) / z;
            if new != old {
                linalg::axpy(old - new, col, &mut resid);
                beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        let obj = objective(&resid, &beta);
        let prev = *trace.last().expect("trace starts non-empty");
        debug_assert!(
            obj <= prev + 1e-12 * (1.0 + prev.abs()),
            "lasso objective increased in sweep {sweeps}: {prev} -> {obj}"
        );
        trace.push(obj);
        if max_change < tol {
            converged = true;
            break;
        }
    }
    let mut model = c.model(beta)?;
    model.converged = converged;
    model.iterations = sweeps;
    Ok((model, trace))
}

/// Smallest λ at which every lasso coefficient is zero:
/// `max_j |Xⱼᵀ(y − ȳ)| / n`.
pub fn lasso_lambda_max(x: &DenseMatrix, y: &[f64]) -> Result<f64> {
    let c = center(x, y)?;
    Ok((0..c.d)
        .map(|j| linalg::dot_unchecked(c.col(j), &c.y).abs() / c.n as f64)
        .fold(0.0, f64::max))
}
