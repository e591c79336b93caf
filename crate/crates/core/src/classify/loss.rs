//! Logistic and softmax cross-entropy losses with analytic gradients.
//!
//! Parameters travel as one flat vector so the optimizers can treat both
//! models uniformly:
//!
//! * binary: `[w₀ … w_{d−1}, b]`
//! * multinomial with K classes: `[W (K×d, row-major), b₀ … b_{K−1}]`
//!
//! Losses are averaged over rows; the L2 term `(l2/2)‖W‖²` never touches
//! the intercepts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot_unchecked, DenseMatrix, DenseVector};

/// Rows per parallel block. Blocks are reduced in index order so results do
/// not depend on the thread count.
const BLOCK_ROWS: usize = 2048;

/// Largest double strictly below 1.
const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// `e^z / (1 + e^z)`, evaluated in whichever branch cannot overflow.
///
/// The result is clamped into the open interval (0, 1): for `z ≳ 37` the
/// exact value rounds to 1.0 in `f64`, and it is returned as the largest
/// double below 1 instead.
pub fn sigmoid(z: f64) -> f64 {
    let p = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    p.clamp(f64::MIN_POSITIVE, ONE_MINUS_ULP)
}

/// `ln(1 + e^z)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Running sum with Neumaier compensation. Loss values near an optimum
/// differ in the last few bits, and the line searches compare them.
#[derive(Default, Clone, Copy)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Which likelihood a parameter vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// Two classes, one weight row, sigmoid link.
    Logistic,
    /// `K ≥ 3` classes, one weight row per class, softmax link.
    Softmax { classes: usize },
}

impl Link {
    pub fn for_classes(n_classes: usize) -> Result<Self> {
        match n_classes {
            0 | 1 => Err(Error::Parameter(format!(
                "classification needs at least 2 classes, got {n_classes}"
            ))),
            2 => Ok(Link::Logistic),
            k => Ok(Link::Softmax { classes: k }),
        }
    }

    /// Number of weight rows.
    pub fn rows(self) -> usize {
        match self {
            Link::Logistic => 1,
            Link::Softmax { classes } => classes,
        }
    }

    pub fn n_classes(self) -> usize {
        match self {
            Link::Logistic => 2,
            Link::Softmax { classes } => classes,
        }
    }

    pub fn n_params(self, features: usize) -> usize {
        self.rows() * (features + 1)
    }
}

/// Mean cross-entropy of a linear classifier over a fixed data set.
#[derive(Debug, Clone, Copy)]
pub struct Objective<'a> {
    pub x: &'a DenseMatrix,
    pub y: &'a [usize],
    pub link: Link,
    pub l2: f64,
}

impl<'a> Objective<'a> {
    pub fn new(x: &'a DenseMatrix, y: &'a [usize], link: Link, l2: f64) -> Result<Self> {
        if x.rows() != y.len() {
            return Err(Error::Dimension(format!(
                "{} rows but {} labels",
                x.rows(),
                y.len()
            )));
        }
        if let Some((row, &label)) = y.iter().enumerate().find(|(_, &t)| t >= link.n_classes()) {
            return Err(Error::Label {
                row,
                column: "<target>".into(),
                value: label.to_string(),
            });
        }
        if !(l2 >= 0.0 && l2.is_finite()) {
            return Err(Error::Parameter(format!("l2 must be ≥ 0, got {l2}")));
        }
        Ok(Self { x, y, link, l2 })
    }

    pub fn n_params(&self) -> usize {
        self.link.n_params(self.x.cols())
    }

    fn weights_len(&self) -> usize {
        self.link.rows() * self.x.cols()
    }

    fn penalty(&self, theta: &[f64]) -> f64 {
        let w = &theta[..self.weights_len()];
        0.5 * self.l2 * dot_unchecked(w, w)
    }

    /// Loss only (no gradient); used by line searches.
    pub fn loss(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.n_params());
        let n = self.x.rows();
        if n == 0 {
            return self.penalty(theta);
        }
        let partial: Vec<Compensated> = (0..n)
            .into_par_iter()
            .step_by(BLOCK_ROWS)
            .map(|start| {
                let mut acc = Compensated::default();
                let mut logits = vec![0.0; self.link.rows()];
                for i in start..(start + BLOCK_ROWS).min(n) {
                    acc.add(self.row_loss(theta, i, &mut logits));
                }
                acc
            })
            .collect();
        let mut total = Compensated::default();
        for p in partial {
            total.add(p.value());
        }
        total.value() / n as f64 + self.penalty(theta)
    }

    /// Loss and gradient with respect to the flat parameter vector.
    pub fn loss_grad(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        debug_assert_eq!(theta.len(), self.n_params());
        let n = self.x.rows();
        let np = self.n_params();
        let partial: Vec<(Compensated, Vec<f64>)> = (0..n)
            .into_par_iter()
            .step_by(BLOCK_ROWS)
            .map(|start| {
                let mut acc = Compensated::default();
                let mut grad = vec![0.0; np];
                let mut scratch = vec![0.0; self.link.rows()];
                for i in start..(start + BLOCK_ROWS).min(n) {
                    acc.add(self.row_loss_grad(theta, i, &mut scratch, &mut grad));
                }
                (acc, grad)
            })
            .collect();
        let mut total = Compensated::default();
        let mut grad = vec![0.0; np];
        for (l, g) in partial {
            total.add(l.value());
            axpy(1.0, &g, &mut grad);
        }
        let inv_n = if n == 0 { 0.0 } else { 1.0 / n as f64 };
        grad.iter_mut().for_each(|v| *v *= inv_n);
        let wl = self.weights_len();
        axpy(self.l2, &theta[..wl], &mut grad[..wl]);
        // same rounding as `loss`, so line searches and traces agree exactly
        let mean = if n == 0 {
            0.0
        } else {
            total.value() / n as f64
        };
        (mean + self.penalty(theta), grad)
    }

    fn logits(&self, theta: &[f64], i: usize, out: &mut [f64]) {
        let d = self.x.cols();
        let bias = &theta[self.weights_len()..];
        let row = self.x.row(i);
        for (k, o) in out.iter_mut().enumerate() {
            *o = bias[k] + dot_unchecked(&theta[k * d..(k + 1) * d], row);
        }
    }

    fn row_loss(&self, theta: &[f64], i: usize, logits: &mut [f64]) -> f64 {
        self.logits(theta, i, logits);
        match self.link {
            Link::Logistic => {
                let z = logits[0];
                if self.y[i] == 1 {
                    softplus(-z)
                } else {
                    softplus(z)
                }
            }
            Link::Softmax { .. } => log_sum_exp(logits) - logits[self.y[i]],
        }
    }

    /// Adds row i's unscaled gradient into `grad`, returns its loss.
    pub(crate) fn row_loss_grad(
        &self,
        theta: &[f64],
        i: usize,
        scratch: &mut [f64],
        grad: &mut [f64],
    ) -> f64 {
        let d = self.x.cols();
        let wl = self.weights_len();
        let row = self.x.row(i);
        self.logits(theta, i, scratch);
        let yi = self.y[i];
        match self.link {
            Link::Logistic => {
                let z = scratch[0];
                let r = sigmoid(z) - yi as f64;
                axpy(r, row, &mut grad[..d]);
                grad[wl] += r;
                if yi == 1 {
                    softplus(-z)
                } else {
                    softplus(z)
                }
            }
            Link::Softmax { classes } => {
                let lse = log_sum_exp(scratch);
                let loss = lse - scratch[yi];
                for k in 0..classes {
                    let p = (scratch[k] - lse).exp();
                    let r = p - if k == yi { 1.0 } else { 0.0 };
                    axpy(r, row, &mut grad[k * d..(k + 1) * d]);
                    grad[wl + k] += r;
                }
                loss
            }
        }
    }
}

pub(crate) fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|z| (z - m).exp()).sum::<f64>().ln()
}

/// Row-wise softmax, computed in place.
pub(crate) fn softmax_in_place(v: &mut [f64]) {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for z in v.iter_mut() {
        *z = (*z - m).exp();
        s += *z;
    }
    v.iter_mut().for_each(|z| *z /= s);
}

fn binary_labels(y: &[usize]) -> Result<()> {
    match y.iter().position(|&t| t > 1) {
        Some(row) => Err(Error::Label {
            row,
            column: "<target>".into(),
            value: y[row].to_string(),
        }),
        None => Ok(()),
    }
}

/// Mean negative log-likelihood of the binary model plus `(l2/2)‖w‖²`.
///
/// `params` is `[w₀ … w_{d−1}, intercept]`; the returned gradient has the
/// same layout, `(1/n)Xᵀ(p − y) + l2·w` for the weights and `mean(p − y)`
/// for the intercept.
pub fn binary_loss_grad(
    params: &[f64],
    x: &DenseMatrix,
    y: &[usize],
    l2: f64,
) -> Result<(f64, DenseVector)> {
    binary_labels(y)?;
    let obj = Objective::new(x, y, Link::Logistic, l2)?;
    if params.len() != obj.n_params() {
        return Err(Error::Dimension(format!(
            "binary model over {} features needs {} parameters, got {}",
            x.cols(),
            obj.n_params(),
            params.len()
        )));
    }
    let (loss, grad) = obj.loss_grad(params);
    Ok((loss, DenseVector::from_vec_unchecked(grad)))
}

/// Mean categorical cross-entropy plus `(l2/2)‖W‖²`, with the gradient
/// split into the weight block `(1/n)(P − Y)ᵀX + l2·W` and the intercepts.
///
/// Works for any `K ≥ 2` rows of `weights`.
pub fn softmax_loss_grad(
    weights: &DenseMatrix,
    intercepts: &[f64],
    x: &DenseMatrix,
    y: &[usize],
    l2: f64,
) -> Result<(f64, DenseMatrix, DenseVector)> {
    let k = weights.rows();
    if k < 2 || intercepts.len() != k || weights.cols() != x.cols() {
        return Err(Error::Dimension(format!(
            "weights {}x{}, {} intercepts, data with {} features",
            k,
            weights.cols(),
            intercepts.len(),
            x.cols()
        )));
    }
    let obj = Objective::new(x, y, Link::Softmax { classes: k }, l2)?;
    let mut theta = weights.as_slice().to_vec();
    theta.extend_from_slice(intercepts);
    let (loss, mut grad) = obj.loss_grad(&theta);
    let gb = grad.split_off(k * x.cols());
    Ok((
        loss,
        DenseMatrix::from_vec_unchecked(k, x.cols(), grad),
        DenseVector::from_vec_unchecked(gb),
    ))
}
