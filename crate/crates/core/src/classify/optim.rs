//! The three trainers: full-batch gradient descent, L-BFGS and SGD.
//!
//! All of them start from the zero parameter vector.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::loss::{Link, Objective};
use super::{LogisticModel, OptimizerConfig, Solver};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot_unchecked, norm_inf, DenseMatrix};

/// Armijo sufficient-decrease constant.
pub const ARMIJO_C: f64 = 1e-4;
/// Step halvings before a line search gives up.
pub const MAX_HALVINGS: usize = 50;
/// Curvature pairs with `sᵀy` at or below this are discarded.
pub const CURVATURE_EPS: f64 = 1e-12;

struct Accepted {
    step: f64,
    theta: Vec<f64>,
}

/// Backtracking along `dir` from `theta`, halving from `t0`.
fn armijo(
    obj: &Objective,
    theta: &[f64],
    loss: f64,
    slope: f64,
    dir: &[f64],
    t0: f64,
    iteration: usize,
) -> Result<Accepted> {
    let mut t = t0;
    let mut trial = theta.to_vec();
    for _ in 0..=MAX_HALVINGS {
        trial.copy_from_slice(theta);
        axpy(t, dir, &mut trial);
        let f = obj.loss(&trial);
        if f <= loss + ARMIJO_C * t * slope {
            return Ok(Accepted {
                step: t,
                theta: trial,
            });
        }
        t *= 0.5;
    }
    Err(Error::StalledDescent {
        iteration,
        halvings: MAX_HALVINGS,
        last_iterate: theta.to_vec(),
    })
}

fn check_solver(cfg: &OptimizerConfig, expected: Solver) -> Result<()> {
    cfg.validate()?;
    if cfg.solver != expected {
        return Err(Error::Parameter(format!(
            "config names solver {:?}, called the {:?} trainer",
            cfg.solver, expected
        )));
    }
    Ok(())
}

fn finish(
    link: Link,
    features: usize,
    theta: Vec<f64>,
    converged: bool,
    iterations: usize,
    loss_trace: Vec<f64>,
) -> Result<LogisticModel> {
    let rows = link.rows();
    let mut weights = theta;
    let intercepts = weights.split_off(rows * features);
    let mut m = LogisticModel::new(
        DenseMatrix::new(rows, features, weights)?,
        intercepts,
        (0..link.n_classes()).map(|k| k.to_string()).collect(),
    )?;
    m.converged = converged;
    m.iterations_used = iterations;
    m.loss_trace = loss_trace;
    Ok(m)
}

/// Full-batch gradient descent with an Armijo backtracking line search.
///
/// Each iteration tries twice the previous accepted step first, so a well
/// scaled problem rarely pays for more than one halving. Stops when
/// `‖∇‖∞ < tol` or after `max_iter` accepted steps.
pub fn fit_gd(
    x: &DenseMatrix,
    y: &[usize],
    n_classes: usize,
    cfg: &OptimizerConfig,
) -> Result<LogisticModel> {
    check_solver(cfg, Solver::Gd)?;
    let link = Link::for_classes(n_classes)?;
    let obj = Objective::new(x, y, link, cfg.l2)?;
    let mut theta = vec![0.0; obj.n_params()];
    let (mut loss, mut grad) = obj.loss_grad(&theta);
    let mut trace = vec![loss];
    let mut step = 1.0_f64;
    let mut iterations = 0;
    let mut converged = norm_inf(&grad) < cfg.tol;
    while !converged && iterations < cfg.max_iter {
        let dir: Vec<f64> = grad.iter().map(|g| -g).collect();
        let slope = -dot_unchecked(&grad, &grad);
        let t0 = (2.0 * step).min(1e8);
        let acc = armijo(&obj, &theta, loss, slope, &dir, t0, iterations)?;
        step = acc.step;
        theta = acc.theta;
        (loss, grad) = obj.loss_grad(&theta);
        iterations += 1;
        trace.push(loss);
        converged = norm_inf(&grad) < cfg.tol;
    }
    finish(link, x.cols(), theta, converged, iterations, trace)
}

/// Limited-memory BFGS: two-loop recursion over the last
/// `cfg.lbfgs_memory` curvature pairs, initial inverse-Hessian scale
/// `sᵀy / yᵀy`, Armijo backtracking from a unit step.
pub fn fit_lbfgs(
    x: &DenseMatrix,
    y: &[usize],
    n_classes: usize,
    cfg: &OptimizerConfig,
) -> Result<LogisticModel> {
    check_solver(cfg, Solver::Lbfgs)?;
    let link = Link::for_classes(n_classes)?;
    let obj = Objective::new(x, y, link, cfg.l2)?;
    let n = obj.n_params();
    let mut theta = vec![0.0; n];
    let (mut loss, mut grad) = obj.loss_grad(&theta);
    let mut trace = vec![loss];
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(cfg.lbfgs_memory);
    let mut iterations = 0;
    let mut converged = norm_inf(&grad) < cfg.tol;
    let mut alpha = vec![0.0; cfg.lbfgs_memory];

    while !converged && iterations < cfg.max_iter {
        let mut dir = two_loop(&grad, &pairs, &mut alpha);
        let mut slope = dot_unchecked(&grad, &dir);
        if !(slope < 0.0) {
            pairs.clear();
            dir = grad.iter().map(|g| -g).collect();
            slope = -dot_unchecked(&grad, &grad);
        }
        let acc = armijo(&obj, &theta, loss, slope, &dir, 1.0, iterations)?;
        let (new_loss, new_grad) = obj.loss_grad(&acc.theta);
        let s: Vec<f64> = acc.theta.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = new_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot_unchecked(&s, &yv);
        if sy > CURVATURE_EPS {
            if pairs.len() == cfg.lbfgs_memory {
                pairs.pop_front();
            }
            pairs.push_back((s, yv, 1.0 / sy));
        }
        theta = acc.theta;
        loss = new_loss;
        grad = new_grad;
        iterations += 1;
        trace.push(loss);
        converged = norm_inf(&grad) < cfg.tol;
    }
    finish(link, x.cols(), theta, converged, iterations, trace)
}

/// Returns `−H·g` for the implicit inverse-Hessian approximation.
fn two_loop(
    grad: &[f64],
    pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>,
    alpha: &mut [f64],
) -> Vec<f64> {
    let mut q = grad.to_vec();
    for (i, (s, y, rho)) in pairs.iter().enumerate().rev() {
        let a = rho * dot_unchecked(s, &q);
        alpha[i] = a;
        axpy(-a, y, &mut q);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot_unchecked(s, y) / dot_unchecked(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for (i, (s, y, rho)) in pairs.iter().enumerate() {
        let b = rho * dot_unchecked(y, &q);
        axpy(alpha[i] - b, s, &mut q);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Plain stochastic gradient descent with a constant learning rate.
///
/// Rows are visited in a fresh seeded permutation every epoch. The L2 term
/// is folded into each per-row gradient; L1 is applied as a proximal
/// soft-threshold of the weights after each step. Exactly `cfg.epochs`
/// epochs run. `converged` reports that the schedule completed, which is
/// false only for `epochs = 0`.
pub fn fit_sgd(
    x: &DenseMatrix,
    y: &[usize],
    n_classes: usize,
    cfg: &OptimizerConfig,
) -> Result<LogisticModel> {
    check_solver(cfg, Solver::Sgd)?;
    let link = Link::for_classes(n_classes)?;
    let obj = Objective::new(x, y, link, cfg.l2)?;
    let np = obj.n_params();
    let wl = link.rows() * x.cols();
    let lr = cfg.learning_rate;
    let shrink = lr * cfg.l1;

    let mut theta = vec![0.0; np];
    let mut grad = vec![0.0; np];
    let mut scratch = vec![0.0; link.rows()];
    let mut order: Vec<usize> = (0..x.rows()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = vec![obj.loss(&theta)];

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            grad.iter_mut().for_each(|g| *g = 0.0);
            obj.row_loss_grad(&theta, i, &mut scratch, &mut grad);
            axpy(cfg.l2, &theta[..wl], &mut grad[..wl]);
            axpy(-lr, &grad, &mut theta);
            if shrink > 0.0 {
                for w in &mut theta[..wl] {
                    *w = w.signum() * (w.abs() - shrink).max(0.0);
                }
            }
        }
        let loss = obj.loss(&theta) + cfg.l1 * theta[..wl].iter().map(|w| w.abs()).sum::<f64>();
        if !loss.is_finite() || theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                epoch,
                learning_rate: lr,
            });
        }
        trace.push(loss);
    }
    finish(link, x.cols(), theta, cfg.epochs > 0, cfg.epochs, trace)
}
