//! Logistic regression, binary and multinomial.
//!
//! A two-class problem uses a single weight row and the sigmoid link; three
//! or more classes use one row per class and the softmax link. Training
//! goes through one of three solvers selected by [`OptimizerConfig`]:
//!
//! * [`Solver::Gd`]: full-batch gradient descent with Armijo backtracking
//! * [`Solver::Lbfgs`]: limited-memory BFGS
//! * [`Solver::Sgd`]: per-row stochastic gradient descent, constant rate
//!
//! ```
//! use edulearn::classify::{self, OptimizerConfig, Solver};
//! use edulearn::linalg::DenseMatrix;
//!
//! let x = DenseMatrix::from_rows(&[vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]])?;
//! let y = [0, 0, 1, 1];
//! let cfg = OptimizerConfig { l2: 0.1, ..OptimizerConfig::new(Solver::Lbfgs) };
//! let model = classify::fit(&x, &y, 2, &cfg)?;
//! assert!(model.converged);
//! assert_eq!(classify::predict(&model, &x)?, vec![0, 0, 1, 1]);
//! # Ok::<(), edulearn::Error>(())
//! ```

mod loss;
mod metrics;
mod optim;

pub use loss::{binary_loss_grad, sigmoid, softmax_loss_grad, Link, Objective};
pub use metrics::{compute_metrics, Averages, ClassMetrics, MetricsReport};
pub use optim::{fit_gd, fit_lbfgs, fit_sgd, ARMIJO_C, CURVATURE_EPS, MAX_HALVINGS};

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot_unchecked, DenseMatrix, DenseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Gd,
    Sgd,
    Lbfgs,
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(Solver::Gd),
            "sgd" => Ok(Solver::Sgd),
            "lbfgs" => Ok(Solver::Lbfgs),
            other => Err(Error::Parameter(format!("unknown solver `{other}`"))),
        }
    }
}

impl std::fmt::Display for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Solver::Gd => "gd",
            Solver::Sgd => "sgd",
            Solver::Lbfgs => "lbfgs",
        })
    }
}

/// Solver settings. `max_iter` caps GD and L-BFGS iterations, `epochs` and
/// `learning_rate` drive SGD, and `tol` is the `‖∇‖∞` stopping threshold
/// for the full-batch solvers. `l1` is only accepted together with SGD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub solver: Solver,
    pub max_iter: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub tol: f64,
    pub l2: f64,
    pub l1: f64,
    pub lbfgs_memory: usize,
    pub seed: u64,
}

impl OptimizerConfig {
    /// Defaults: 1000 iterations, 100 epochs at rate 0.01, tol 1e-6,
    /// memory 10, no regularization, seed 0.
    pub fn new(solver: Solver) -> Self {
        Self {
            solver,
            max_iter: 1000,
            epochs: 100,
            learning_rate: 0.01,
            tol: 1e-6,
            l2: 0.0,
            l1: 0.0,
            lbfgs_memory: 10,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            ));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be > 0, got {}", self.tol));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return bad(format!("l2 must be ≥ 0, got {}", self.l2));
        }
        if !(self.l1 >= 0.0 && self.l1.is_finite()) {
            return bad(format!("l1 must be ≥ 0, got {}", self.l1));
        }
        if self.lbfgs_memory == 0 {
            return bad("lbfgs_memory must be at least 1".into());
        }
        if self.l1 > 0.0 && self.solver != Solver::Sgd {
            return bad(format!(
                "l1 is non-smooth and only supported with the sgd solver, not {}",
                self.solver
            ));
        }
        Ok(())
    }
}

/// Fitted linear classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub n_classes: usize,
    /// One row for binary models, `n_classes` rows otherwise.
    pub weights: DenseMatrix,
    pub intercepts: DenseVector,
    pub class_names: Vec<String>,
    pub converged: bool,
    pub iterations_used: usize,
    /// Objective value at the start and after every iteration or epoch.
    #[serde(skip)]
    pub loss_trace: Vec<f64>,
}

impl LogisticModel {
    pub fn new(
        weights: DenseMatrix,
        intercepts: Vec<f64>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let n_classes = class_names.len();
        let expected_rows = Link::for_classes(n_classes)?.rows();
        if weights.rows() != expected_rows || intercepts.len() != expected_rows {
            return Err(Error::Dimension(format!(
                "{n_classes} classes need {expected_rows} weight rows and intercepts, got {} and {}",
                weights.rows(),
                intercepts.len()
            )));
        }
        Ok(Self {
            n_classes,
            weights,
            intercepts: DenseVector::new(intercepts)?,
            class_names,
            converged: false,
            iterations_used: 0,
            loss_trace: Vec::new(),
        })
    }

    /// Zero weights and intercepts.
    pub fn zeros(n_features: usize, class_names: Vec<String>) -> Result<Self> {
        let rows = Link::for_classes(class_names.len())?.rows();
        Self::new(
            DenseMatrix::zeros(rows, n_features),
            vec![0.0; rows],
            class_names,
        )
    }

    pub fn is_binary(&self) -> bool {
        self.weights.rows() == 1
    }

    pub fn n_features(&self) -> usize {
        self.weights.cols()
    }

    fn check(&self, x: &DenseMatrix) -> Result<()> {
        if x.cols() != self.n_features() {
            return Err(Error::Dimension(format!(
                "model expects {} features, input has {}",
                self.n_features(),
                x.cols()
            )));
        }
        Ok(())
    }

    fn logits_into(&self, row: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.intercepts[k] + dot_unchecked(self.weights.row(k), row);
        }
    }
}

/// Trains with the solver named in `cfg`.
pub fn fit(
    x: &DenseMatrix,
    y: &[usize],
    n_classes: usize,
    cfg: &OptimizerConfig,
) -> Result<LogisticModel> {
    match cfg.solver {
        Solver::Gd => fit_gd(x, y, n_classes, cfg),
        Solver::Sgd => fit_sgd(x, y, n_classes, cfg),
        Solver::Lbfgs => fit_lbfgs(x, y, n_classes, cfg),
    }
}

/// [`fit`] on a dataset, carrying its class names into the model.
pub fn train(ds: &Dataset, cfg: &OptimizerConfig) -> Result<LogisticModel> {
    let mut m = fit(&ds.features, &ds.targets, ds.n_classes(), cfg)?;
    m.class_names = ds.class_names.clone();
    Ok(m)
}

/// Binary models: one column holding P(class 1). Multinomial models: the
/// row-stochastic softmax matrix.
pub fn predict_proba(m: &LogisticModel, x: &DenseMatrix) -> Result<DenseMatrix> {
    m.check(x)?;
    let k = m.weights.rows();
    let mut out = vec![0.0; x.rows() * k];
    for (row, dst) in x.row_iter().zip(out.chunks_exact_mut(k)) {
        m.logits_into(row, dst);
        if m.is_binary() {
            dst[0] = sigmoid(dst[0]);
        } else {
            loss::softmax_in_place(dst);
        }
    }
    DenseMatrix::new(x.rows(), k, out)
}

/// One probability column per class, for binary models too.
pub fn class_probabilities(m: &LogisticModel, x: &DenseMatrix) -> Result<DenseMatrix> {
    let p = predict_proba(m, x)?;
    if !m.is_binary() {
        return Ok(p);
    }
    let values = p.as_slice().iter().flat_map(|&q| [1.0 - q, q]).collect();
    DenseMatrix::new(x.rows(), 2, values)
}

/// Binary: class 1 iff P(class 1) ≥ 0.5. Multinomial: argmax of the
/// logits, lowest index on ties.
pub fn predict(m: &LogisticModel, x: &DenseMatrix) -> Result<Vec<usize>> {
    m.check(x)?;
    let k = m.weights.rows();
    let mut logits = vec![0.0; k];
    Ok(x.row_iter()
        .map(|row| {
            m.logits_into(row, &mut logits);
            if m.is_binary() {
                usize::from(sigmoid(logits[0]) >= 0.5)
            } else {
                argmax(&logits)
            }
        })
        .collect())
}

/// Index of the largest entry; the first one wins ties.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}
