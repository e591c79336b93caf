use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Rows whose true class is this one.
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Accuracy, per-class and macro-averaged precision/recall/F1, and the
/// confusion matrix (rows = true class, columns = predicted class).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub rows: usize,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    #[serde(rename = "macro")]
    pub macro_avg: Averages,
    pub confusion: Vec<Vec<usize>>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Zero denominators give 0 for precision and recall rather than NaN.
pub fn compute_metrics(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> Result<MetricsReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Dimension(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::Dimension("no rows to evaluate".into()));
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (row, (&t, &p)) in y_true.iter().zip(y_pred).enumerate() {
        if t >= n_classes || p >= n_classes {
            return Err(Error::Label {
                row,
                column: "<class index>".into(),
                value: format!("{}", t.max(p)),
            });
        }
        confusion[t][p] += 1;
    }
    let total = y_true.len();
    let correct: usize = (0..n_classes).map(|k| confusion[k][k]).sum();
    let per_class: Vec<ClassMetrics> = (0..n_classes)
        .map(|k| {
            let tp = confusion[k][k];
            let predicted: usize = (0..n_classes).map(|t| confusion[t][k]).sum();
            let support: usize = confusion[k].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            ClassMetrics {
                precision,
                recall,
                f1: f1(precision, recall),
                support,
            }
        })
        .collect();
    let k = n_classes.max(1) as f64;
    let macro_avg = Averages {
        precision: per_class.iter().map(|c| c.precision).sum::<f64>() / k,
        recall: per_class.iter().map(|c| c.recall).sum::<f64>() / k,
        f1: per_class.iter().map(|c| c.f1).sum::<f64>() / k,
    };
    Ok(MetricsReport {
        rows: total,
        accuracy: ratio(correct, total),
        per_class,
        macro_avg,
        confusion,
    })
}
