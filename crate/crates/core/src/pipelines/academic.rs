//! Three-way academic outcome prediction (graduate, dropout, enrolled).
//!
//! The case study runs against a local copy of the public student-outcome
//! table when one is supplied, or against a synthetic stand-in with the
//! same column names.
//!
//! # The synthetic generator
//!
//! Rows are drawn class first. The outcome comes from the prior
//! [`CLASS_PRIOR_COUNTS`], then every predictor is drawn independently
//! given the outcome:
//!
//! * numeric column `j`: Gaussian with class mean `m_j + s_j·shift_cj` and
//!   class-independent deviation `s_j`
//! * categorical column: level `v` with probability proportional to
//!   `base_v · exp(tilt_c · z_v)`, where `z_v ∈ [−1, 1]` is a fixed score per
//!   level
//!
//! Shared variances make the quadratic terms cancel between classes, so the
//! exact posterior over outcomes is a softmax of a linear function of the
//! one-hot encoded row. [`planted_model`] returns that function as a
//! [`LogisticModel`], which is the Bayes-optimal classifier for the
//! generator. Column tables are constants; the seed only drives sampling.

use std::path::PathBuf;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CaseStudyReport, DataSource, Task};
use crate::classify::{self, compute_metrics, LogisticModel, OptimizerConfig, Solver};
use crate::data::{
    self, ColumnKind, ColumnSchema, Dataset, RawTable, ScalerParams, Schema, SplitSpec,
};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Outcome classes in report order.
pub const ACADEMIC_CLASSES: [&str; 3] = ["Graduate", "Dropout", "Enrolled"];
pub const TARGET_COLUMN: &str = "Target";
/// Row identifier column, excluded from the model.
pub const ID_COLUMN: &str = "id";
/// Outcome counts of the full public table; the synthetic prior is these
/// normalized.
pub const CLASS_PRIOR_COUNTS: [f64; 3] = [36282.0, 25296.0, 14940.0];
/// Default L2 strength for both case-study solvers.
pub const DEFAULT_L2: f64 = 1e-4;
/// Number of predictor columns in the synthetic table.
pub const SYNTHETIC_PREDICTORS: usize = 35;

enum Col {
    Numeric {
        name: &'static str,
        mean: f64,
        sd: f64,
        shift: [f64; 3],
    },
    Categorical {
        name: &'static str,
        levels: &'static [&'static str],
        base: &'static [f64],
        tilt: [f64; 3],
    },
}

const BIN: &[&str] = &["0", "1"];

/// Synthetic columns in the public table's order. `shift` and `tilt` are
/// indexed like [`ACADEMIC_CLASSES`].
const COLUMNS: [Col; SYNTHETIC_PREDICTORS] = [
    Col::Categorical {
        name: "Marital status",
        levels: &["1", "2", "4", "3"],
        base: &[0.88, 0.09, 0.02, 0.01],
        tilt: [0.1, -0.2, 0.0],
    },
    Col::Categorical {
        name: "Application mode",
        levels: &["1", "17", "39", "43", "44", "7"],
        base: &[0.42, 0.22, 0.17, 0.08, 0.06, 0.05],
        tilt: [0.5, -0.7, 0.1],
    },
    Col::Numeric {
        name: "Application order",
        mean: 1.7,
        sd: 1.3,
        shift: [0.05, -0.1, 0.0],
    },
    Col::Categorical {
        name: "Course",
        levels: &[
            "9500", "9147", "9991", "9254", "9773", "9238", "9085", "9670",
        ],
        base: &[0.24, 0.13, 0.13, 0.11, 0.11, 0.10, 0.09, 0.09],
        tilt: [0.6, -0.5, 0.3],
    },
    Col::Categorical {
        name: "Daytime/evening attendance",
        levels: BIN,
        base: &[0.1, 0.9],
        tilt: [0.2, -0.2, 0.0],
    },
    Col::Categorical {
        name: "Previous qualification",
        levels: &["1", "19", "39", "3"],
        base: &[0.86, 0.05, 0.05, 0.04],
        tilt: [0.2, -0.3, 0.0],
    },
    Col::Numeric {
        name: "Previous qualification (grade)",
        mean: 132.0,
        sd: 12.0,
        shift: [0.15, -0.2, 0.0],
    },
    Col::Categorical {
        name: "Nacionality",
        levels: &["1", "41", "26"],
        base: &[0.98, 0.01, 0.01],
        tilt: [0.0, 0.1, -0.1],
    },
    Col::Categorical {
        name: "Mother's qualification",
        levels: &["1", "19", "37", "38", "3"],
        base: &[0.28, 0.24, 0.27, 0.09, 0.12],
        tilt: [0.15, -0.2, 0.1],
    },
    Col::Categorical {
        name: "Father's qualification",
        levels: &["1", "19", "37", "38", "3"],
        base: &[0.25, 0.25, 0.32, 0.08, 0.10],
        tilt: [0.1, -0.15, 0.05],
    },
    Col::Categorical {
        name: "Mother's occupation",
        levels: &["9", "4", "5", "3", "2", "7"],
        base: &[0.38, 0.20, 0.14, 0.10, 0.10, 0.08],
        tilt: [0.2, -0.2, 0.0],
    },
    Col::Categorical {
        name: "Father's occupation",
        levels: &["9", "7", "5", "4", "3", "8"],
        base: &[0.26, 0.20, 0.16, 0.14, 0.12, 0.12],
        tilt: [0.15, -0.15, 0.05],
    },
    Col::Numeric {
        name: "Admission grade",
        mean: 125.0,
        sd: 13.0,
        shift: [0.2, -0.25, -0.05],
    },
    Col::Categorical {
        name: "Displaced",
        levels: BIN,
        base: &[0.45, 0.55],
        tilt: [0.15, -0.2, 0.0],
    },
    Col::Categorical {
        name: "Educational special needs",
        levels: BIN,
        base: &[0.99, 0.01],
        tilt: [0.0, 0.0, 0.0],
    },
    Col::Categorical {
        name: "Debtor",
        levels: BIN,
        base: &[0.9, 0.1],
        tilt: [-0.5, 0.9, 0.1],
    },
    Col::Categorical {
        name: "Tuition fees up to date",
        levels: BIN,
        base: &[0.1, 0.9],
        tilt: [0.8, -1.6, 0.3],
    },
    Col::Categorical {
        name: "Gender",
        levels: BIN,
        base: &[0.65, 0.35],
        tilt: [-0.35, 0.35, 0.05],
    },
    Col::Categorical {
        name: "Scholarship holder",
        levels: BIN,
        base: &[0.75, 0.25],
        tilt: [0.7, -0.7, -0.2],
    },
    Col::Numeric {
        name: "Age at enrollment",
        mean: 22.0,
        sd: 6.0,
        shift: [-0.3, 0.5, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (credited)",
        mean: 0.6,
        sd: 2.0,
        shift: [0.0, -0.05, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (enrolled)",
        mean: 6.0,
        sd: 2.0,
        shift: [0.1, -0.2, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (evaluations)",
        mean: 8.5,
        sd: 3.5,
        shift: [-0.1, -0.3, 0.5],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (approved)",
        mean: 4.6,
        sd: 2.8,
        shift: [0.55, -0.75, -0.15],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (grade)",
        mean: 10.5,
        sd: 4.5,
        shift: [0.45, -0.7, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 1st sem (without evaluations)",
        mean: 0.1,
        sd: 0.6,
        shift: [-0.1, 0.1, 0.15],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (credited)",
        mean: 0.5,
        sd: 1.8,
        shift: [0.0, -0.05, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (enrolled)",
        mean: 6.2,
        sd: 2.0,
        shift: [0.1, -0.2, 0.05],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (evaluations)",
        mean: 8.3,
        sd: 3.6,
        shift: [-0.1, -0.35, 0.6],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (approved)",
        mean: 4.4,
        sd: 2.9,
        shift: [0.65, -0.85, -0.25],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (grade)",
        mean: 10.3,
        sd: 4.8,
        shift: [0.55, -0.8, 0.0],
    },
    Col::Numeric {
        name: "Curricular units 2nd sem (without evaluations)",
        mean: 0.1,
        sd: 0.6,
        shift: [-0.1, 0.1, 0.15],
    },
    Col::Numeric {
        name: "Unemployment rate",
        mean: 11.5,
        sd: 2.6,
        shift: [0.0, 0.05, -0.05],
    },
    Col::Numeric {
        name: "Inflation rate",
        mean: 1.2,
        sd: 1.4,
        shift: [0.0, 0.05, -0.03],
    },
    Col::Numeric {
        name: "GDP",
        mean: 0.0,
        sd: 2.3,
        shift: [0.03, -0.05, 0.0],
    },
];

/// Fixed score in [−1, 1] for level `v` of an `m`-level column. Two-level
/// columns get −1 and +1.
fn level_score(v: usize, m: usize) -> f64 {
    if m == 2 {
        return if v == 0 { -1.0 } else { 1.0 };
    }
    (1.7 * v as f64 + 0.3).sin()
}

/// Class-conditional level probabilities, `[class][level]`.
fn level_probs(levels: usize, base: &[f64], tilt: &[f64; 3]) -> [Vec<f64>; 3] {
    std::array::from_fn(|c| {
        let raw: Vec<f64> = (0..levels)
            .map(|v| base[v] * (tilt[c] * level_score(v, levels)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    })
}

fn class_prior() -> [f64; 3] {
    let total: f64 = CLASS_PRIOR_COUNTS.iter().sum();
    CLASS_PRIOR_COUNTS.map(|c| c / total)
}

/// Schema of the synthetic table: `id` ignored, categorical columns with
/// closed level lists, `Target` over [`ACADEMIC_CLASSES`].
pub fn synthetic_schema() -> Schema {
    let mut columns = vec![ColumnSchema::ignored(ID_COLUMN)];
    columns.extend(COLUMNS.iter().map(|c| match c {
        Col::Numeric { name, .. } => ColumnSchema::numeric(*name),
        Col::Categorical { name, levels, .. } => {
            ColumnSchema::categorical(*name, levels.iter().copied())
        }
    }));
    columns.push(ColumnSchema::target(TARGET_COLUMN, ACADEMIC_CLASSES));
    Schema::new(columns).expect("static academic schema is valid")
}

/// Raw synthetic table of `n_rows` rows. Numeric values are written in the
/// shortest form that parses back exactly, so encoding the table reproduces
/// the sampled values bit for bit.
pub fn synthetic_table(n_rows: usize, seed: u64) -> Result<RawTable> {
    if n_rows < 10 {
        return Err(Error::Parameter(format!(
            "need at least 10 rows, got {n_rows}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prior = WeightedIndex::new(CLASS_PRIOR_COUNTS).expect("positive prior");
    let cat_dists: Vec<Option<[WeightedIndex<f64>; 3]>> = COLUMNS
        .iter()
        .map(|c| match c {
            Col::Categorical {
                levels, base, tilt, ..
            } => {
                let p = level_probs(levels.len(), base, tilt);
                Some(p.map(|w| WeightedIndex::new(w).expect("positive level weights")))
            }
            Col::Numeric { .. } => None,
        })
        .collect();

    let mut header = vec![ID_COLUMN.to_string()];
    header.extend(COLUMNS.iter().map(|c| col_name(c).to_string()));
    header.push(TARGET_COLUMN.to_string());

    let rows = (0..n_rows)
        .map(|i| {
            let class = prior.sample(&mut rng);
            let mut row = Vec::with_capacity(COLUMNS.len() + 2);
            row.push(i.to_string());
            for (col, dist) in COLUMNS.iter().zip(&cat_dists) {
                match (col, dist) {
                    (
                        Col::Numeric {
                            mean, sd, shift, ..
                        },
                        _,
                    ) => {
                        let z: f64 = rng.sample(StandardNormal);
                        row.push((mean + sd * shift[class] + sd * z).to_string());
                    }
                    (Col::Categorical { levels, .. }, Some(d)) => {
                        row.push(levels[d[class].sample(&mut rng)].to_string());
                    }
                    (Col::Categorical { .. }, None) => unreachable!(),
                }
            }
            row.push(ACADEMIC_CLASSES[class].to_string());
            row
        })
        .collect();
    Ok(RawTable { header, rows })
}

fn col_name(c: &Col) -> &'static str {
    match c {
        Col::Numeric { name, .. } | Col::Categorical { name, .. } => name,
    }
}

/// Encoded synthetic dataset: 19 numeric predictors plus 16 one-hot
/// expanded categorical ones, three outcome classes.
pub fn generate_academic_synthetic(n_rows: usize, seed: u64) -> Result<Dataset> {
    let (ds, _) = data::encode(&synthetic_table(n_rows, seed)?, &synthetic_schema())?;
    Ok(ds)
}

/// The generator's exact posterior as a softmax model over the encoded
/// (unscaled) features of [`synthetic_schema`]:
///
/// * numeric weight `μ_cj / s_j²`
/// * one-hot weight `ln p_c(level)`
/// * intercept `ln π_c − Σ_j μ_cj² / (2 s_j²)`
pub fn planted_model() -> LogisticModel {
    let prior = class_prior();
    let mut weights: [Vec<f64>; 3] = Default::default();
    let mut intercepts = prior.map(f64::ln);
    for col in &COLUMNS {
        match col {
            Col::Numeric {
                mean, sd, shift, ..
            } => {
                for c in 0..3 {
                    let mu = mean + sd * shift[c];
                    weights[c].push(mu / (sd * sd));
                    intercepts[c] -= mu * mu / (2.0 * sd * sd);
                }
            }
            Col::Categorical {
                levels, base, tilt, ..
            } => {
                let p = level_probs(levels.len(), base, tilt);
                for c in 0..3 {
                    weights[c].extend(p[c].iter().map(|q| q.ln()));
                }
            }
        }
    }
    let d = weights[0].len();
    let flat = weights.concat();
    LogisticModel::new(
        DenseMatrix::new(3, d, flat).expect("finite planted weights"),
        intercepts.to_vec(),
        ACADEMIC_CLASSES.iter().map(|s| s.to_string()).collect(),
    )
    .expect("three-class planted model")
}

/// Where the case-study rows come from.
#[derive(Debug, Clone, PartialEq)]
pub enum AcademicSource {
    /// A local CSV and the schema file describing it.
    Csv {
        data: PathBuf,
        schema: PathBuf,
    },
    Synthetic {
        n_rows: usize,
        seed: u64,
    },
}

/// Case-study defaults: L-BFGS capped at 1000 iterations, or SGD at a
/// constant rate of 0.01 for 100 epochs; `l2 = 1e-4` for both.
pub fn default_academic_config(solver: Solver) -> OptimizerConfig {
    OptimizerConfig {
        l2: DEFAULT_L2,
        max_iter: 1000,
        epochs: 100,
        learning_rate: 0.01,
        ..OptimizerConfig::new(solver)
    }
}

/// Output of [`run_academic_case_study`].
#[derive(Debug, Clone)]
pub struct AcademicRun {
    pub report: CaseStudyReport,
    pub model: LogisticModel,
    pub scaler: ScalerParams,
    /// Schema with every categorical level list filled in.
    pub schema: Schema,
}

/// Ingest → encode → seeded split → standardize on the training rows →
/// train → metrics on both halves.
///
/// With a synthetic source, the report's `oracle_accuracy` is the test
/// accuracy of [`planted_model`] on the same unscaled test rows.
pub fn run_academic_case_study(
    source: &AcademicSource,
    split: &SplitSpec,
    opt: &OptimizerConfig,
) -> Result<AcademicRun> {
    let (table, schema, data_source) = match source {
        AcademicSource::Csv { data, schema } => (
            RawTable::read_path(data)?,
            Schema::load(schema)?,
            DataSource::External,
        ),
        AcademicSource::Synthetic { n_rows, seed } => (
            synthetic_table(*n_rows, *seed)?,
            synthetic_schema(),
            DataSource::Synthetic,
        ),
    };
    let (ds, resolved) = data::encode(&table, &schema)?;
    run_on_dataset(&ds, resolved, split, opt, data_source)
}

fn run_on_dataset(
    ds: &Dataset,
    schema: Schema,
    split: &SplitSpec,
    opt: &OptimizerConfig,
    data_source: DataSource,
) -> Result<AcademicRun> {
    let k = ds.n_classes();
    let (train, test) = data::split(ds, split)?;
    let oracle_accuracy = match data_source {
        DataSource::Synthetic => {
            let hits = classify::predict(&planted_model(), &test.features)?
                .iter()
                .zip(&test.targets)
                .filter(|(p, t)| p == t)
                .count();
            Some(hits as f64 / test.n_rows().max(1) as f64)
        }
        DataSource::External => None,
    };
    let scaler = data::fit_scaler(&train.features)?;
    let train_z = train.with_features(data::transform(&scaler, &train.features)?)?;
    let test_z = test.with_features(data::transform(&scaler, &test.features)?)?;
    let model = classify::train(&train_z, opt)?;
    let train_metrics = compute_metrics(
        &train_z.targets,
        &classify::predict(&model, &train_z.features)?,
        k,
    )?;
    let test_metrics = compute_metrics(
        &test_z.targets,
        &classify::predict(&model, &test_z.features)?,
        k,
    )?;
    let target = schema.target().name.clone();
    debug_assert_eq!(schema.target().kind, ColumnKind::Target);
    Ok(AcademicRun {
        report: CaseStudyReport {
            task: Task::Academic,
            solver: opt.solver,
            data_source,
            config: *opt,
            split: *split,
            target_name: target,
            class_names: ds.class_names.clone(),
            feature_names: ds.feature_names.clone(),
            class_distribution: train.class_counts(),
            train: train_metrics,
            test: test_metrics,
            converged: model.converged,
            iterations_used: model.iterations_used,
            oracle_accuracy,
            style_rules: None,
        },
        model,
        scaler,
        schema,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let t = synthetic_table(20, 1).unwrap();
        assert_eq!(t.header.len(), SYNTHETIC_PREDICTORS + 2);
        assert!(t.rows.iter().all(|r| r.len() == t.header.len()));
        let s = synthetic_schema();
        let predictors = s
            .columns
            .iter()
            .filter(|c| matches!(c.kind, ColumnKind::Numeric | ColumnKind::Categorical))
            .count();
        assert_eq!(predictors, 35);
    }

    #[test]
    fn level_probabilities_normalize() {
        for col in &COLUMNS {
            if let Col::Categorical {
                levels, base, tilt, ..
            } = col
            {
                assert_eq!(levels.len(), base.len());
                for p in level_probs(levels.len(), base, tilt) {
                    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn planted_model_matches_encoded_width() {
        let ds = generate_academic_synthetic(10, 0).unwrap();
        assert_eq!(planted_model().n_features(), ds.features.cols());
    }

    #[test]
    fn too_few_rows() {
        assert!(synthetic_table(9, 0).is_err());
    }
}
