//! On-disk formats: the run report and the serialized model.

use std::sync::OnceLock;

use edulearn::classify::{LogisticModel, OptimizerConfig};
use edulearn::data::{ScalerParams, Schema};
use edulearn::linalg::DenseMatrix;
use edulearn::pipelines::{CaseStudyReport, Task};
use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;
pub const MODEL_VERSION: u32 = 1;

/// JSON Schema the report must satisfy before it is written.
pub const REPORT_SCHEMA: &str = include_str!("../report.schema.json");

#[derive(Serialize)]
pub struct ReportFile<'a> {
    pub report_version: u32,
    #[serde(flatten)]
    pub report: &'a CaseStudyReport,
    pub text_block: String,
}

impl<'a> ReportFile<'a> {
    pub fn new(report: &'a CaseStudyReport) -> Self {
        Self {
            report_version: REPORT_VERSION,
            report,
            text_block: report.text_block(),
        }
    }
}

/// Checks a serialized report against [`REPORT_SCHEMA`]. Returns every
/// violation, one per line.
pub fn validate_report(json: &str) -> Result<(), String> {
    static VALIDATOR: OnceLock<jsonschema::Validator> = OnceLock::new();
    let validator = VALIDATOR.get_or_init(|| {
        let schema: serde_json::Value =
            serde_json::from_str(REPORT_SCHEMA).expect("shipped report schema is valid JSON");
        jsonschema::validator_for(&schema).expect("shipped report schema compiles")
    });
    let instance: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| format!("{}: {}", e.instance_path, e))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("\n"))
    }
}

/// Everything `predict` needs: weights, preprocessing and the input schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub model_version: u32,
    pub model_type: String,
    pub task: Task,
    pub class_names: Vec<String>,
    pub feature_names: Vec<String>,
    /// One row per weight vector; a single row for binary models.
    pub weights: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    pub converged: bool,
    pub iterations_used: usize,
    pub config: OptimizerConfig,
    pub scaler: ScalerParams,
    /// Raw input columns, with categorical levels resolved at training time.
    pub schema: Schema,
}

impl ModelFile {
    pub fn new(
        task: Task,
        model: &LogisticModel,
        feature_names: Vec<String>,
        config: OptimizerConfig,
        scaler: ScalerParams,
        schema: Schema,
    ) -> Self {
        Self {
            model_version: MODEL_VERSION,
            model_type: if model.is_binary() {
                "logistic"
            } else {
                "softmax"
            }
            .into(),
            task,
            class_names: model.class_names.clone(),
            feature_names,
            weights: model.weights.row_iter().map(<[f64]>::to_vec).collect(),
            intercepts: model.intercepts.to_vec(),
            converged: model.converged,
            iterations_used: model.iterations_used,
            config,
            scaler,
            schema,
        }
    }

    pub fn model(&self) -> edulearn::Result<LogisticModel> {
        let mut m = LogisticModel::new(
            DenseMatrix::from_rows(&self.weights)?,
            self.intercepts.clone(),
            self.class_names.clone(),
        )?;
        m.converged = self.converged;
        m.iterations_used = self.iterations_used;
        Ok(m)
    }
}
