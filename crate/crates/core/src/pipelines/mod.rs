//! End-to-end applications built on the lower modules.
//!
//! * [`style`]: binary visual/auditory classification of learners, with the
//!   tally, voting and staging rules that surround the model
//! * [`academic`]: the three-outcome student case study, on a local copy of
//!   the public table or on a planted synthetic stand-in

pub mod academic;
pub mod style;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{MetricsReport, OptimizerConfig, Solver};
use crate::data::SplitSpec;

pub use academic::{
    default_academic_config, generate_academic_synthetic, planted_model, run_academic_case_study,
    AcademicRun, AcademicSource,
};
pub use style::{
    aggregate_sessions, class_level_summary, default_style_config, generate_style_sessions,
    route_learner_stage, run_style_experiment, style_ratio_label, ClassSummary, Recommendation,
    StageLabel, StyleGenConfig, StyleLabel, StyleRun, StyleSession,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Style,
    Academic,
}

impl std::str::FromStr for Task {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "style" => Ok(Task::Style),
            "academic" => Ok(Task::Academic),
            other => Err(crate::Error::Parameter(format!("unknown task `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    External,
    Synthetic,
}

/// Everything a pipeline run reports, minus the fitted model itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub task: Task,
    pub solver: Solver,
    pub data_source: DataSource,
    pub config: OptimizerConfig,
    pub split: SplitSpec,
    pub target_name: String,
    pub class_names: Vec<String>,
    pub feature_names: Vec<String>,
    /// Training rows per class.
    pub class_distribution: Vec<usize>,
    pub train: MetricsReport,
    pub test: MetricsReport,
    pub converged: bool,
    pub iterations_used: usize,
    /// Test accuracy of a reference classifier: the planted posterior for
    /// synthetic academic data, the best score-difference cut for the style
    /// task.
    pub oracle_accuracy: Option<f64>,
    pub style_rules: Option<style::StyleRules>,
}

impl CaseStudyReport {
    /// Plain-text summary: training class counts, then accuracy and
    /// macro-averaged precision, recall and F1 as percentages with two
    /// decimals.
    pub fn text_block(&self) -> String {
        let mut out = String::from("Class distribution in the training data:\n");
        let width = self.class_names.iter().map(String::len).max().unwrap_or(0);
        let _ = writeln!(out, "{}", self.target_name);
        for (name, count) in self.class_names.iter().zip(&self.class_distribution) {
            let _ = writeln!(out, "{name:<width$}    {count}");
        }
        for (label, m) in [("Training", &self.train), ("Test", &self.test)] {
            let _ = writeln!(out, "{label} Accuracy: {:.2}%", 100.0 * m.accuracy);
            let _ = writeln!(
                out,
                "{label} Precision: {:.2}%",
                100.0 * m.macro_avg.precision
            );
            let _ = writeln!(out, "{label} Recall: {:.2}%", 100.0 * m.macro_avg.recall);
            let _ = writeln!(out, "{label} F1 Score: {:.2}%", 100.0 * m.macro_avg.f1);
        }
        out
    }
}
