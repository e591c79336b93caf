//! Visual/auditory learning-style classification.
//!
//! Sessions come from a planted generator: each student has a latent style,
//! and in every session the assessment in the matching modality is centred
//! on [`MATCHED_MEAN`] while the other is centred on [`UNMATCHED_MEAN`]. The
//! two means and the distributions of the remaining predictors are fixtures
//! chosen for testability, not measurements of real classrooms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{CaseStudyReport, DataSource, Task};
use crate::classify::{self, compute_metrics, OptimizerConfig, Solver};
use crate::data::{self, ColumnSchema, Dataset, RawTable, ScalerParams, Schema, SplitSpec};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Expected score in the student's own modality.
pub const MATCHED_MEAN: f64 = 80.0;
/// Expected score in the other modality.
pub const UNMATCHED_MEAN: f64 = 55.0;
/// Chance that the self-reported preference agrees with the latent style.
pub const PREFERENCE_AGREEMENT: f64 = 0.7;
/// Lesson lengths in minutes, drawn uniformly.
pub const LESSON_DURATIONS: [f64; 4] = [30.0, 45.0, 60.0, 90.0];
pub const INSTRUCTORS: u32 = 5;
/// Default pass mark for the staging gate, in percent.
pub const DEFAULT_PASS_THRESHOLD: f64 = 70.0;
/// Share of visual-high answers a student must exceed to count as visual.
/// [`style_ratio_label`] compares against it exactly as the fraction 13/20.
pub const VISUAL_RATIO: f64 = 0.65;

/// One assessment session of one student.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleSession {
    pub student_id: u32,
    pub instructor_id: u32,
    pub day: u32,
    pub visual_score: f64,
    pub auditory_score: f64,
    /// Minutes to comprehend the lesson.
    pub comprehension_time: f64,
    /// Self-reported preference, 1 = visual.
    pub prior_preferred_style: u8,
    /// Hour of delivery.
    pub time_of_day: f64,
    pub instructor_score: f64,
    /// Minutes.
    pub lesson_duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StyleLabel {
    Auditory,
    Visual,
}

impl StyleLabel {
    pub fn from_index(v: usize) -> Result<Self> {
        match v {
            0 => Ok(StyleLabel::Auditory),
            1 => Ok(StyleLabel::Visual),
            _ => Err(Error::Parameter(format!(
                "style label must be 0 or 1, got {v}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            StyleLabel::Auditory => 0,
            StyleLabel::Visual => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StyleLabel::Auditory => "auditory",
            StyleLabel::Visual => "visual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageLabel {
    Beginner,
    Advanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recommendation {
    BeginnerTrack,
    AdvancedTrack,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub beginner_fraction: f64,
    pub advanced_fraction: f64,
    pub recommendation: Recommendation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyleGenConfig {
    pub n_students: usize,
    pub sessions_per_student: usize,
    pub visual_fraction: f64,
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for StyleGenConfig {
    fn default() -> Self {
        Self {
            n_students: 200,
            sessions_per_student: 3,
            visual_fraction: 0.5,
            noise_std: 10.0,
            seed: 0,
        }
    }
}

impl StyleGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_students == 0 || self.sessions_per_student == 0 {
            return Err(Error::Parameter(
                "n_students and sessions_per_student must both be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.visual_fraction) {
            return Err(Error::Parameter(format!(
                "visual_fraction must lie in [0, 1], got {}",
                self.visual_fraction
            )));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::Parameter(format!(
                "noise_std must be ≥ 0, got {}",
                self.noise_std
            )));
        }
        Ok(())
    }
}

/// Sessions in student-major order, each paired with the student's latent
/// style.
///
/// Per session, in draw order: instructor (uniform 1..=5), the two scores
/// (planted mean plus `noise_std`·N(0,1), clamped to [0, 100]),
/// comprehension time U[10, 60], self-reported preference (agrees with the
/// latent style with probability 0.7), hour U[8, 18), instructor score
/// U[4, 10] and lesson length from {30, 45, 60, 90}.
pub fn generate_style_sessions(cfg: &StyleGenConfig) -> Result<Vec<(StyleSession, StyleLabel)>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.n_students * cfg.sessions_per_student);
    let score = |rng: &mut ChaCha8Rng, mean: f64| {
        let z: f64 = rng.sample(StandardNormal);
        (mean + cfg.noise_std * z).clamp(0.0, 100.0)
    };
    for student in 0..cfg.n_students {
        let visual = rng.random::<f64>() < cfg.visual_fraction;
        let label = if visual {
            StyleLabel::Visual
        } else {
            StyleLabel::Auditory
        };
        let (vm, am) = if visual {
            (MATCHED_MEAN, UNMATCHED_MEAN)
        } else {
            (UNMATCHED_MEAN, MATCHED_MEAN)
        };
        for day in 0..cfg.sessions_per_student {
            let instructor_id = rng.random_range(1..=INSTRUCTORS);
            let visual_score = score(&mut rng, vm);
            let auditory_score = score(&mut rng, am);
            let comprehension_time = rng.random_range(10.0..=60.0);
            let agrees = rng.random::<f64>() < PREFERENCE_AGREEMENT;
            let prior_preferred_style = u8::from(visual == agrees);
            let time_of_day = rng.random_range(8.0..18.0);
            let instructor_score = rng.random_range(4.0..=10.0);
            let lesson_duration = LESSON_DURATIONS[rng.random_range(0..LESSON_DURATIONS.len())];
            out.push((
                StyleSession {
                    student_id: student as u32,
                    instructor_id,
                    day: day as u32,
                    visual_score,
                    auditory_score,
                    comprehension_time,
                    prior_preferred_style,
                    time_of_day,
                    instructor_score,
                    lesson_duration,
                },
                label,
            ));
        }
    }
    Ok(out)
}

/// Visual iff strictly more than 65% of the answers favoured the visual
/// material. Exactly 65% stays auditory.
pub fn style_ratio_label(visual_high_tally: usize, total_assessments: usize) -> Result<StyleLabel> {
    if total_assessments == 0 {
        return Err(Error::Parameter("no assessments to tally".into()));
    }
    if visual_high_tally > total_assessments {
        return Err(Error::Parameter(format!(
            "tally {visual_high_tally} exceeds total {total_assessments}"
        )));
    }
    // integer form of tally/total > 0.65
    Ok(if 20 * visual_high_tally > 13 * total_assessments {
        StyleLabel::Visual
    } else {
        StyleLabel::Auditory
    })
}

/// Majority vote over per-session labels; a tie goes to auditory.
pub fn aggregate_sessions(labels: &[StyleLabel]) -> Result<StyleLabel> {
    if labels.is_empty() {
        return Err(Error::Parameter("no sessions to aggregate".into()));
    }
    let visual = labels.iter().filter(|&&l| l == StyleLabel::Visual).count();
    Ok(if 2 * visual > labels.len() {
        StyleLabel::Visual
    } else {
        StyleLabel::Auditory
    })
}

/// Two-step placement: an initial probe gates an advanced probe, and only a
/// student who passes both is advanced. `advanced_score` is required
/// exactly when the initial probe is passed; it is ignored otherwise.
pub fn route_learner_stage(
    initial_score: f64,
    advanced_score: Option<f64>,
    pass_threshold: f64,
) -> Result<StageLabel> {
    let percent = |v: f64, what: &str| {
        if (0.0..=100.0).contains(&v) {
            Ok(v)
        } else {
            Err(Error::Parameter(format!(
                "{what} must lie in [0, 100], got {v}"
            )))
        }
    };
    percent(initial_score, "initial_score")?;
    percent(pass_threshold, "pass_threshold")?;
    if initial_score < pass_threshold {
        return Ok(StageLabel::Beginner);
    }
    let advanced = advanced_score.ok_or_else(|| {
        Error::Parameter(format!(
            "initial score {initial_score} passed the {pass_threshold} gate, advanced score required"
        ))
    })?;
    percent(advanced, "advanced_score")?;
    Ok(if advanced >= pass_threshold {
        StageLabel::Advanced
    } else {
        StageLabel::Beginner
    })
}

/// Class-wide stage mix; the advanced track needs a strict majority.
pub fn class_level_summary(stages: &[StageLabel]) -> Result<ClassSummary> {
    if stages.is_empty() {
        return Err(Error::Parameter("no students to summarize".into()));
    }
    let advanced = stages
        .iter()
        .filter(|&&s| s == StageLabel::Advanced)
        .count();
    let n = stages.len() as f64;
    let advanced_fraction = advanced as f64 / n;
    Ok(ClassSummary {
        beginner_fraction: (stages.len() - advanced) as f64 / n,
        advanced_fraction,
        recommendation: if 2 * advanced > stages.len() {
            Recommendation::AdvancedTrack
        } else {
            Recommendation::BeginnerTrack
        },
    })
}

/// Names of the six model inputs, in design-matrix order.
pub const STYLE_FEATURES: [&str; 6] = [
    "score_difference",
    "comprehension_time",
    "prior_preferred_style",
    "time_of_day",
    "instructor_score",
    "lesson_duration",
];

/// Raw CSV columns written by [`sessions_table`].
pub const STYLE_COLUMNS: [&str; 11] = [
    "student_id",
    "instructor_id",
    "day",
    "visual_score",
    "auditory_score",
    "comprehension_time",
    "prior_preferred_style",
    "time_of_day",
    "instructor_score",
    "lesson_duration",
    "style",
];

/// Model inputs for one session. The two assessment scores enter as their
/// difference, which leaves six predictors.
pub fn style_features(s: &StyleSession) -> [f64; 6] {
    [
        s.visual_score - s.auditory_score,
        s.comprehension_time,
        f64::from(s.prior_preferred_style),
        s.time_of_day,
        s.instructor_score,
        s.lesson_duration,
    ]
}

pub fn style_design_matrix(sessions: &[StyleSession]) -> Result<DenseMatrix> {
    let values = sessions.iter().flat_map(style_features).collect();
    DenseMatrix::new(sessions.len(), STYLE_FEATURES.len(), values)
}

/// Schema of the session CSV: identifiers ignored, scores and predictors
/// numeric, target `style` in {auditory, visual}.
pub fn style_schema() -> Schema {
    let mut columns: Vec<ColumnSchema> = STYLE_COLUMNS[..10]
        .iter()
        .map(|&name| match name {
            "student_id" | "instructor_id" | "day" => ColumnSchema::ignored(name),
            _ => ColumnSchema::numeric(name),
        })
        .collect();
    columns.push(ColumnSchema::target("style", ["auditory", "visual"]));
    Schema::new(columns).expect("static style schema is valid")
}

/// Sessions as a raw CSV table. Floats use the shortest representation that
/// parses back to the same value.
pub fn sessions_table(records: &[(StyleSession, StyleLabel)]) -> RawTable {
    let rows = records
        .iter()
        .map(|(s, l)| {
            vec![
                s.student_id.to_string(),
                s.instructor_id.to_string(),
                s.day.to_string(),
                s.visual_score.to_string(),
                s.auditory_score.to_string(),
                s.comprehension_time.to_string(),
                s.prior_preferred_style.to_string(),
                s.time_of_day.to_string(),
                s.instructor_score.to_string(),
                s.lesson_duration.to_string(),
                l.name().to_string(),
            ]
        })
        .collect();
    RawTable {
        header: STYLE_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

/// Parses a session table produced by [`sessions_table`]. The target column
/// may be absent, in which case every label is `None`.
pub fn sessions_from_table(table: &RawTable) -> Result<Vec<(StyleSession, Option<StyleLabel>)>> {
    let col = |name: &str| table.header.iter().position(|h| h == name);
    let mut idx = [0usize; 10];
    for (slot, name) in idx.iter_mut().zip(&STYLE_COLUMNS[..10]) {
        *slot = col(name).ok_or_else(|| Error::Schema {
            column: name.to_string(),
            reason: "required column is missing from the input".into(),
        })?;
    }
    let target = col("style");
    table
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let field = |k: usize| -> Result<f64> {
                let raw = row[idx[k]].trim();
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        row: r,
                        column: STYLE_COLUMNS[k].to_string(),
                        value: raw.to_string(),
                    })
            };
            let label = target
                .map(|t| match row[t].trim() {
                    "visual" | "1" => Ok(StyleLabel::Visual),
                    "auditory" | "0" => Ok(StyleLabel::Auditory),
                    other => Err(Error::Label {
                        row: r,
                        column: "style".into(),
                        value: other.to_string(),
                    }),
                })
                .transpose()?;
            let session = StyleSession {
                student_id: field(0)? as u32,
                instructor_id: field(1)? as u32,
                day: field(2)? as u32,
                visual_score: field(3)?,
                auditory_score: field(4)?,
                comprehension_time: field(5)?,
                prior_preferred_style: u8::from(field(6)? >= 0.5),
                time_of_day: field(7)?,
                instructor_score: field(8)?,
                lesson_duration: field(9)?,
            };
            Ok((session, label))
        })
        .collect()
}

/// Labelled sessions as a dataset over the six design features.
pub fn style_dataset(records: &[(StyleSession, StyleLabel)]) -> Result<Dataset> {
    let sessions: Vec<StyleSession> = records.iter().map(|(s, _)| s.clone()).collect();
    Dataset::new(
        style_design_matrix(&sessions)?,
        records.iter().map(|(_, l)| l.index()).collect(),
        STYLE_FEATURES.iter().map(|s| s.to_string()).collect(),
        vec!["auditory".into(), "visual".into()],
        STYLE_COLUMNS.len(),
    )
}

/// Best single cut on the score difference, chosen on `train` and scored on
/// `test`: predicts visual iff `difference > cut`. Candidate cuts are the
/// midpoints between consecutive sorted training differences.
pub fn threshold_oracle_accuracy(train: &Dataset, test: &Dataset) -> f64 {
    let mut pts: Vec<(f64, usize)> = (0..train.n_rows())
        .map(|i| (train.features.get(i, 0), train.targets[i]))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    // cut below everything: all visual
    let mut correct = pts.iter().filter(|p| p.1 == 1).count();
    let mut best = (correct, f64::NEG_INFINITY);
    for i in 0..pts.len() {
        // moving pts[i] to the auditory side
        if pts[i].1 == 0 {
            correct += 1;
        } else {
            correct -= 1;
        }
        let tied = i + 1 < pts.len() && pts[i + 1].0 == pts[i].0;
        if !tied && correct > best.0 {
            let cut = match pts.get(i + 1) {
                Some(next) => 0.5 * (pts[i].0 + next.0),
                None => pts[i].0,
            };
            best = (correct, cut);
        }
    }
    let hits = (0..test.n_rows())
        .filter(|&i| usize::from(test.features.get(i, 0) > best.1) == test.targets[i])
        .count();
    hits as f64 / test.n_rows().max(1) as f64
}

/// Rule-based companions of the fitted model, computed per student over all
/// of their sessions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleRules {
    /// Share of students whose majority-voted model label matches the
    /// latent style.
    pub majority_vote_agreement: f64,
    /// Share of students whose 65% tally label matches the latent style.
    /// A session counts toward the tally when its visual score beats the
    /// auditory one.
    pub ratio_rule_agreement: f64,
    pub pass_threshold: f64,
    /// Stage mix when each student's first session is the initial probe
    /// and their second session (or the first again, for one-session
    /// students) is the advanced probe. The probe score is the one in the
    /// modality the model assigned to that student.
    pub staging: ClassSummary,
}

/// Output of [`run_style_experiment`].
#[derive(Debug, Clone)]
pub struct StyleRun {
    pub report: CaseStudyReport,
    pub model: classify::LogisticModel,
    pub scaler: ScalerParams,
    pub schema: Schema,
}

/// Generate → six-feature design matrix → seeded split → standardize on
/// the training rows → binary logistic fit → metrics on both halves.
pub fn run_style_experiment(
    gen: &StyleGenConfig,
    opt: &OptimizerConfig,
    split: &SplitSpec,
    pass_threshold: f64,
) -> Result<StyleRun> {
    let records = generate_style_sessions(gen)?;
    run_style_on_records(&records, opt, split, pass_threshold, DataSource::Synthetic)
}

/// [`run_style_experiment`] on sessions that already exist, such as a CSV
/// written by the generator.
pub fn run_style_on_records(
    records: &[(StyleSession, StyleLabel)],
    opt: &OptimizerConfig,
    split: &SplitSpec,
    pass_threshold: f64,
    source: DataSource,
) -> Result<StyleRun> {
    let ds = style_dataset(records)?;
    let (train, test) = data::split(&ds, split)?;
    let oracle = threshold_oracle_accuracy(&train, &test);
    let scaler = data::fit_scaler(&train.features)?;
    let train_z = train.with_features(data::transform(&scaler, &train.features)?)?;
    let test_z = test.with_features(data::transform(&scaler, &test.features)?)?;
    let model = classify::train(&train_z, opt)?;
    let train_metrics = compute_metrics(
        &train_z.targets,
        &classify::predict(&model, &train_z.features)?,
        2,
    )?;
    let test_metrics = compute_metrics(
        &test_z.targets,
        &classify::predict(&model, &test_z.features)?,
        2,
    )?;

    let all_z = data::transform(&scaler, &ds.features)?;
    let predicted = classify::predict(&model, &all_z)?;
    let rules = style_rules(records, &predicted, pass_threshold)?;

    let report = CaseStudyReport {
        task: Task::Style,
        solver: opt.solver,
        data_source: source,
        config: *opt,
        split: *split,
        target_name: "style".into(),
        class_names: ds.class_names.clone(),
        feature_names: ds.feature_names.clone(),
        class_distribution: train.class_counts(),
        train: train_metrics,
        test: test_metrics,
        converged: model.converged,
        iterations_used: model.iterations_used,
        oracle_accuracy: Some(oracle),
        style_rules: Some(rules),
    };
    Ok(StyleRun {
        report,
        model,
        scaler,
        schema: style_schema(),
    })
}

fn style_rules(
    records: &[(StyleSession, StyleLabel)],
    predicted: &[usize],
    pass_threshold: f64,
) -> Result<StyleRules> {
    let mut students: Vec<(StyleLabel, Vec<usize>)> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    for (i, (s, label)) in records.iter().enumerate() {
        let slot = *index.entry(s.student_id).or_insert_with(|| {
            students.push((*label, Vec::new()));
            students.len() - 1
        });
        students[slot].1.push(i);
    }
    let mut vote_hits = 0;
    let mut ratio_hits = 0;
    let mut stages = Vec::with_capacity(students.len());
    for (latent, rows) in &students {
        let labels = rows
            .iter()
            .map(|&i| StyleLabel::from_index(predicted[i]))
            .collect::<Result<Vec<_>>>()?;
        let voted = aggregate_sessions(&labels)?;
        vote_hits += usize::from(voted == *latent);
        let tally = rows
            .iter()
            .filter(|&&i| records[i].0.visual_score > records[i].0.auditory_score)
            .count();
        ratio_hits += usize::from(style_ratio_label(tally, rows.len())? == *latent);

        let probe = |i: usize| match voted {
            StyleLabel::Visual => records[i].0.visual_score,
            StyleLabel::Auditory => records[i].0.auditory_score,
        };
        let initial = probe(rows[0]);
        let advanced = probe(*rows.get(1).unwrap_or(&rows[0]));
        let gate_passed = initial >= pass_threshold;
        stages.push(route_learner_stage(
            initial,
            gate_passed.then_some(advanced),
            pass_threshold,
        )?);
    }
    let n = students.len() as f64;
    Ok(StyleRules {
        majority_vote_agreement: vote_hits as f64 / n,
        ratio_rule_agreement: ratio_hits as f64 / n,
        pass_threshold,
        staging: class_level_summary(&stages)?,
    })
}

/// Default optimizer settings for the style task: L-BFGS with `l2 = 0.1`.
pub fn default_style_config() -> OptimizerConfig {
    OptimizerConfig {
        l2: 0.1,
        ..OptimizerConfig::new(Solver::Lbfgs)
    }
}
