//! `edulearn`: generate synthetic data, train the case-study classifiers and
//! predict with a saved model.
//!
//! Exit status: 0 on success, 1 for runtime and data errors, 2 for usage
//! and configuration errors (including an unwritable output location).

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edulearn::classify::{self, OptimizerConfig, Solver};
use edulearn::data::{self, RawTable, Schema, SplitSpec};
use edulearn::pipelines::academic::{synthetic_schema, synthetic_table};
use edulearn::pipelines::style::{
    self, sessions_from_table, sessions_table, style_schema, StyleLabel, DEFAULT_PASS_THRESHOLD,
    STYLE_COLUMNS,
};
use edulearn::pipelines::{
    default_academic_config, default_style_config, generate_style_sessions,
    run_academic_case_study, AcademicSource, DataSource, StyleGenConfig, Task,
};

use crate::output::OutDir;
use crate::report::{validate_report, ModelFile, ReportFile};

const DEFAULT_TRAIN_FRACTION: f64 = 0.7;
const DEFAULT_ACADEMIC_ROWS: usize = 5000;
const OVERRIDE_KEYS: [&str; 8] = [
    "max_iter",
    "epochs",
    "learning_rate",
    "l2",
    "l1",
    "tol",
    "train_fraction",
    "pass_threshold",
];

#[derive(Parser)]
#[command(
    name = "edulearn",
    version,
    about = "Logistic-regression case studies for classroom data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic data set and its schema.
    Generate(GenerateArgs),
    /// Train a classifier and write report.json and model.json.
    Train(TrainArgs),
    /// Score a CSV with a saved model and write predictions.csv.
    Predict(PredictArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Style,
    Academic,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Style => Task::Style,
            TaskArg::Academic => Task::Academic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Lbfgs,
    Sgd,
    Gd,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Lbfgs => Solver::Lbfgs,
            SolverArg::Sgd => Solver::Sgd,
            SolverArg::Gd => Solver::Gd,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Prefix for every output file name.
    #[arg(long, default_value = "")]
    prefix: String,
}

#[derive(Args)]
struct GenArgs {
    /// Students (style) or rows (academic).
    #[arg(long)]
    n: Option<usize>,
    /// Sessions per student (style only).
    #[arg(long)]
    sessions: Option<usize>,
    /// Score noise standard deviation (style only).
    #[arg(long)]
    noise_std: Option<f64>,
    /// Share of visual learners (style only).
    #[arg(long)]
    visual_fraction: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, env = "EDULEARN_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    /// Training CSV; synthetic data is generated when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Schema of --input (academic task).
    #[arg(long)]
    schema: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, value_enum, default_value = "lbfgs")]
    solver: SolverArg,
    /// Seeds data generation, the split and SGD shuffling.
    #[arg(long, env = "EDULEARN_SEED", default_value_t = 0)]
    seed: u64,
    /// Iteration cap for gd and lbfgs [default: 1000].
    #[arg(long)]
    max_iter: Option<usize>,
    /// SGD epochs [default: 100].
    #[arg(long)]
    epochs: Option<usize>,
    /// SGD step size [default: 0.01].
    #[arg(long)]
    learning_rate: Option<f64>,
    /// L1 penalty, sgd only [default: 0].
    #[arg(long)]
    l1: Option<f64>,
    /// L2 penalty on the weights [default: 0.1 style, 1e-4 academic].
    #[arg(long)]
    l2: Option<f64>,
    /// Gradient ∞-norm stopping threshold for gd and lbfgs [default: 1e-6].
    #[arg(long)]
    tol: Option<f64>,
    /// Share of rows used for training [default: 0.7].
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Staging gate in percent (style task).
    #[arg(long)]
    pass_threshold: Option<f64>,
    /// `key=value` override; dedicated flags win over these.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print the report JSON instead of the text summary.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args)]
struct PredictArgs {
    /// model.json written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// CSV with the columns the model was trained on.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Usage(String),
    Runtime { kind: &'static str, message: String },
}

impl From<edulearn::Error> for Failure {
    fn from(e: edulearn::Error) -> Self {
        Failure::Runtime {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn runtime(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure::Runtime {
        kind,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime { kind, message }) => {
            eprintln!("error[{kind}]: {message}");
            ExitCode::from(1)
        }
    }
}

fn open_out(args: &OutArgs) -> Result<OutDir, Failure> {
    OutDir::create(&args.out, &args.prefix).or_else(|e| {
        usage(format!(
            "cannot create output directory {}: {e}",
            args.out.display()
        ))
    })
}

fn write(out: &OutDir, name: &str, contents: &[u8]) -> Result<PathBuf, Failure> {
    out.write(name, contents)
        .or_else(|e| usage(format!("cannot write {}: {e}", out.path(name).display())))
}

fn style_gen(gen: &GenArgs, seed: u64) -> Result<StyleGenConfig, Failure> {
    let d = StyleGenConfig::default();
    let cfg = StyleGenConfig {
        n_students: gen.n.unwrap_or(d.n_students),
        sessions_per_student: gen.sessions.unwrap_or(d.sessions_per_student),
        visual_fraction: gen.visual_fraction.unwrap_or(d.visual_fraction),
        noise_std: gen.noise_std.unwrap_or(d.noise_std),
        seed,
    };
    cfg.validate().or_else(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn reject_style_only(gen: &GenArgs) -> Result<(), Failure> {
    if gen.sessions.is_some() || gen.noise_std.is_some() || gen.visual_fraction.is_some() {
        return usage("--sessions, --noise-std and --visual-fraction only apply to --task style");
    }
    Ok(())
}

fn academic_rows(gen: &GenArgs) -> Result<usize, Failure> {
    let n = gen.n.unwrap_or(DEFAULT_ACADEMIC_ROWS);
    if n < 10 {
        return usage(format!(
            "--n must be at least 10 for the academic task, got {n}"
        ));
    }
    Ok(n)
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let (table, schema) = match args.task {
        TaskArg::Style => {
            let cfg = style_gen(&args.gen, args.seed)?;
            (
                sessions_table(&generate_style_sessions(&cfg)?),
                style_schema(),
            )
        }
        TaskArg::Academic => {
            reject_style_only(&args.gen)?;
            let n = academic_rows(&args.gen)?;
            (synthetic_table(n, args.seed)?, synthetic_schema())
        }
    };
    let out = open_out(&args.out)?;
    let csv = table.to_csv_string()?;
    let data_path = write(&out, "data.csv", csv.as_bytes())?;
    let schema_path = write(&out, "schema.json", schema.to_json()?.as_bytes())?;
    println!(
        "wrote {} rows to {} and the schema to {}",
        table.rows.len(),
        data_path.display(),
        schema_path.display()
    );
    Ok(())
}

/// Optimizer, split and staging settings after defaults, `--set` pairs and
/// dedicated flags, in that order of precedence (lowest first).
struct Settings {
    opt: OptimizerConfig,
    split: SplitSpec,
    pass_threshold: f64,
}

fn settings(args: &TrainArgs) -> Result<Settings, Failure> {
    let task: Task = args.task.into();
    let solver: Solver = args.solver.into();
    let mut opt = match task {
        Task::Style => OptimizerConfig {
            solver,
            ..default_style_config()
        },
        Task::Academic => default_academic_config(solver),
    };
    opt.seed = args.seed;
    let mut train_fraction = DEFAULT_TRAIN_FRACTION;
    let mut pass_threshold = DEFAULT_PASS_THRESHOLD;

    for pair in &args.overrides {
        let Some((key, value)) = pair.split_once('=') else {
            return usage(format!("--set expects KEY=VALUE, got `{pair}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        let float = || {
            value
                .parse::<f64>()
                .or_else(|_| usage(format!("--set {key}: `{value}` is not a number")))
        };
        let count = || {
            value.parse::<usize>().or_else(|_| {
                usage(format!(
                    "--set {key}: `{value}` is not a non-negative integer"
                ))
            })
        };
        match key {
            "max_iter" => opt.max_iter = count()?,
            "epochs" => opt.epochs = count()?,
            "learning_rate" => opt.learning_rate = float()?,
            "l2" => opt.l2 = float()?,
            "l1" => opt.l1 = float()?,
            "tol" => opt.tol = float()?,
            "train_fraction" => train_fraction = float()?,
            "pass_threshold" => pass_threshold = float()?,
            other => {
                return usage(format!(
                    "unknown override key `{other}`; expected one of {}",
                    OVERRIDE_KEYS.join(", ")
                ))
            }
        }
    }

    if let Some(v) = args.max_iter {
        opt.max_iter = v;
    }
    if let Some(v) = args.epochs {
        opt.epochs = v;
    }
    if let Some(v) = args.learning_rate {
        opt.learning_rate = v;
    }
    if let Some(v) = args.l1 {
        opt.l1 = v;
    }
    if let Some(v) = args.l2 {
        opt.l2 = v;
    }
    if let Some(v) = args.tol {
        opt.tol = v;
    }
    train_fraction = args.train_fraction.unwrap_or(train_fraction);
    pass_threshold = args.pass_threshold.unwrap_or(pass_threshold);

    opt.validate().or_else(|e| usage(e.to_string()))?;
    let split = SplitSpec::new(train_fraction, args.seed).or_else(|e| usage(e.to_string()))?;
    if !(0.0..=100.0).contains(&pass_threshold) {
        return usage(format!(
            "pass_threshold must lie in [0, 100], got {pass_threshold}"
        ));
    }
    Ok(Settings {
        opt,
        split,
        pass_threshold,
    })
}

fn train(args: TrainArgs) -> Result<(), Failure> {
    let s = settings(&args)?;
    let task: Task = args.task.into();
    let (report, model, scaler, schema) = match task {
        Task::Style => {
            let run = match &args.input {
                Some(path) => {
                    let table = RawTable::read_path(path)?;
                    if let Some(schema_path) = &args.schema {
                        data::encode(&table, &Schema::load(schema_path)?)?;
                    }
                    let records = sessions_from_table(&table)?
                        .into_iter()
                        .enumerate()
                        .map(|(row, (session, label))| {
                            label
                                .map(|l| (session, l))
                                .ok_or_else(|| edulearn::Error::Schema {
                                    column: "style".into(),
                                    reason: format!(
                                        "training input needs labels (row {row} has none)"
                                    ),
                                })
                        })
                        .collect::<edulearn::Result<Vec<_>>>()?;
                    style::run_style_on_records(
                        &records,
                        &s.opt,
                        &s.split,
                        s.pass_threshold,
                        DataSource::External,
                    )?
                }
                None => {
                    let gen = style_gen(&args.gen, args.seed)?;
                    style::run_style_experiment(&gen, &s.opt, &s.split, s.pass_threshold)?
                }
            };
            (run.report, run.model, run.scaler, run.schema)
        }
        Task::Academic => {
            reject_style_only(&args.gen)?;
            let source = match (&args.input, &args.schema) {
                (Some(data), Some(schema)) => AcademicSource::Csv {
                    data: data.clone(),
                    schema: schema.clone(),
                },
                (None, None) => AcademicSource::Synthetic {
                    n_rows: academic_rows(&args.gen)?,
                    seed: args.seed,
                },
                _ => {
                    return usage(
                        "--input and --schema must be given together for the academic task",
                    )
                }
            };
            let run = run_academic_case_study(&source, &s.split, &s.opt)?;
            (run.report, run.model, run.scaler, run.schema)
        }
    };

    let out = open_out(&args.out)?;
    let report_json = output::to_json(&ReportFile::new(&report)).map_err(edulearn::Error::from)?;
    validate_report(&report_json).map_err(|e| runtime("ReportSchemaError", e))?;
    let model_file = ModelFile::new(
        task,
        &model,
        report.feature_names.clone(),
        s.opt,
        scaler,
        schema,
    );
    let model_json = output::to_json(&model_file).map_err(edulearn::Error::from)?;
    write(&out, "report.json", report_json.as_bytes())?;
    write(&out, "model.json", model_json.as_bytes())?;
    if args.json {
        print!("{report_json}");
    } else {
        print!("{}", report.text_block());
        if !report.converged {
            println!("warning: solver stopped at the iteration cap before reaching tol");
        }
    }
    Ok(())
}

fn load_model(path: &Path) -> Result<ModelFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| runtime("IoError", format!("cannot read {}: {e}", path.display())))?;
    let model: ModelFile = serde_json::from_str(&text).map_err(edulearn::Error::from)?;
    if model.model_version != report::MODEL_VERSION {
        return Err(runtime(
            "ModelFormatError",
            format!("unsupported model_version {}", model.model_version),
        ));
    }
    Ok(model)
}

/// Design matrix for a style-session CSV; every session column must be
/// present and nothing else may be.
fn style_features(table: &RawTable) -> Result<edulearn::linalg::DenseMatrix, Failure> {
    let known = |h: &str| STYLE_COLUMNS.contains(&h);
    if let Some(extra) = table.header.iter().find(|h| !known(h)) {
        return Err(edulearn::Error::Schema {
            column: extra.clone(),
            reason: "column is not a style-session column".into(),
        }
        .into());
    }
    let sessions: Vec<_> = sessions_from_table(table)?
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    Ok(style::style_design_matrix(&sessions)?)
}

fn predict(args: PredictArgs) -> Result<(), Failure> {
    let file = load_model(&args.model)?;
    let model = file.model()?;
    let table = RawTable::read_path(&args.input)?;
    let x = match file.task {
        Task::Style => style_features(&table)?,
        Task::Academic => data::encode_features(&table, &file.schema)?,
    };
    let z = data::transform(&file.scaler, &x)?;
    let labels = classify::predict(&model, &z)?;
    let probs = classify::class_probabilities(&model, &z)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["row".to_string(), "predicted".to_string()];
    header.extend(file.class_names.iter().map(|c| format!("p_{c}")));
    let csv_err = |e: csv::Error| Failure::from(edulearn::Error::from(e));
    w.write_record(&header).map_err(csv_err)?;
    for (i, &label) in labels.iter().enumerate() {
        let mut record = vec![i.to_string(), file.class_names[label].clone()];
        record.extend(probs.row(i).iter().map(|p| p.to_string()));
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| runtime("IoError", e.to_string()))?;

    let out = open_out(&args.out)?;
    let path = write(&out, "predictions.csv", &bytes)?;
    if file.task == Task::Style {
        let visual = labels
            .iter()
            .filter(|&&l| l == StyleLabel::Visual.index())
            .count();
        println!("{visual} of {} rows predicted visual", labels.len());
    }
    println!("wrote {} predictions to {}", labels.len(), path.display());
    Ok(())
}
