use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use liftrule::data::Dataset;
use liftrule::harness::{self, EVAL_BETA};
use liftrule::lift::default_grid;
use liftrule::loaders::{load_csv_with_labels, parse_arff, parse_mulan_xml};
use liftrule::metrics::{Averaging, HeuristicSpec, DEFAULT_BETA};
use liftrule::model::{model_stats, RuleModel};
use liftrule::{learn, LearnerConfig, LiftFunction, SearchMode};

#[derive(Parser)]
#[command(name = "liftrule", version, about = "Multi-label rule learning with relaxed head search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a rule model and write it to a file.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        learner: LearnerArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one {0,1} column per label for every instance.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print an evaluation report as JSON.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        /// Beta of the reported F-measures.
        #[arg(long = "eval-beta", default_value_t = EVAL_BETA)]
        eval_beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Choose a lift function by k-fold cross-validation.
    CvSelect {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        learner: LearnerArgs,
        /// One lift spec per line; the built-in grid when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train and evaluate one model per grid point; writes JSON lines.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        learner: LearnerArgs,
        /// Evaluation data; the training data when omitted.
        #[arg(long)]
        test: Option<PathBuf>,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long = "eval-beta", default_value_t = EVAL_BETA)]
        eval_beta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print model characteristics as JSON.
    Stats {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    /// `.arff` (needs --labels-xml unless a model names the labels) or `.csv`.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    labels_xml: Option<PathBuf>,
    /// Number of trailing label columns in a CSV file.
    #[arg(long)]
    label_count: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    Precision,
    Ha,
    Fm,
}

#[derive(Clone, Copy, ValueEnum)]
enum AveragingArg {
    Micro,
    Macro,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pos,
    Posneg,
}

#[derive(Args)]
struct LearnerArgs {
    #[arg(long, value_enum, default_value = "fm")]
    heuristic: HeuristicArg,
    #[arg(long, value_enum, default_value = "macro")]
    averaging: AveragingArg,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, value_enum, default_value = "pos")]
    mode: ModeArg,
    /// `none`, `kln:k=0.2`, `peak:m=3,lmax=1.2,c=1` or `table:1,1.1,...`.
    #[arg(long, default_value = "none")]
    lift: LiftFunction,
    #[arg(long = "stop-fraction", default_value_t = 1.0)]
    stop_fraction: f64,
    #[arg(long)]
    max_rules: Option<usize>,
    #[arg(long)]
    no_label_conditions: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl LearnerArgs {
    fn config(&self) -> Result<LearnerConfig> {
        let averaging = match self.averaging {
            AveragingArg::Micro => Averaging::Micro,
            AveragingArg::Macro => Averaging::Macro,
        };
        let heuristic = match self.heuristic {
            HeuristicArg::Precision => HeuristicSpec::precision(averaging),
            HeuristicArg::Ha => HeuristicSpec::hamming(averaging),
            HeuristicArg::Fm => HeuristicSpec::f_measure(self.beta, averaging)?,
        };
        Ok(LearnerConfig {
            heuristic,
            lift: self.lift.clone(),
            mode: match self.mode {
                ModeArg::Pos => SearchMode::POSITIVE,
                ModeArg::Posneg => SearchMode::POSITIVE_NEGATIVE,
            },
            allow_label_conditions: !self.no_label_conditions,
            coverage_stop_fraction: self.stop_fraction,
            max_rules: self.max_rules,
            seed: self.seed,
        })
    }
}

fn is_arff(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("arff"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Loads a dataset; with a model at hand, labels default to the model's and
/// the result is aligned to its schema.
fn load(args: &DataArgs, path: &Path, model: Option<&RuleModel>) -> Result<Dataset> {
    let ds = if is_arff(path) {
        let labels = match (&args.labels_xml, model) {
            (Some(xml), _) => parse_mulan_xml(&read(xml)?)?,
            (None, Some(m)) => m.label_names().to_vec(),
            (None, None) => bail!("{}: ARFF input needs --labels-xml", path.display()),
        };
        parse_arff(&read(path)?, &labels).with_context(|| format!("loading {}", path.display()))?
    } else {
        let count = match (args.label_count, model) {
            (Some(c), _) => c,
            (None, Some(m)) => m.label_count(),
            (None, None) => bail!("{}: CSV input needs --label-count", path.display()),
        };
        if model.is_none() && count == 0 {
            bail!("--label-count must be positive");
        }
        load_csv_with_labels(path, count).with_context(|| format!("loading {}", path.display()))?
    };
    match model {
        Some(m) => Ok(ds.conform_to(m.schema(), m.label_names())?),
        None => Ok(ds),
    }
}

fn load_model(path: &Path) -> Result<RuleModel> {
    RuleModel::parse(&read(path)?).with_context(|| format!("parsing model {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn lift_grid(path: Option<&Path>, n: usize) -> Result<Vec<LiftFunction>> {
    let grid = match path {
        Some(p) => harness::parse_grid(&read(p)?)?,
        None => default_grid().into_iter().filter(|l| l.validate(n).is_ok()).collect(),
    };
    if grid.is_empty() {
        bail!("lift grid is empty");
    }
    Ok(grid)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { data, learner, out } => {
            let ds = load(&data, &data.data, None)?;
            let model = learn(&ds, &learner.config()?)?;
            fs::write(&out, model.serialize()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("{} rules written to {}", model.rules.len(), out.display());
        }
        Command::Predict { model, data, out } => {
            let model = load_model(&model)?;
            let ds = load(&data, &data.data, Some(&model))?;
            let mut text = model.label_names().join(",");
            text.push('\n');
            for p in model.predict_dataset(&ds)? {
                let row: Vec<&str> = p.bits().iter().map(|&b| if b { "1" } else { "0" }).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            fs::write(&out, text).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Evaluate {
            model,
            data,
            eval_beta,
            out,
        } => {
            let model = load_model(&model)?;
            let ds = load(&data, &data.data, Some(&model))?;
            let report = harness::evaluate_with_beta(&model, &ds, eval_beta)?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
        }
        Command::CvSelect {
            data,
            learner,
            grid,
            folds,
            out,
        } => {
            let ds = load(&data, &data.data, None)?;
            let grid = lift_grid(grid.as_deref(), ds.label_count())?;
            let selection = harness::select_lift(&ds, &grid, &learner.config()?, folds)?;
            emit(&serde_json::to_string_pretty(&selection)?, out.as_deref())?;
        }
        Command::Sweep {
            data,
            learner,
            test,
            grid,
            eval_beta,
            out,
        } => {
            let train = load(&data, &data.data, None)?;
            let test = match &test {
                Some(p) => load(&data, p, None)?.conform_to(train.schema(), train.label_names())?,
                None => train.clone(),
            };
            let grid = lift_grid(Some(&grid), train.label_count())?;
            let points = harness::sweep(&train, &test, &grid, &learner.config()?, eval_beta)?;
            fs::write(&out, harness::to_jsonl(&points)?).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Stats { model } => {
            let model = load_model(&model)?;
            println!("{}", serde_json::to_string_pretty(&model_stats(&model))?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
