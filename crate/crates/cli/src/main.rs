use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use assort_core::learner::{evaluate, train, EvaluationReport, PredictorModel};
use assort_core::{generate::relabel, generate_dataset, read_dataset, write_dataset, GenSpec};
use assort_mnl::case::{run_case, split_records, CaseReport, DATASET_FILE, MODEL_FILE};
use assort_mnl::compare::compare_runs;
use assort_mnl::error::{CliError, CliResult, Stage};
use assort_mnl::preset::{preset, CaseConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "assort-mnl", version, about = "Assortment optimization under a logit model with network effects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Clone, Default)]
struct ShapeArgs {
    /// Start from a named preset (case1p1 … case4)
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Number of records to generate
    #[arg(long)]
    count: Option<usize>,
    /// Upper bound of the uniform parameter draws
    #[arg(long = "M")]
    bound: Option<f64>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Zero every network-effect sensitivity
    #[arg(long)]
    no_network_effects: bool,
    /// Funding gap scale: unit (U[0,M]) or dollar (1..=10000)
    #[arg(long)]
    f_mode: Option<String>,
    /// shared or per-segment
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and label a dataset
    Gen {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Output directory (default runs/<case>)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Re-label an existing dataset for another k or mode
    Label {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Fit the linear predictor on the training split of a dataset
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        train_fraction: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate a fitted model on the test split of a dataset
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        train_fraction: f64,
        /// Also write evaluation.json here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Generate, train and evaluate in one go
    Case {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare two case reports
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn parse<T: std::str::FromStr<Err = assort_core::Error>>(s: &str) -> CliResult<T> {
    s.parse().map_err(|e: assort_core::Error| CliError::config(e.to_string()))
}

fn build_config(shape: &ShapeArgs, out: Option<PathBuf>) -> CliResult<CaseConfig> {
    let mut config = match &shape.preset {
        Some(name) => preset(name)?,
        None => CaseConfig::custom("custom", GenSpec::default()),
    };
    let spec = &mut config.spec;
    if let Some(n) = shape.n {
        spec.n = n;
    }
    if let Some(m) = shape.m {
        spec.m = m;
    }
    if let Some(k) = shape.k {
        spec.k = k;
    }
    if let Some(bound) = shape.bound {
        spec.bound = bound;
    }
    if shape.no_network_effects {
        spec.network_effects = false;
    }
    if let Some(f) = &shape.f_mode {
        spec.f_mode = parse(f)?;
    }
    if let Some(mode) = &shape.mode {
        spec.mode = parse(mode)?;
    }
    if let Some(count) = shape.count {
        config.count = count;
    }
    if let Some(seed) = shape.seed {
        config.master_seed = seed;
    }
    if let Some(tf) = shape.train_fraction {
        config.train_fraction = tf;
    }
    config.out_dir = Some(out.unwrap_or_else(|| Path::new("runs").join(&config.case_id)));
    config.validate()?;
    Ok(config)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
    match format {
        Format::Json => {
            let json = serde_json::to_string_pretty(value)
                .map_err(|e| CliError::io(std::io::Error::from(e)))?;
            println!("{json}");
        }
        Format::Text => println!("{}", text()),
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(CliError::io)
}

fn load_dataset(path: &Path) -> CliResult<assort_core::LabeledDataset> {
    read_dataset(path).map_err(|e| {
        let mut err = CliError::at(Stage::Io, e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn summarize_eval(rep: &EvaluationReport) -> String {
    let prl = rep
        .mean_prl_percent
        .map_or_else(|| "n/a".to_owned(), |p| format!("{p:.2}%"));
    format!(
        "test records: {}\nerror rate:   {:.4} ({} misclassified)\nmean PRL:     {prl} ({} excluded)\nr_a (test):   min {:.4e} max {:.4} mean {:.4}",
        rep.test_count,
        rep.error_rate,
        rep.misclassified,
        rep.prl_excluded,
        rep.r_a_min,
        rep.r_a_max,
        rep.r_a_mean
    )
}

fn summarize_case(report: &CaseReport) -> String {
    let c = &report.config;
    let s = &c.spec;
    let mut out = format!(
        "case {} (n={} m={} k={} network effects {} mode {:?}, {} records, seed {})\n",
        c.case_id,
        s.n,
        s.m,
        s.k,
        if s.network_effects { "on" } else { "off" },
        s.mode,
        c.count,
        c.master_seed
    );
    out.push_str(&format!(
        "train/test:   {}/{} (excluded {})\n",
        report.train_count, report.test_count, report.excluded_records
    ));
    out.push_str(&summarize_eval(&report.evaluation));
    out.push_str(&format!(
        "\nr_a (all):    min {:.4e} max {:.4} mean {:.4}",
        report.dataset_r_a.min, report.dataset_r_a.max, report.dataset_r_a.mean
    ));
    if let Some(r) = &c.reference {
        out.push_str(&format!(
            "\nreference:    error rate {:.4}, mean PRL {:.2}%, mean r_a {:.4}",
            r.error_rate, r.mean_prl_percent, r.r_a_mean
        ));
    }
    out.push_str(&format!("\ntime:         {:.2}s", report.durations.total_s));
    out
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { shape, out, format } => {
            let config = build_config(&shape, out)?;
            let dir = config.out_dir.clone().expect("set by build_config");
            ensure_dir(&dir)?;
            let ds = generate_dataset(&config.spec, config.count, config.master_seed)
                .map_err(|e| CliError::at(Stage::Generate, e))?;
            let path = dir.join(DATASET_FILE);
            write_dataset(&ds, &path).map_err(|e| CliError::at(Stage::Io, e))?;
            #[derive(Serialize)]
            struct Summary<'a> {
                path: &'a Path,
                records: usize,
                excluded: usize,
            }
            let summary = Summary {
                path: &path,
                records: ds.records.len(),
                excluded: ds.excluded.len(),
            };
            emit(format, &summary, || {
                format!(
                    "wrote {} records ({} excluded) to {}",
                    summary.records,
                    summary.excluded,
                    path.display()
                )
            })
        }
        Command::Label {
            input,
            k,
            mode,
            out,
            format,
        } => {
            let ds = load_dataset(&input)?;
            let k = k.unwrap_or(ds.spec.k);
            let mode = match mode {
                Some(m) => parse(&m)?,
                None => ds.spec.mode,
            };
            let relabeled = relabel(&ds, k, mode).map_err(|e| CliError::at(Stage::Label, e))?;
            ensure_dir(&out)?;
            let path = out.join(DATASET_FILE);
            write_dataset(&relabeled, &path).map_err(|e| CliError::at(Stage::Io, e))?;
            emit(format, &relabeled.spec, || {
                format!("relabeled {} records with k={k} to {}", relabeled.records.len(), path.display())
            })
        }
        Command::Train {
            input,
            train_fraction,
            out,
            format,
        } => {
            let ds = load_dataset(&input)?;
            let config = CaseConfig {
                count: ds.count,
                train_fraction,
                ..CaseConfig::custom("train", ds.spec.clone())
            };
            config.validate()?;
            let (train_set, _) = split_records(&ds, config.train_cutoff());
            let trained = train(train_set).map_err(|e| CliError::at(Stage::Train, e))?;
            ensure_dir(&out)?;
            let path = out.join(MODEL_FILE);
            trained
                .model
                .save(&path)
                .map_err(|e| CliError::at(Stage::Io, e))?;
            emit(format, &trained.model, || {
                format!(
                    "fitted on {} records (rank {}{}) -> {}",
                    train_set.len(),
                    trained.fit.rank,
                    if trained.fit.rank_deficient { ", rank deficient" } else { "" },
                    path.display()
                )
            })
        }
        Command::Eval {
            input,
            model,
            train_fraction,
            out,
            format,
        } => {
            let ds = load_dataset(&input)?;
            let model = PredictorModel::load(&model).map_err(|e| CliError::at(Stage::Io, e))?;
            let config = CaseConfig {
                count: ds.count,
                train_fraction,
                ..CaseConfig::custom("eval", ds.spec.clone())
            };
            config.validate()?;
            let (_, test_set) = split_records(&ds, config.train_cutoff());
            let rep = evaluate(&model, test_set, ds.spec.mode)
                .map_err(|e| CliError::at(Stage::Eval, e))?;
            if let Some(dir) = out {
                ensure_dir(&dir)?;
                let text = serde_json::to_string_pretty(&rep)
                    .map_err(|e| CliError::io(std::io::Error::from(e)))?;
                fs::write(dir.join("evaluation.json"), text + "\n").map_err(CliError::io)?;
            }
            emit(format, &rep, || summarize_eval(&rep))
        }
        Command::Case { shape, out, format } => {
            let config = build_config(&shape, out)?;
            let report = run_case(&config)?;
            emit(format, &report, || summarize_case(&report))
        }
        Command::Compare {
            report_a,
            report_b,
            format,
        } => {
            let a = CaseReport::load(&report_a)?;
            let b = CaseReport::load(&report_b)?;
            let cmp = compare_runs(&a, &b)?;
            emit(format, &cmp, || {
                let mut s = format!("{} -> {}\n", cmp.case_a, cmp.case_b);
                for m in &cmp.metrics {
                    s.push_str(&format!(
                        "{:<18} {:>12.6} {:>12.6} {:>+12.6} {:?}\n",
                        m.metric, m.a, m.b, m.delta, m.direction
                    ));
                }
                s.trim_end().to_owned()
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(u8::try_from(err.exit_code).unwrap_or(1))
        }
    }
}
