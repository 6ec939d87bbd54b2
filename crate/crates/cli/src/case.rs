//! End-to-end experiment: generate, label, split, fit, evaluate.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use assort_core::dataset::write_dataset_to;
use assort_core::learner::{evaluate, train, EvaluationReport};
use assort_core::{generate_dataset, LabeledDataset, LabeledRecord};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult, Stage, EXIT_NON_CONVERGENCE};
use crate::preset::CaseConfig;

pub const REPORT_FORMAT_VERSION: u64 = 1;
pub const DATASET_FILE: &str = "dataset.jsonl";
pub const MODEL_FILE: &str = "model.json";
pub const REPORT_FILE: &str = "report.json";

/// Fraction of non-converged records above which a run is rejected.
pub const NON_CONVERGENCE_BUDGET: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevenueStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl RevenueStats {
    pub fn of(records: &[LabeledRecord]) -> Option<Self> {
        if records.is_empty() {
            return None;
        }
        let values = records.iter().map(|r| r.r_a);
        Some(Self {
            min: values.clone().fold(f64::INFINITY, f64::min),
            max: values.clone().fold(f64::NEG_INFINITY, f64::max),
            mean: values.sum::<f64>() / records.len() as f64,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageDurations {
    pub generate_s: f64,
    pub train_s: f64,
    pub evaluate_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Digests {
    pub dataset_sha256: String,
    pub model_sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub format_version: u64,
    pub config: CaseConfig,
    /// Optimal-revenue statistics over every labeled record.
    pub dataset_r_a: RevenueStats,
    pub train_count: usize,
    pub test_count: usize,
    pub excluded_records: usize,
    pub rank_deficient: bool,
    pub evaluation: EvaluationReport,
    pub durations: StageDurations,
    pub digests: Digests,
}

impl CaseReport {
    /// Copy with timings zeroed, for reproducibility comparisons.
    pub fn without_durations(&self) -> Self {
        Self {
            durations: StageDurations::default(),
            ..self.clone()
        }
    }

    pub fn load(path: impl AsRef<Path>) -> CliResult<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::new(
                Stage::Io,
                crate::error::EXIT_IO,
                format!("{}: line {}: {e}", path.display(), e.line()),
            )
        })
    }
}

/// Training records are those with index below the cutoff; excluded
/// records leave gaps but do not shift the split.
pub fn split_records(dataset: &LabeledDataset, cutoff: usize) -> (&[LabeledRecord], &[LabeledRecord]) {
    let at = dataset.records.partition_point(|r| r.idx < cutoff);
    dataset.records.split_at(at)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Files written so far; removed again unless the run completes.
struct Artifacts {
    written: Vec<PathBuf>,
    keep: bool,
}

impl Artifacts {
    fn write(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| {
            CliError::io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        self.written.push(path);
        Ok(())
    }
}

impl Drop for Artifacts {
    fn drop(&mut self) {
        if !self.keep {
            for path in &self.written {
                let _ = fs::remove_file(path);
            }
        }
    }
}

pub fn run_case(config: &CaseConfig) -> CliResult<CaseReport> {
    config.validate()?;
    let started = Instant::now();
    let mut artifacts = Artifacts {
        written: Vec::new(),
        keep: false,
    };
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir).map_err(CliError::io)?;
    }

    let t = Instant::now();
    let dataset = generate_dataset(&config.spec, config.count, config.master_seed)
        .map_err(|e| CliError::at(Stage::Generate, e))?;
    let excluded_fraction = dataset.excluded.len() as f64 / config.count as f64;
    if excluded_fraction > NON_CONVERGENCE_BUDGET {
        return Err(CliError::new(
            Stage::Generate,
            EXIT_NON_CONVERGENCE,
            format!(
                "{} of {} records failed to converge (budget {:.0}%)",
                dataset.excluded.len(),
                config.count,
                NON_CONVERGENCE_BUDGET * 100.0
            ),
        ));
    }
    let mut dataset_bytes = Vec::new();
    write_dataset_to(&dataset, &mut dataset_bytes).map_err(|e| CliError::at(Stage::Io, e))?;
    if let Some(dir) = &config.out_dir {
        artifacts.write(dir, DATASET_FILE, &dataset_bytes)?;
    }
    let generate_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (train_set, test_set) = split_records(&dataset, config.train_cutoff());
    let trained = train(train_set).map_err(|e| CliError::at(Stage::Train, e))?;
    let mut model_json = trained
        .model
        .to_json()
        .map_err(|e| CliError::at(Stage::Io, e))?;
    model_json.push('\n');
    if let Some(dir) = &config.out_dir {
        artifacts.write(dir, MODEL_FILE, model_json.as_bytes())?;
    }
    let train_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let evaluation = evaluate(&trained.model, test_set, config.spec.mode)
        .map_err(|e| CliError::at(Stage::Eval, e))?;
    let evaluate_s = t.elapsed().as_secs_f64();

    let report = CaseReport {
        format_version: REPORT_FORMAT_VERSION,
        config: config.clone(),
        dataset_r_a: RevenueStats::of(&dataset.records)
            .ok_or_else(|| CliError::new(Stage::Generate, EXIT_NON_CONVERGENCE, "no usable records"))?,
        train_count: train_set.len(),
        test_count: test_set.len(),
        excluded_records: dataset.excluded.len(),
        rank_deficient: trained.fit.rank_deficient,
        evaluation,
        durations: StageDurations {
            generate_s,
            train_s,
            evaluate_s,
            total_s: started.elapsed().as_secs_f64(),
        },
        digests: Digests {
            dataset_sha256: sha256_hex(&dataset_bytes),
            model_sha256: sha256_hex(model_json.as_bytes()),
        },
    };
    if let Some(dir) = &config.out_dir {
        let mut text = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::io(std::io::Error::from(e)))?;
        text.push('\n');
        artifacts.write(dir, REPORT_FILE, text.as_bytes())?;
    }
    artifacts.keep = true;
    Ok(report)
}
