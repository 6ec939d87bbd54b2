//! Named experiment configurations.

use std::path::PathBuf;

use assort_core::{AssortmentMode, GenSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_COUNT: usize = 500;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.75;
pub const DEFAULT_SEED: u64 = 1;

/// Published metrics for a preset. Informational only: the original
/// instances were never released, so these are magnitudes to compare
/// against, not targets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    pub error_rate: f64,
    pub mean_prl_percent: f64,
    pub r_a_mean: f64,
    pub r_a_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub case_id: String,
    pub spec: GenSpec,
    pub count: usize,
    pub train_fraction: f64,
    pub master_seed: u64,
    /// Artifacts are written here when set.
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceValues>,
}

impl CaseConfig {
    pub fn custom(case_id: impl Into<String>, spec: GenSpec) -> Self {
        Self {
            case_id: case_id.into(),
            spec,
            count: DEFAULT_COUNT,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            master_seed: DEFAULT_SEED,
            out_dir: None,
            reference: None,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.spec
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        if self.count == 0 {
            return Err(CliError::config("count must be at least 1"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(CliError::config(format!(
                "train fraction must lie strictly between 0 and 1, got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }

    /// `⌊count · train_fraction⌋`: records with a smaller index train the model.
    pub fn train_cutoff(&self) -> usize {
        // nudge so that e.g. 100 × 0.29 does not floor to 28
        (self.count as f64 * self.train_fraction + 1e-9).floor() as usize
    }
}

/// `(name, n, m, k, network_effects, mode, reference)`.
type PresetRow = (&'static str, usize, usize, usize, bool, AssortmentMode, ReferenceValues);

const fn refs(error_rate: f64, mean_prl_percent: f64, r_a_mean: f64, r_a_max: f64) -> ReferenceValues {
    ReferenceValues {
        error_rate,
        mean_prl_percent,
        r_a_mean,
        r_a_max,
    }
}

const SHARED: AssortmentMode = AssortmentMode::Shared;

const PRESETS: &[PresetRow] = &[
    ("case1p1", 2, 1, 1, true, SHARED, refs(0.032, 2.40, 0.3159, 0.44)),
    ("case1p2", 2, 1, 1, false, SHARED, refs(0.04, 1.20, 0.1990, 0.44)),
    ("case2p1", 3, 1, 1, true, SHARED, refs(0.12, 9.69, 0.3720, 0.44)),
    ("case2p2", 3, 1, 1, false, SHARED, refs(0.072, 5.42, 0.2594, 0.44)),
    ("case2p3", 3, 1, 2, true, SHARED, refs(0.152, 19.20, 0.5511, 0.88)),
    ("case3p1", 5, 1, 1, true, SHARED, refs(0.2, 27.69, 0.4176, 0.44)),
    ("case3p2", 5, 1, 1, false, SHARED, refs(0.096, 8.78, 0.7399, 0.88)),
    ("case3p3", 5, 1, 2, true, SHARED, refs(0.176, 33.51, 0.7399, 0.88)),
    ("case3p4", 5, 1, 3, true, SHARED, refs(0.24, 52.71, 0.9295, 1.32)),
    ("case3p5", 5, 1, 4, true, SHARED, refs(0.248, 75.20, 0.9919, 1.72)),
    (
        "case4",
        2,
        2,
        1,
        true,
        AssortmentMode::PerSegment,
        refs(0.8, 42.78, 0.3580, 0.8537),
    ),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

pub fn preset(name: &str) -> CliResult<CaseConfig> {
    let &(id, n, m, k, network_effects, mode, reference) =
        PRESETS.iter().find(|p| p.0 == name).ok_or_else(|| {
            CliError::config(format!(
                "unknown preset `{name}`; valid presets: {}",
                preset_names().collect::<Vec<_>>().join(", ")
            ))
        })?;
    let spec = GenSpec {
        n,
        m,
        k,
        network_effects,
        mode,
        ..GenSpec::default()
    };
    Ok(CaseConfig {
        reference: Some(reference),
        ..CaseConfig::custom(id, spec)
    })
}
