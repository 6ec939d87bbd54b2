//! Seeded synthesis of problem instances and labeled datasets.
//!
//! All parameters except the funding gaps are i.i.d. `U[0, M]`; segment
//! weights are a normalized `U[0, M]` draw; `β ≡ 1`. Each record gets its
//! own generator seeded from `(master_seed, index)`, so records can be built
//! in any order or in parallel with identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assortment::{optimize_assortment, AssortmentMode};
use crate::dataset::{LabeledDataset, LabeledRecord};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{ProblemInstance, RevenueTerms};

/// Human-readable description of [`record_seed`], stored in dataset headers.
pub const SEED_MIX_DESCRIPTION: &str =
    "splitmix64(master_seed + (idx + 1) * 0x9E3779B97F4A7C15), wrapping u64 arithmetic";

/// Largest funding gap in dollar scale.
pub const DOLLAR_MAX: u32 = 10_000;

/// How funding gaps are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FMode {
    /// `F ~ U[0, M]`.
    #[default]
    UnitScale,
    /// `F` uniform on the integers `1..=10000`.
    DollarScale,
}

impl std::str::FromStr for FMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(FMode::UnitScale),
            "dollar" => Ok(FMode::DollarScale),
            other => Err(Error::invalid(format!(
                "unknown funding mode `{other}` (expected unit or dollar)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    /// Upper bound of the uniform parameter draws.
    #[serde(rename = "M")]
    pub bound: f64,
    pub network_effects: bool,
    pub f_mode: FMode,
    pub revenue: RevenueTerms,
    pub k: usize,
    pub mode: AssortmentMode,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            n: 2,
            m: 1,
            bound: 50.0,
            network_effects: true,
            f_mode: FMode::UnitScale,
            revenue: RevenueTerms::default(),
            k: 1,
            mode: AssortmentMode::Shared,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::invalid(format!(
                "need n >= 1 and m >= 1, got n={} m={}",
                self.n, self.m
            )));
        }
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::invalid(format!(
                "parameter bound M must be positive, got {}",
                self.bound
            )));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::invalid(format!(
                "assortment size k={} must satisfy 1 <= k <= n={}",
                self.k, self.n
            )));
        }
        self.revenue.validate()
    }
}

/// Per-record seed: splitmix64 of the master seed offset by the record index.
pub fn record_seed(master_seed: u64, idx: u64) -> u64 {
    let mut z = master_seed.wrapping_add(idx.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one instance. Draw order is fixed: `y`, `α`, `F`, raw `λ`. The
/// `α` matrix is drawn even without network effects, so paired runs with and
/// without them share every other parameter.
pub fn generate_instance(spec: &GenSpec, seed: u64) -> Result<ProblemInstance> {
    spec.validate()?;
    let (n, m, bound) = (spec.n, spec.m, spec.bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = |rng: &mut ChaCha8Rng| rng.random::<f64>() * bound;

    let y = Matrix::from_fn(n, m, |_, _| uniform(&mut rng));
    let mut alpha = Matrix::from_fn(n, m, |_, _| uniform(&mut rng));
    if !spec.network_effects {
        alpha = Matrix::zeros(n, m);
    }
    let gap: Vec<f64> = match spec.f_mode {
        FMode::UnitScale => (0..n).map(|_| uniform(&mut rng)).collect(),
        FMode::DollarScale => (0..n)
            .map(|_| f64::from(rng.random_range(1..=DOLLAR_MAX)))
            .collect(),
    };
    let raw: Vec<f64> = (0..m).map(|_| uniform(&mut rng)).collect();
    let lambda = normalize_weights(&raw);

    ProblemInstance::with_unit_beta(y, alpha, gap, lambda, spec.revenue)
}

/// `a / sum(a)`; a single segment always gets weight exactly 1.
pub fn normalize_weights(raw: &[f64]) -> Vec<f64> {
    if raw.len() == 1 {
        return vec![1.0];
    }
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / raw.len() as f64; raw.len()];
    }
    raw.iter().map(|a| a / total).collect()
}

fn label_record(spec: &GenSpec, idx: usize, seed: u64) -> Result<LabeledRecord> {
    let instance = generate_instance(spec, seed)?;
    let opt = optimize_assortment(&instance, spec.k, spec.mode)?;
    Ok(LabeledRecord {
        idx,
        seed,
        instance,
        q: opt.solution.q,
        label: opt.assortment,
        r_a: opt.revenue,
    })
}

/// Generates and labels `count` records. Records whose fixed point does not
/// converge are dropped; their indices are kept in `excluded`.
pub fn generate_dataset(spec: &GenSpec, count: usize, master_seed: u64) -> Result<LabeledDataset> {
    spec.validate()?;
    if count == 0 {
        return Err(Error::invalid("dataset count must be at least 1"));
    }
    let outcomes: Vec<Result<LabeledRecord>> = (0..count)
        .into_par_iter()
        .map(|idx| label_record(spec, idx, record_seed(master_seed, idx as u64)))
        .collect();

    let mut records = Vec::with_capacity(count);
    let mut excluded = Vec::new();
    for (idx, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(record) => records.push(record),
            Err(Error::NonConvergence { .. }) => excluded.push(idx),
            Err(e) => return Err(e),
        }
    }
    Ok(LabeledDataset {
        spec: spec.clone(),
        master_seed,
        count,
        excluded,
        records,
    })
}

/// Re-labels an existing dataset for a different `k` or mode. Instances and
/// their stored supports are kept.
pub fn relabel(dataset: &LabeledDataset, k: usize, mode: AssortmentMode) -> Result<LabeledDataset> {
    let mut spec = dataset.spec.clone();
    spec.k = k;
    spec.mode = mode;
    spec.validate()?;
    let records = dataset
        .records
        .par_iter()
        .map(|r| {
            let (label, r_a) =
                crate::assortment::optimize_with_support(&r.instance, k, mode, &r.q)?;
            Ok(LabeledRecord {
                label,
                r_a,
                ..r.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledDataset {
        spec,
        records,
        ..dataset.clone()
    })
}
