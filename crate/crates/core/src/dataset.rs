//! Labeled datasets and their JSON Lines persistence.
//!
//! Line 1 is a header object; every following line is one record. Product
//! indices in labels are 1-based on disk and 0-based in memory.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::assortment::Assortment;
use crate::error::{Error, Result};
use crate::generate::{GenSpec, SEED_MIX_DESCRIPTION};
use crate::matrix::Matrix;
use crate::model::{ProblemInstance, RevenueTerms};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledRecord {
    pub idx: usize,
    pub seed: u64,
    pub instance: ProblemInstance,
    /// Largest fixed point used for labeling.
    pub q: Matrix,
    pub label: Assortment,
    /// Optimal expected revenue.
    pub r_a: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    pub spec: GenSpec,
    pub master_seed: u64,
    /// Number of records requested, including excluded ones.
    pub count: usize,
    /// Indices dropped because their fixed point did not converge.
    pub excluded: Vec<usize>,
    pub records: Vec<LabeledRecord>,
}

impl LabeledDataset {
    /// Splits into the first `train_len` records and the rest.
    pub fn split_at(&self, train_len: usize) -> (&[LabeledRecord], &[LabeledRecord]) {
        self.records.split_at(train_len.min(self.records.len()))
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u64,
    spec: GenSpec,
    master_seed: u64,
    count: usize,
    #[serde(default)]
    excluded: Vec<usize>,
    #[serde(default)]
    seed_mix: String,
}

#[derive(Serialize, Deserialize)]
struct LabelRepr {
    per_segment: Vec<Vec<usize>>,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct RecordRepr {
    idx: usize,
    seed: u64,
    y: Matrix,
    alpha: Matrix,
    beta: Matrix,
    #[serde(rename = "F")]
    funding_gap: Vec<f64>,
    lambda: Vec<f64>,
    revenue: RevenueTerms,
    q: Matrix,
    label: LabelRepr,
    r_a: f64,
}

impl From<&LabeledRecord> for RecordRepr {
    fn from(r: &LabeledRecord) -> Self {
        let inst = &r.instance;
        RecordRepr {
            idx: r.idx,
            seed: r.seed,
            y: inst.y().clone(),
            alpha: inst.alpha().clone(),
            beta: inst.beta().clone(),
            funding_gap: inst.funding_gap().to_vec(),
            lambda: inst.lambda().to_vec(),
            revenue: *inst.revenue(),
            q: r.q.clone(),
            label: LabelRepr {
                per_segment: r
                    .label
                    .per_segment()
                    .iter()
                    .map(|s| s.iter().map(|i| i + 1).collect())
                    .collect(),
                k: r.label.k(),
            },
            r_a: r.r_a,
        }
    }
}

impl RecordRepr {
    fn into_record(self, line: usize) -> Result<LabeledRecord> {
        let instance = ProblemInstance::new(
            self.y,
            self.alpha,
            self.beta,
            self.funding_gap,
            self.lambda,
            self.revenue,
        )
        .map_err(|e| Error::parse(line, "instance", e.to_string()))?;
        instance
            .check_support(&self.q)
            .map_err(|e| Error::parse(line, "q", e.to_string()))?;

        let mut sets = Vec::with_capacity(self.label.per_segment.len());
        for set in self.label.per_segment {
            let zero_based = set
                .into_iter()
                .map(|i| {
                    i.checked_sub(1)
                        .ok_or_else(|| Error::parse(line, "label", "product indices are 1-based"))
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(zero_based);
        }
        let label = Assortment::new(sets).map_err(|e| Error::parse(line, "label", e.to_string()))?;
        if label.k() != self.label.k {
            return Err(Error::parse(
                line,
                "label",
                format!("k={} disagrees with set size {}", self.label.k, label.k()),
            ));
        }
        label
            .validate_for(instance.n(), instance.m())
            .map_err(|e| Error::parse(line, "label", e.to_string()))?;

        Ok(LabeledRecord {
            idx: self.idx,
            seed: self.seed,
            instance,
            q: self.q,
            label,
            r_a: self.r_a,
        })
    }
}

pub fn write_dataset(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    write_dataset_to(dataset, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_dataset_to(dataset: &LabeledDataset, out: &mut impl Write) -> Result<()> {
    let header = Header {
        format_version: FORMAT_VERSION,
        spec: dataset.spec.clone(),
        master_seed: dataset.master_seed,
        count: dataset.count,
        excluded: dataset.excluded.clone(),
        seed_mix: SEED_MIX_DESCRIPTION.to_string(),
    };
    serde_json::to_writer(&mut *out, &header).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    for record in &dataset.records {
        serde_json::to_writer(&mut *out, &RecordRepr::from(record)).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let text = fs::read_to_string(path)?;
    parse_dataset(&text)
}

/// Parses a whole dataset file. Any defect fails the whole parse.
pub fn parse_dataset(text: &str) -> Result<LabeledDataset> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "header", "file is empty"))?;

    let raw: Value =
        serde_json::from_str(first).map_err(|e| Error::parse(1, "header", e.to_string()))?;
    let version = raw
        .get("format_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse(1, "format_version", "missing or not an integer"))?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let header: Header =
        serde_json::from_value(raw).map_err(|e| Error::parse(1, field_of(&e), e.to_string()))?;
    header
        .spec
        .validate()
        .map_err(|e| Error::parse(1, "spec", e.to_string()))?;

    let mut records = Vec::new();
    for (line, content) in lines {
        if content.trim().is_empty() {
            continue;
        }
        let repr: RecordRepr = serde_json::from_str(content)
            .map_err(|e| Error::parse(line, field_of(&e), e.to_string()))?;
        let record = repr.into_record(line)?;
        if (record.instance.n(), record.instance.m()) != (header.spec.n, header.spec.m) {
            return Err(Error::parse(
                line,
                "instance",
                "shape disagrees with header spec",
            ));
        }
        records.push(record);
    }

    let expected = header.count.saturating_sub(header.excluded.len());
    if records.len() != expected {
        return Err(Error::parse(
            text.lines().count(),
            "records",
            format!(
                "expected {expected} records ({} requested, {} excluded), found {}",
                header.count,
                header.excluded.len(),
                records.len()
            ),
        ));
    }

    Ok(LabeledDataset {
        spec: header.spec,
        master_seed: header.master_seed,
        count: header.count,
        excluded: header.excluded,
        records,
    })
}

/// Pulls a backticked field name out of a serde message, if there is one.
fn field_of(err: &serde_json::Error) -> String {
    let msg = err.to_string();
    msg.split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| "record".to_owned())
}
