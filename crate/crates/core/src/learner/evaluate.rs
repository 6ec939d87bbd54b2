use serde::{Deserialize, Serialize};

use super::decode::decode_assortment;
use super::features::{encode_features, encode_label, FeatureLayout};
use super::regression::{fit_linear, predict_scores, LinearFit, PredictorModel};
use crate::assortment::{expected_revenue, AssortmentMode};
use crate::dataset::LabeledRecord;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Records whose optimal revenue is below this are left out of mean PRL.
pub const PRL_MIN_REVENUE: f64 = 1e-15;

/// Percentage revenue loss `100 (r_a − r_c) / r_a`.
pub fn prl(r_a: f64, r_c: f64) -> Result<f64> {
    if !(r_a > 0.0) {
        return Err(Error::UndefinedMetric(format!(
            "PRL needs positive optimal revenue, got {r_a}"
        )));
    }
    Ok(100.0 * (r_a - r_c) / r_a)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub model: PredictorModel,
    pub fit: LinearFit,
}

/// Fits the predictor on `records` in the canonical layout.
pub fn train(records: &[LabeledRecord]) -> Result<TrainedModel> {
    let first = records
        .first()
        .ok_or_else(|| Error::invalid("training set is empty"))?;
    let (n, m) = (first.instance.n(), first.instance.m());
    let layout = FeatureLayout::new(n, m);
    let d = layout.dim();
    let labels = layout.label_dim();

    let mut xs = Vec::with_capacity(records.len() * d);
    let mut ys = Vec::with_capacity(records.len() * labels);
    for r in records {
        xs.extend(encode_features(&r.instance, &layout)?);
        ys.extend(encode_label(&r.label, n, m)?);
    }
    let x = Matrix::from_row_major(records.len(), d, xs)?;
    let y = Matrix::from_row_major(records.len(), labels, ys)?;
    let fit = fit_linear(&x, &y)?;
    let model = PredictorModel::from_fit(layout, fit.clone())?;
    Ok(TrainedModel { model, fit })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleOutcome {
    pub idx: usize,
    pub r_a: f64,
    pub r_c: f64,
    /// `None` when `r_a` is below [`PRL_MIN_REVENUE`].
    pub prl: Option<f64>,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub test_count: usize,
    pub misclassified: usize,
    pub error_rate: f64,
    /// Mean over records with a defined PRL.
    pub mean_prl_percent: Option<f64>,
    pub prl_excluded: usize,
    pub r_a_min: f64,
    pub r_a_max: f64,
    pub r_a_mean: f64,
    pub examples: Vec<ExampleOutcome>,
}

/// Predicts, decodes and scores each test record against its stored label
/// and support matrix.
pub fn evaluate(
    model: &PredictorModel,
    test: &[LabeledRecord],
    mode: AssortmentMode,
) -> Result<EvaluationReport> {
    if test.is_empty() {
        return Err(Error::invalid("test set is empty"));
    }
    let mut examples = Vec::with_capacity(test.len());
    for r in test {
        let (n, m) = (r.instance.n(), r.instance.m());
        let x = encode_features(&r.instance, &model.layout)?;
        let scores = predict_scores(model, &x)?;
        let predicted = decode_assortment(&scores, r.label.k(), n, m, mode)?;
        let r_c = expected_revenue(&r.instance, &predicted, &r.q)?;
        let prl = if r.r_a >= PRL_MIN_REVENUE {
            Some(prl(r.r_a, r_c)?)
        } else {
            None
        };
        examples.push(ExampleOutcome {
            idx: r.idx,
            r_a: r.r_a,
            r_c,
            prl,
            correct: predicted == r.label,
        });
    }

    let test_count = examples.len();
    let misclassified = examples.iter().filter(|e| !e.correct).count();
    let defined: Vec<f64> = examples.iter().filter_map(|e| e.prl).collect();
    let mean_prl_percent =
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    let r_a = examples.iter().map(|e| e.r_a);
    Ok(EvaluationReport {
        test_count,
        misclassified,
        error_rate: misclassified as f64 / test_count as f64,
        mean_prl_percent,
        prl_excluded: test_count - defined.len(),
        r_a_min: r_a.clone().fold(f64::INFINITY, f64::min),
        r_a_max: r_a.clone().fold(f64::NEG_INFINITY, f64::max),
        r_a_mean: r_a.sum::<f64>() / test_count as f64,
        examples,
    })
}
