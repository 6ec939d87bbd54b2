//! Multivariate least squares `Y ≈ b + B x`.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::features::FeatureLayout;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const MODEL_FORMAT_VERSION: u64 = 1;

/// Raw output of [`fit_linear`].
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    /// Length `L`.
    pub intercept: Vec<f64>,
    /// `L × d`.
    pub coefficients: Matrix,
    /// Numerical rank of the intercept-augmented design.
    pub rank: usize,
    /// Set when the augmented design has rank below `d + 1`; the returned
    /// coefficients are then the minimum-norm solution.
    pub rank_deficient: bool,
}

/// Fits intercept and coefficients minimizing `Σ ‖Y_r − (b + B x_r)‖²`.
///
/// `x` is `N × d`, `y` is `N × L`. Requires `N > d`. Solved by SVD of the
/// column-equilibrated design, so rank-deficient designs (e.g. an all-zero
/// feature column) get the minimum-norm solution in equilibrated units.
pub fn fit_linear(x: &Matrix, y: &Matrix) -> Result<LinearFit> {
    let (rows, d) = x.shape();
    if y.rows() != rows {
        return Err(Error::dims("label rows", rows, y.rows()));
    }
    if rows <= d {
        return Err(Error::Underdetermined {
            rows,
            params: d + 1,
        });
    }
    if x.as_slice().iter().chain(y.as_slice()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("design and targets must be finite"));
    }
    let labels = y.cols();

    let design = DMatrix::from_fn(rows, d + 1, |r, c| if c == 0 { 1.0 } else { x.get(r, c - 1) });
    let scales: Vec<f64> = design
        .column_iter()
        .map(|col| {
            let norm = col.norm();
            if norm > 0.0 {
                norm
            } else {
                1.0
            }
        })
        .collect();
    let scaled = DMatrix::from_fn(rows, d + 1, |r, c| design[(r, c)] / scales[c]);
    let targets = DMatrix::from_fn(rows, labels, |r, c| y.get(r, c));

    let svd = scaled.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let eps = sigma_max * f64::EPSILON * (rows.max(d + 1) as f64);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let solution = svd
        .solve(&targets, eps)
        .map_err(|e| Error::invalid(format!("least-squares solve failed: {e}")))?;

    let intercept = (0..labels).map(|l| solution[(0, l)] / scales[0]).collect();
    let coefficients = Matrix::from_fn(labels, d, |l, c| solution[(c + 1, l)] / scales[c + 1]);
    Ok(LinearFit {
        intercept,
        coefficients,
        rank,
        rank_deficient: rank < d + 1,
    })
}

/// Fitted affine map from encoded features to label scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictorModel {
    pub layout: FeatureLayout,
    pub intercept: Vec<f64>,
    pub coefficients: Matrix,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u64,
    #[serde(flatten)]
    model: PredictorModel,
}

impl PredictorModel {
    pub fn from_fit(layout: FeatureLayout, fit: LinearFit) -> Result<Self> {
        let model = Self {
            layout,
            intercept: fit.intercept,
            coefficients: fit.coefficients,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let labels = self.layout.label_dim();
        if self.intercept.len() != labels {
            return Err(Error::dims("intercept length", labels, self.intercept.len()));
        }
        self.coefficients
            .check_shape("coefficients", labels, self.layout.dim())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        };
        Ok(serde_json::to_string_pretty(&file).map_err(std::io::Error::from)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), "model", e.to_string()))?;
        let version = raw
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::parse(1, "format_version", "missing or not an integer"))?;
        if version != MODEL_FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        let file: ModelFile =
            serde_json::from_value(raw).map_err(|e| Error::parse(1, "model", e.to_string()))?;
        file.model.validate()?;
        Ok(file.model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// `b + B x`.
pub fn predict_scores(model: &PredictorModel, x: &[f64]) -> Result<Vec<f64>> {
    let d = model.layout.dim();
    if x.len() != d {
        return Err(Error::dims("feature vector length", d, x.len()));
    }
    Ok(model
        .intercept
        .iter()
        .enumerate()
        .map(|(l, b)| {
            b + model
                .coefficients
                .row(l)
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
        })
        .collect())
}

/// Training residual `Σ ‖Y_r − (b + B x_r)‖²`.
pub fn residual_sum_of_squares(
    intercept: &[f64],
    coefficients: &Matrix,
    x: &Matrix,
    y: &Matrix,
) -> f64 {
    let mut total = 0.0;
    for r in 0..x.rows() {
        for l in 0..y.cols() {
            let pred: f64 = intercept[l]
                + coefficients
                    .row(l)
                    .iter()
                    .zip(x.row(r))
                    .map(|(w, v)| w * v)
                    .sum::<f64>();
            let e = y.get(r, l) - pred;
            total += e * e;
        }
    }
    total
}
