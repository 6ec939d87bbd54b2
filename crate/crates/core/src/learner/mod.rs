//! Linear assortment predictor: encode instances and labels, fit `Y = b + BX`
//! by least squares, decode scores to the nearest valid assortment, and
//! score predictions by error rate and percentage revenue loss.

mod decode;
mod evaluate;
mod features;
mod regression;

pub use decode::{decode_assortment, SCORE_TIE_TOLERANCE};
pub use evaluate::{evaluate, prl, train, EvaluationReport, ExampleOutcome, TrainedModel, PRL_MIN_REVENUE};
pub use features::{encode_features, encode_label, FeatureLayout, FeatureSlot};
pub use regression::{
    fit_linear, predict_scores, residual_sum_of_squares, LinearFit, PredictorModel,
    MODEL_FORMAT_VERSION,
};
