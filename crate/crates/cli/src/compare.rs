use serde::{Deserialize, Serialize};

use crate::case::CaseReport;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Higher,
    Lower,
    Unchanged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub metric: String,
    pub a: f64,
    pub b: f64,
    /// `b − a`.
    pub delta: f64,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub case_a: String,
    pub case_b: String,
    pub metrics: Vec<MetricDelta>,
}

impl Comparison {
    pub fn metric(&self, name: &str) -> Option<&MetricDelta> {
        self.metrics.iter().find(|m| m.metric == name)
    }
}

/// Deltas (`b − a`) of the headline metrics of two runs with the same shape.
pub fn compare_runs(a: &CaseReport, b: &CaseReport) -> CliResult<Comparison> {
    let (sa, sb) = (&a.config.spec, &b.config.spec);
    if (sa.n, sa.m) != (sb.n, sb.m) {
        return Err(CliError::config(format!(
            "reports have different shapes: n={} m={} vs n={} m={}",
            sa.n, sa.m, sb.n, sb.m
        )));
    }
    let pairs = [
        ("error_rate", a.evaluation.error_rate, b.evaluation.error_rate),
        (
            "mean_prl_percent",
            a.evaluation.mean_prl_percent.unwrap_or(0.0),
            b.evaluation.mean_prl_percent.unwrap_or(0.0),
        ),
        ("r_a_mean", a.dataset_r_a.mean, b.dataset_r_a.mean),
        ("r_a_min", a.dataset_r_a.min, b.dataset_r_a.min),
        ("r_a_max", a.dataset_r_a.max, b.dataset_r_a.max),
    ];
    let metrics = pairs
        .into_iter()
        .map(|(metric, a, b)| {
            let delta = b - a;
            let direction = if delta > 0.0 {
                Direction::Higher
            } else if delta < 0.0 {
                Direction::Lower
            } else {
                Direction::Unchanged
            };
            MetricDelta {
                metric: metric.to_owned(),
                a,
                b,
                delta,
                direction,
            }
        })
        .collect();
    Ok(Comparison {
        case_a: a.config.case_id.clone(),
        case_b: b.config.case_id.clone(),
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::run_case;
    use crate::preset::preset;

    fn quick(name: &str) -> CaseReport {
        let mut c = preset(name).unwrap();
        c.count = 120;
        run_case(&c).unwrap()
    }

    #[test]
    fn identical_reports_have_zero_deltas() {
        let r = quick("case1p1");
        let cmp = compare_runs(&r, &r).unwrap();
        assert!(cmp.metrics.iter().all(|m| m.delta == 0.0 && m.direction == Direction::Unchanged));
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(compare_runs(&quick("case1p1"), &quick("case2p1")).is_err());
    }

    #[test]
    fn larger_assortments_earn_more() {
        let cmp = compare_runs(&quick("case3p1"), &quick("case3p3")).unwrap();
        let d = cmp.metric("r_a_mean").unwrap();
        assert!(d.delta > 0.0);
        assert_eq!(d.direction, Direction::Higher);
    }
}
