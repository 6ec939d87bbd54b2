use serde::{Deserialize, Serialize};

use crate::assortment::Assortment;
use crate::error::{Error, Result};
use crate::model::ProblemInstance;

/// Feature slot kinds; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FeatureSlot {
    Utility { product: usize, segment: usize },
    Network { product: usize, segment: usize },
    FundingGap { product: usize },
    /// Weight of segment `segment`; the last segment is implied.
    SegmentWeight { segment: usize },
}

/// Flattening order for instance features: for each product its utilities,
/// its network sensitivities, then its funding gap; finally the first
/// `m − 1` segment weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub n: usize,
    pub m: usize,
}

impl FeatureLayout {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n * (2 * self.m + 1) + self.m.saturating_sub(1)
    }

    /// Number of label slots, `n·m`.
    pub fn label_dim(&self) -> usize {
        self.n * self.m
    }

    pub fn slots(&self) -> Vec<FeatureSlot> {
        let mut out = Vec::with_capacity(self.dim());
        for product in 0..self.n {
            out.extend((0..self.m).map(|segment| FeatureSlot::Utility { product, segment }));
            out.extend((0..self.m).map(|segment| FeatureSlot::Network { product, segment }));
            out.push(FeatureSlot::FundingGap { product });
        }
        out.extend((0..self.m.saturating_sub(1)).map(|segment| FeatureSlot::SegmentWeight { segment }));
        out
    }

    pub(crate) fn check(&self, n: usize, m: usize) -> Result<()> {
        if (self.n, self.m) != (n, m) {
            return Err(Error::invalid(format!(
                "feature layout is for n={} m={}, instance has n={n} m={m}",
                self.n, self.m
            )));
        }
        Ok(())
    }
}

pub fn encode_features(instance: &ProblemInstance, layout: &FeatureLayout) -> Result<Vec<f64>> {
    layout.check(instance.n(), instance.m())?;
    let mut x = Vec::with_capacity(layout.dim());
    for i in 0..instance.n() {
        x.extend_from_slice(instance.y().row(i));
        x.extend_from_slice(instance.alpha().row(i));
        x.push(instance.funding_gap()[i]);
    }
    let m = instance.m();
    x.extend_from_slice(&instance.lambda()[..m - 1]);
    debug_assert_eq!(x.len(), layout.dim());
    Ok(x)
}

/// 0/1 indicator with slot `i·m + j` set iff product `i` is offered to segment `j`.
pub fn encode_label(assortment: &Assortment, n: usize, m: usize) -> Result<Vec<f64>> {
    assortment.validate_for(n, m)?;
    let mut y = vec![0.0; n * m];
    for (j, set) in assortment.per_segment().iter().enumerate() {
        for &i in set {
            y[i * m + j] = 1.0;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::model::RevenueTerms;

    fn inst(n: usize, m: usize) -> ProblemInstance {
        let lambda = vec![1.0 / m as f64; m];
        ProblemInstance::with_unit_beta(
            Matrix::from_fn(n, m, |i, j| (10 * i + j) as f64),
            Matrix::from_fn(n, m, |i, j| (100 + 10 * i + j) as f64),
            (0..n).map(|i| 1000.0 + i as f64).collect(),
            lambda,
            RevenueTerms::default(),
        )
        .unwrap()
    }

    #[test]
    fn two_products_one_segment_order() {
        let layout = FeatureLayout::new(2, 1);
        assert_eq!(layout.dim(), 6);
        let x = encode_features(&inst(2, 1), &layout).unwrap();
        assert_eq!(x, vec![0.0, 100.0, 1000.0, 10.0, 110.0, 1001.0]);
    }

    #[test]
    fn two_segments_include_one_weight() {
        let layout = FeatureLayout::new(2, 2);
        assert_eq!(layout.dim(), 2 * 5 + 1);
        let x = encode_features(&inst(2, 2), &layout).unwrap();
        assert_eq!(x.len(), 11);
        assert_eq!(x[10], 0.5);
        assert_eq!(layout.slots()[10], FeatureSlot::SegmentWeight { segment: 0 });
        assert_eq!(layout.slots().len(), layout.dim());
    }

    #[test]
    fn funding_gap_change_touches_one_slot() {
        let layout = FeatureLayout::new(2, 1);
        let a = inst(2, 1);
        let b = ProblemInstance::with_unit_beta(
            a.y().clone(),
            a.alpha().clone(),
            vec![a.funding_gap()[0], 7.0],
            vec![1.0],
            RevenueTerms::default(),
        )
        .unwrap();
        let xa = encode_features(&a, &layout).unwrap();
        let xb = encode_features(&b, &layout).unwrap();
        let diff: Vec<usize> = (0..6).filter(|&s| xa[s] != xb[s]).collect();
        assert_eq!(diff, vec![5]);
    }

    #[test]
    fn layout_mismatch() {
        assert!(encode_features(&inst(2, 1), &FeatureLayout::new(3, 1)).is_err());
    }

    #[test]
    fn label_vectors() {
        let g = Assortment::shared(vec![0], 1).unwrap();
        assert_eq!(encode_label(&g, 2, 1).unwrap(), vec![1.0, 0.0]);
        let g = Assortment::shared(vec![0], 2).unwrap();
        assert_eq!(encode_label(&g, 2, 2).unwrap(), vec![1.0, 1.0, 0.0, 0.0]);
        let g = Assortment::shared(vec![0, 2], 1).unwrap();
        assert_eq!(encode_label(&g, 3, 1).unwrap(), vec![1.0, 0.0, 1.0]);
    }
}
