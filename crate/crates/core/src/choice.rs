//! Utility and choice-probability evaluation.
//!
//! Each offered product is an independent binary logit: a segment-`j`
//! customer backs product `i` with probability `σ(V_ij)`, where the mean
//! utility carries a network term proportional to the product's total
//! support mass across all segments.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::ProblemInstance;

/// Logistic function `e^v / (1 + e^v)`, evaluated without overflowing `exp`.
#[inline]
pub fn logistic(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

/// Total support mass per product: `s_i = Σ_j' λ_j' q_ij'`.
pub fn total_support_mass(instance: &ProblemInstance, q: &Matrix) -> Result<Vec<f64>> {
    instance.check_support(q)?;
    Ok(support_mass_unchecked(instance, q))
}

pub(crate) fn support_mass_unchecked(instance: &ProblemInstance, q: &Matrix) -> Vec<f64> {
    let lambda = instance.lambda();
    (0..instance.n())
        .map(|i| q.row(i).iter().zip(lambda).map(|(q, l)| l * q).sum())
        .collect()
}

/// Mean utility `V_ij = y_ij − β_ij F_i + α_ij s_i`.
pub fn mean_utility(instance: &ProblemInstance, q: &Matrix) -> Result<Matrix> {
    instance.check_support(q)?;
    Ok(mean_utility_unchecked(instance, q))
}

pub(crate) fn mean_utility_unchecked(instance: &ProblemInstance, q: &Matrix) -> Matrix {
    let mass = support_mass_unchecked(instance, q);
    let (y, alpha, beta, gap) = (
        instance.y(),
        instance.alpha(),
        instance.beta(),
        instance.funding_gap(),
    );
    Matrix::from_fn(instance.n(), instance.m(), |i, j| {
        y.get(i, j) - beta.get(i, j) * gap[i] + alpha.get(i, j) * mass[i]
    })
}

/// Componentwise logistic of a utility matrix.
pub fn choice_probability(v: &Matrix) -> Result<Matrix> {
    if v.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("utility matrix has a non-finite entry"));
    }
    Ok(v.map(logistic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RevenueTerms;

    fn instance(
        y: Vec<Vec<f64>>,
        alpha: Vec<Vec<f64>>,
        gap: Vec<f64>,
        lambda: Vec<f64>,
    ) -> ProblemInstance {
        ProblemInstance::with_unit_beta(
            Matrix::from_rows(y).unwrap(),
            Matrix::from_rows(alpha).unwrap(),
            gap,
            lambda,
            RevenueTerms::default(),
        )
        .unwrap()
    }

    #[test]
    fn support_mass_single_segment() {
        let inst = instance(vec![vec![0.0]], vec![vec![0.0]], vec![0.0], vec![1.0]);
        let q = Matrix::from_rows(vec![vec![0.5]]).unwrap();
        assert_eq!(total_support_mass(&inst, &q).unwrap(), vec![0.5]);
    }

    #[test]
    fn support_mass_two_segments() {
        let inst = instance(
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            vec![0.0, 0.0],
            vec![0.4, 0.6],
        );
        let q = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.5, 0.25]]).unwrap();
        let s = total_support_mass(&inst, &q).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
        // 0.4·0.5 + 0.6·0.25
        assert!((s[1] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn support_mass_rejects_bad_shape() {
        let inst = instance(vec![vec![0.0]], vec![vec![0.0]], vec![0.0], vec![1.0]);
        let q = Matrix::zeros(2, 1);
        assert!(matches!(
            total_support_mass(&inst, &q),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mean_utility_zero_parameters() {
        let inst = instance(vec![vec![0.0]], vec![vec![0.0]], vec![0.0], vec![1.0]);
        let v = mean_utility(&inst, &Matrix::filled(1, 1, 0.7)).unwrap();
        assert_eq!(v.get(0, 0), 0.0);
    }

    #[test]
    fn mean_utility_hand_value() {
        let inst = instance(vec![vec![5.0]], vec![vec![10.0]], vec![5.0], vec![1.0]);
        let v = mean_utility(&inst, &Matrix::filled(1, 1, 0.5)).unwrap();
        assert_eq!(v.get(0, 0), 5.0);
    }

    #[test]
    fn mean_utility_ignores_q_without_network_effects() {
        let inst = instance(
            vec![vec![3.0, -1.0]],
            vec![vec![0.0, 0.0]],
            vec![2.0],
            vec![0.3, 0.7],
        );
        let a = mean_utility(&inst, &Matrix::zeros(1, 2)).unwrap();
        let b = mean_utility(&inst, &Matrix::filled(1, 2, 1.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn logistic_values() {
        assert_eq!(logistic(0.0), 0.5);
        assert!((logistic(5.0) - 0.993307).abs() < 1e-6);
        let tiny = logistic(-50.0);
        assert!(tiny > 0.0 && tiny.is_finite());
        assert!(logistic(800.0) == 1.0);
        assert!(logistic(-800.0) >= 0.0);
    }

    #[test]
    fn choice_probability_rejects_nan() {
        let v = Matrix::from_rows(vec![vec![0.0, f64::NAN]]).unwrap();
        assert!(choice_probability(&v).is_err());
        let v = Matrix::from_rows(vec![vec![f64::INFINITY]]).unwrap();
        assert!(choice_probability(&v).is_err());
    }
}
