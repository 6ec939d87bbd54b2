use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Tolerance on `sum(lambda) == 1`.
pub const LAMBDA_SUM_TOL: f64 = 1e-12;

/// Platform fee terms. Per-contribution revenue is drawn from `U[a, b]`, but
/// only its mean enters expected revenue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevenueTerms {
    pub a: f64,
    pub b: f64,
    /// Share of each contribution kept by the platform.
    pub omega: f64,
    /// Share of total raised funds kept by the platform.
    pub xi: f64,
}

impl Default for RevenueTerms {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 10.0,
            omega: 0.05,
            xi: 0.03,
        }
    }
}

impl RevenueTerms {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.omega, self.xi]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("revenue terms must be finite"));
        }
        if !(0.0 <= self.a && self.a <= self.b) {
            return Err(Error::invalid(format!(
                "revenue bounds need 0 <= a <= b, got a={} b={}",
                self.a, self.b
            )));
        }
        if !(0.0..=1.0).contains(&self.omega) || !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::invalid(format!(
                "revenue shares must lie in [0, 1], got omega={} xi={}",
                self.omega, self.xi
            )));
        }
        Ok(())
    }

    /// Expected platform take per unit of support: `((a+b)/2)(omega+xi)`.
    pub fn scale(&self) -> f64 {
        0.5 * (self.a + self.b) * (self.omega + self.xi)
    }
}

/// One market snapshot: `n` products offered to `m` customer segments.
///
/// Matrices are indexed `[product][segment]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    y: Matrix,
    alpha: Matrix,
    beta: Matrix,
    funding_gap: Vec<f64>,
    lambda: Vec<f64>,
    revenue: RevenueTerms,
}

impl ProblemInstance {
    pub fn new(
        y: Matrix,
        alpha: Matrix,
        beta: Matrix,
        funding_gap: Vec<f64>,
        lambda: Vec<f64>,
        revenue: RevenueTerms,
    ) -> Result<Self> {
        let (n, m) = y.shape();
        if n == 0 || m == 0 {
            return Err(Error::invalid(format!(
                "need at least one product and one segment, got n={n} m={m}"
            )));
        }
        alpha.check_shape("alpha", n, m)?;
        beta.check_shape("beta", n, m)?;
        if funding_gap.len() != n {
            return Err(Error::dims("funding gap length", n, funding_gap.len()));
        }
        if lambda.len() != m {
            return Err(Error::dims("lambda length", m, lambda.len()));
        }
        let all_finite = y
            .as_slice()
            .iter()
            .chain(alpha.as_slice())
            .chain(beta.as_slice())
            .chain(&funding_gap)
            .chain(&lambda)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::invalid("instance parameters must be finite"));
        }
        if alpha.as_slice().iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("alpha must be nonnegative"));
        }
        if funding_gap.iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("funding gaps must be nonnegative"));
        }
        if lambda.iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("segment weights must be nonnegative"));
        }
        let total: f64 = lambda.iter().sum();
        if (total - 1.0).abs() > LAMBDA_SUM_TOL {
            return Err(Error::invalid(format!(
                "segment weights must sum to 1, got {total}"
            )));
        }
        revenue.validate()?;
        Ok(Self {
            y,
            alpha,
            beta,
            funding_gap,
            lambda,
            revenue,
        })
    }

    /// Same as [`ProblemInstance::new`] with every funding-goal sensitivity set to 1.
    pub fn with_unit_beta(
        y: Matrix,
        alpha: Matrix,
        funding_gap: Vec<f64>,
        lambda: Vec<f64>,
        revenue: RevenueTerms,
    ) -> Result<Self> {
        let beta = Matrix::filled(y.rows(), y.cols(), 1.0);
        Self::new(y, alpha, beta, funding_gap, lambda, revenue)
    }

    pub fn n(&self) -> usize {
        self.y.rows()
    }

    pub fn m(&self) -> usize {
        self.y.cols()
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn funding_gap(&self) -> &[f64] {
        &self.funding_gap
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn revenue(&self) -> &RevenueTerms {
        &self.revenue
    }

    pub fn has_network_effects(&self) -> bool {
        self.alpha.as_slice().iter().any(|&a| a != 0.0)
    }

    /// Checks that `q` is an n×m matrix with entries in `[0, 1]`.
    pub(crate) fn check_support(&self, q: &Matrix) -> Result<()> {
        q.check_shape("support matrix", self.n(), self.m())?;
        if q.as_slice().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("support probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}
