//! Fixed-point solver for the support matrix `q = σ(V(q))`.
//!
//! The map `h(q) = σ(V(q))` is monotone nondecreasing in `q` because the
//! network sensitivities are nonnegative. Iterating from the all-zeros matrix
//! therefore climbs monotonically to the smallest reachable fixed point, and
//! iterating from the all-ones matrix descends monotonically to the largest
//! fixed point `q̄`.

use serde::{Deserialize, Serialize};

use crate::choice::{logistic, mean_utility_unchecked};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::ProblemInstance;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Start {
    /// `q⁰ = 0`; the limit is a lower fixed point.
    ZeroStart,
    /// `q⁰ = 1`; the limit is the largest fixed point.
    OneStart,
}

impl Start {
    fn initial(self, n: usize, m: usize) -> Matrix {
        match self {
            Start::ZeroStart => Matrix::zeros(n, m),
            Start::OneStart => Matrix::filled(n, m, 1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportSolution {
    pub q: Matrix,
    pub start: Start,
    pub iterations: usize,
    /// `sup |q − h(q)|` for the returned `q`.
    pub residual: f64,
    pub converged: bool,
}

/// Applies `h` once.
pub fn support_map(instance: &ProblemInstance, q: &Matrix) -> Matrix {
    mean_utility_unchecked(instance, q).map(logistic)
}

/// Iterator over `q¹, q², …` for a given start. Never terminates on its own.
pub struct SupportIteration<'a> {
    instance: &'a ProblemInstance,
    current: Matrix,
}

impl<'a> SupportIteration<'a> {
    pub fn new(instance: &'a ProblemInstance, start: Start) -> Self {
        Self {
            instance,
            current: start.initial(instance.n(), instance.m()),
        }
    }

    pub fn current(&self) -> &Matrix {
        &self.current
    }
}

impl Iterator for SupportIteration<'_> {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        let next = support_map(self.instance, &self.current);
        self.current = next.clone();
        Some(next)
    }
}

/// Iterates `q ← h(q)` from `start` until successive iterates differ by at
/// most `tol` in sup-norm.
///
/// Hitting `max_iter` is not an error: the last iterate comes back with
/// `converged = false`.
pub fn solve_fixed_point(
    instance: &ProblemInstance,
    start: Start,
    tol: f64,
    max_iter: usize,
) -> Result<SupportSolution> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }

    let mut q = start.initial(instance.n(), instance.m());
    for iteration in 1..=max_iter {
        let next = support_map(instance, &q);
        let residual = next.sup_distance(&q);
        if residual <= tol {
            // `residual` is exactly sup|q − h(q)| for the q we hand back.
            return Ok(SupportSolution {
                q,
                start,
                iterations: iteration,
                residual,
                converged: true,
            });
        }
        q = next;
    }
    let residual = support_map(instance, &q).sup_distance(&q);
    Ok(SupportSolution {
        q,
        start,
        iterations: max_iter,
        residual,
        converged: false,
    })
}

/// Largest fixed point with the default tolerance and cap, failing on
/// non-convergence.
pub fn largest_fixed_point(instance: &ProblemInstance) -> Result<SupportSolution> {
    let sol = solve_fixed_point(instance, Start::OneStart, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    if !sol.converged {
        return Err(Error::NonConvergence {
            iterations: sol.iterations,
            residual: sol.residual,
        });
    }
    Ok(sol)
}
