//! Assortments, expected revenue and exact revenue maximization.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{cmp_sums, exact_sum};
use crate::matrix::Matrix;
use crate::model::ProblemInstance;
use crate::solver::{largest_fixed_point, SupportSolution};

/// Whether every segment sees the same assortment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssortmentMode {
    #[default]
    Shared,
    PerSegment,
}

impl std::str::FromStr for AssortmentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shared" => Ok(AssortmentMode::Shared),
            "per-segment" => Ok(AssortmentMode::PerSegment),
            other => Err(Error::invalid(format!(
                "unknown assortment mode `{other}` (expected shared or per-segment)"
            ))),
        }
    }
}

/// One size-`k` set of product indices (0-based, ascending) per segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assortment {
    per_segment: Vec<Vec<usize>>,
    k: usize,
}

impl Assortment {
    /// Builds an assortment from per-segment index sets. Sets are sorted;
    /// duplicates or inconsistent sizes are rejected.
    pub fn new(per_segment: Vec<Vec<usize>>) -> Result<Self> {
        let k = per_segment.first().map_or(0, Vec::len);
        if per_segment.is_empty() {
            return Err(Error::invalid("assortment needs at least one segment"));
        }
        let mut sets = Vec::with_capacity(per_segment.len());
        for mut set in per_segment {
            if set.len() != k {
                return Err(Error::invalid(format!(
                    "every segment must offer {k} products, got {}",
                    set.len()
                )));
            }
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid("assortment repeats a product"));
            }
            sets.push(set);
        }
        Ok(Self {
            per_segment: sets,
            k,
        })
    }

    /// The same set offered to all `m` segments.
    pub fn shared(set: Vec<usize>, m: usize) -> Result<Self> {
        Self::new(vec![set; m.max(1)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn segments(&self) -> usize {
        self.per_segment.len()
    }

    pub fn segment(&self, j: usize) -> &[usize] {
        &self.per_segment[j]
    }

    pub fn per_segment(&self) -> &[Vec<usize>] {
        &self.per_segment
    }

    pub fn is_shared(&self) -> bool {
        self.per_segment.windows(2).all(|w| w[0] == w[1])
    }

    /// Checks the assortment against an instance with `n` products and `m` segments.
    pub fn validate_for(&self, n: usize, m: usize) -> Result<()> {
        if self.per_segment.len() != m {
            return Err(Error::dims("assortment segments", m, self.per_segment.len()));
        }
        if self.k == 0 || self.k > n {
            return Err(Error::invalid(format!(
                "assortment size {} outside 1..={n}",
                self.k
            )));
        }
        if let Some(&bad) = self.per_segment.iter().flatten().find(|&&i| i >= n) {
            return Err(Error::invalid(format!(
                "product index {bad} out of range for {n} products"
            )));
        }
        Ok(())
    }
}

/// Result of [`optimize_assortment`].
#[derive(Clone, Debug)]
pub struct Optimum {
    pub assortment: Assortment,
    pub revenue: f64,
    pub solution: SupportSolution,
}

/// `W = ((a+b)/2)(ω+ξ) Σ_j Σ_{i∈G_j} λ_j q_ij`.
pub fn expected_revenue(
    instance: &ProblemInstance,
    assortment: &Assortment,
    q: &Matrix,
) -> Result<f64> {
    instance.check_support(q)?;
    assortment.validate_for(instance.n(), instance.m())?;
    Ok(revenue_unchecked(instance, assortment.per_segment(), q))
}

fn revenue_unchecked(instance: &ProblemInstance, sets: &[Vec<usize>], q: &Matrix) -> f64 {
    instance.revenue().scale() * exact_sum(revenue_terms(instance, sets, q))
}

/// The products `λ_j q_ij` summed by the revenue, one per offered slot.
fn revenue_terms(instance: &ProblemInstance, sets: &[Vec<usize>], q: &Matrix) -> Vec<f64> {
    let mut terms = Vec::with_capacity(sets.iter().map(Vec::len).sum());
    for (j, (set, &weight)) in sets.iter().zip(instance.lambda()).enumerate() {
        terms.extend(set.iter().map(|&i| weight * q.get(i, j)));
    }
    terms
}

/// Keeps `candidate` only if its exact revenue mass strictly beats `best`.
/// Exact comparison matters: terms near 1 would otherwise absorb terms
/// around 1e-20 and turn strict orderings into ties.
fn keep_better(best: &mut Option<(Vec<f64>, Vec<usize>)>, terms: Vec<f64>, candidate: &[usize]) {
    if best
        .as_ref()
        .is_none_or(|(bt, _)| cmp_sums(&terms, bt) == Ordering::Greater)
    {
        *best = Some((terms, candidate.to_vec()));
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "assortment size k={k} must satisfy 1 <= k <= {n}"
        )));
    }
    Ok(())
}

/// Maximizes expected revenue over all size-`k` assortments using the largest
/// fixed point of the support map.
pub fn optimize_assortment(
    instance: &ProblemInstance,
    k: usize,
    mode: AssortmentMode,
) -> Result<Optimum> {
    check_k(k, instance.n())?;
    let solution = largest_fixed_point(instance)?;
    let (assortment, revenue) = optimize_with_support(instance, k, mode, &solution.q)?;
    Ok(Optimum {
        assortment,
        revenue,
        solution,
    })
}

/// Exhaustive maximization for a given support matrix. Ties go to the
/// lexicographically smallest index set.
pub fn optimize_with_support(
    instance: &ProblemInstance,
    k: usize,
    mode: AssortmentMode,
    q: &Matrix,
) -> Result<(Assortment, f64)> {
    let n = instance.n();
    let m = instance.m();
    check_k(k, n)?;
    instance.check_support(q)?;

    let sets = match mode {
        AssortmentMode::Shared => {
            let mut best = None;
            let mut sets = vec![Vec::new(); m];
            for combo in Combinations::new(n, k) {
                sets.iter_mut().for_each(|s| s.clone_from(&combo));
                keep_better(&mut best, revenue_terms(instance, &sets, q), &combo);
            }
            let (_, set) = best.expect("at least one subset when 1 <= k <= n");
            vec![set; m]
        }
        AssortmentMode::PerSegment => (0..m)
            .map(|j| {
                let mut best = None;
                for combo in Combinations::new(n, k) {
                    let terms = combo.iter().map(|&i| instance.lambda()[j] * q.get(i, j)).collect();
                    keep_better(&mut best, terms, &combo);
                }
                best.expect("at least one subset when 1 <= k <= n").1
            })
            .collect(),
    };
    let revenue = revenue_unchecked(instance, &sets, q);
    Ok((Assortment { per_segment: sets, k }, revenue))
}

/// Top-`k` products by contribution `Σ_j λ_j q_ij`, ties to the lower index.
///
/// Expected revenue is additive over offered products, so this must agree
/// with the exhaustive search in shared mode.
pub fn revenue_ordered_oracle(
    instance: &ProblemInstance,
    k: usize,
    q: &Matrix,
) -> Result<Assortment> {
    check_k(k, instance.n())?;
    instance.check_support(q)?;
    let contribution: Vec<Vec<f64>> = (0..instance.n())
        .map(|i| {
            q.row(i)
                .iter()
                .zip(instance.lambda())
                .map(|(q, l)| l * q)
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by(|&a, &b| cmp_sums(&contribution[b], &contribution[a]).then(a.cmp(&b)));
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    Assortment::shared(set, instance.m())
}

/// Lexicographic iterator over the size-`k` subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost slot that can still move right
        if let Some(pos) = (0..k).rev().find(|&p| next[p] < self.n - k + p) {
            next[pos] += 1;
            for p in pos + 1..k {
                next[p] = next[p - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}
