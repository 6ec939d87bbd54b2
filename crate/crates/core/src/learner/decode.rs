use crate::assortment::{Assortment, AssortmentMode};
use crate::error::{Error, Result};
use crate::exact::exact_sum;

/// Scores closer than this count as tied. Decimal inputs such as
/// `0.1 + 0.2` and `0.3` differ only by representation error and should
/// fall back to the lower-index rule rather than rounding noise.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-12;

/// Nearest valid indicator (squared l2) to a score vector laid out as
/// `i·m + j`.
///
/// Squared distance splits into per-slot terms, and switching slot `(i, j)`
/// on changes it by `1 − 2·s_ij`. The nearest indicator is therefore the
/// top-`k` scores of each segment, or in shared mode the top-`k` products by
/// summed score. Ties (within [`SCORE_TIE_TOLERANCE`]) go to the lower
/// product index.
pub fn decode_assortment(
    scores: &[f64],
    k: usize,
    n: usize,
    m: usize,
    mode: AssortmentMode,
) -> Result<Assortment> {
    if scores.len() != n * m {
        return Err(Error::dims("score vector length", n * m, scores.len()));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k={k} must satisfy 1 <= k <= {n}")));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::invalid("scores contain NaN"));
    }
    let sets = match mode {
        AssortmentMode::Shared => {
            let totals: Vec<f64> = (0..n)
                .map(|i| exact_sum(scores[i * m..(i + 1) * m].iter().copied()))
                .collect();
            vec![sorted(top_k(&totals, k)); m]
        }
        AssortmentMode::PerSegment => (0..m)
            .map(|j| {
                let column: Vec<f64> = (0..n).map(|i| scores[i * m + j]).collect();
                sorted(top_k(&column, k))
            })
            .collect(),
    };
    Assortment::new(sets)
}

/// Greedy top-`k`: each round takes the lowest remaining index whose score
/// is not beaten by more than the tie tolerance.
fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut taken = vec![false; values.len()];
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut pick: Option<usize> = None;
        for i in (0..values.len()).filter(|&i| !taken[i]) {
            if pick.is_none_or(|p| values[i] > values[p] + SCORE_TIE_TOLERANCE) {
                pick = Some(i);
            }
        }
        let Some(p) = pick else { break };
        taken[p] = true;
        out.push(p);
    }
    out
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
