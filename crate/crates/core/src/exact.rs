//! Error-free summation of `f64` terms.
//!
//! Support probabilities span dozens of orders of magnitude (σ(−50) next to
//! values within an ulp of 1), so plain left-to-right sums absorb small terms
//! and can turn strict revenue orderings into false ties. These helpers keep
//! the full sum as a nonoverlapping expansion (Shewchuk's grow-expansion,
//! the same scheme as Python's `math.fsum`).

use std::cmp::Ordering;

/// Nonoverlapping partials, increasing magnitude, whose exact sum equals the
/// exact sum of `terms`. Terms must be finite.
fn partials(terms: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut parts: Vec<f64> = Vec::new();
    for mut x in terms {
        let mut kept = 0;
        for idx in 0..parts.len() {
            let mut y = parts[idx];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                parts[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        parts.truncate(kept);
        parts.push(x);
    }
    parts
}

/// Correctly rounded sum of `terms`.
pub fn exact_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let parts = partials(terms);
    let mut iter = parts.iter().rev();
    let Some(&first) = iter.next() else {
        return 0.0;
    };
    let mut hi = first;
    let mut lo = 0.0;
    let mut rest = iter.copied().peekable();
    while let Some(y) = rest.next() {
        let x = hi;
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            // round-half-even correction on the remaining tail
            if let Some(&next) = rest.peek() {
                if (lo < 0.0 && next < 0.0) || (lo > 0.0 && next > 0.0) {
                    let y2 = lo * 2.0;
                    let x2 = hi + y2;
                    if y2 == x2 - hi {
                        hi = x2;
                    }
                }
            }
            break;
        }
    }
    let _ = lo;
    hi
}

/// Exact ordering of `Σ a` against `Σ b`.
pub fn cmp_sums(a: &[f64], b: &[f64]) -> Ordering {
    let parts = partials(a.iter().copied().chain(b.iter().map(|v| -v)));
    parts
        .iter()
        .rev()
        .find(|p| **p != 0.0)
        .map_or(Ordering::Equal, |top| top.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_terms_survive() {
        let big = 0.999_999_991_904_442_3;
        assert_eq!(big + 2.5e-21, big + 1.8e-20);
        assert_eq!(cmp_sums(&[big, 2.5e-21], &[big, 1.8e-20]), Ordering::Less);
        assert_eq!(cmp_sums(&[1.0, 2.0], &[2.0, 1.0]), Ordering::Equal);
        assert_eq!(cmp_sums(&[], &[]), Ordering::Equal);
    }

    #[test]
    fn correctly_rounded() {
        assert_eq!(exact_sum([0.1; 10]), 1.0);
        assert_eq!(exact_sum([1e100, 1.0, -1e100]), 1.0);
        assert_eq!(exact_sum([]), 0.0);
        assert_eq!(exact_sum([0.1, 0.2]), 0.1 + 0.2);
        // 1 + 2^-53 + 2^-105 rounds up, which naive summation misses
        let tail = 2f64.powi(-105);
        assert_eq!(exact_sum([1.0, 2f64.powi(-53), tail]), 1.0 + f64::EPSILON);
    }
}
