//! Deterministic pairwise (tree) summation.
//!
//! The split points depend only on the length, never on the thread count,
//! so the result is bitwise reproducible with or without parallelism.

use crate::par;

const LEAF: usize = 512;
const PAR_CUTOFF: usize = 1 << 14;

/// Sums `term(i)` for `i` in `0..len` along a fixed binary tree.
pub fn pairwise_sum_by<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    sum_range(0, len, &term)
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

fn sum_range<F>(lo: usize, hi: usize, term: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let len = hi - lo;
    if len <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += term(i);
        }
        return acc;
    }
    let mid = lo + len / 2;
    let (a, b) = if len >= PAR_CUTOFF {
        par::join(|| sum_range(lo, mid, term), || sum_range(mid, hi, term))
    } else {
        (sum_range(lo, mid, term), sum_range(mid, hi, term))
    };
    a + b
}
