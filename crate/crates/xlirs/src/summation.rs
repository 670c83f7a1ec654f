//! Deterministic compensated summation.
//!
//! Large element sums are accumulated in fixed chunks of [`CHUNK_LEN`] terms.
//! Each chunk is summed with Neumaier compensation in index order, and the
//! chunk partials are combined pairwise over a fixed tree. The chunk
//! boundaries depend only on the term count, never on the thread count, so
//! serial and parallel runs produce bit-identical results.

use rayon::prelude::*;

/// Terms per compensated chunk. Fixed so parallel partitioning cannot change
/// the reduction order.
pub const CHUNK_LEN: u64 = 4096;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums `term(i)` for `i in 0..len` with chunked compensation, evaluating
/// chunks in parallel.
pub fn sum_indexed<F>(len: u64, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    let partials = chunk_partials(len, term);
    pairwise_sum(&partials)
}

/// Two-channel variant of [`sum_indexed`] for complex-valued terms.
pub fn sum_indexed_pair<F>(len: u64, term: F) -> (f64, f64)
where
    F: Fn(u64) -> (f64, f64) + Sync,
{
    let n_chunks = len.div_ceil(CHUNK_LEN) as usize;
    let partials: Vec<(f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c as u64 * CHUNK_LEN;
            let end = (start + CHUNK_LEN).min(len);
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            for i in start..end {
                let (r, j) = term(i);
                re.add(r);
                im.add(j);
            }
            (re.value(), im.value())
        })
        .collect();
    let re: Vec<f64> = partials.iter().map(|p| p.0).collect();
    let im: Vec<f64> = partials.iter().map(|p| p.1).collect();
    (pairwise_sum(&re), pairwise_sum(&im))
}

fn chunk_partials<F>(len: u64, term: F) -> Vec<f64>
where
    F: Fn(u64) -> f64 + Sync,
{
    let n_chunks = len.div_ceil(CHUNK_LEN) as usize;
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c as u64 * CHUNK_LEN;
            let end = (start + CHUNK_LEN).min(len);
            let mut acc = CompensatedSum::new();
            for i in start..end {
                acc.add(term(i));
            }
            acc.value()
        })
        .collect()
}

/// Fixed-tree pairwise reduction; the split point depends only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => {
            let mut acc = CompensatedSum::new();
            for &v in values {
                acc.add(v);
            }
            acc.value()
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
