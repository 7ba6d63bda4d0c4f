//! Deterministic pairwise summation.
//!
//! Weyl sums are specified to be reproducible: samples are summed in
//! fixed index order with a pairwise (tree) reduction, chunked so that
//! parallel execution over chunks is bit-identical to the serial path
//! for a fixed chunk size, regardless of worker count.

use num_complex::Complex64;
use rayon::prelude::*;

/// Pairwise (tree) sum with a fixed split at the midpoint and a
/// sequential base case of 8 terms. Deterministic for a given slice.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 8 {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Chunked pairwise sum: each fixed-size chunk is pairwise-summed, then
/// the chunk totals are pairwise-summed in order. `parallel` only moves
/// the per-chunk work onto the rayon pool; the reduction tree, and hence
/// the result bits, are identical either way.
pub fn chunked_pairwise_sum(values: &[Complex64], chunk_size: usize, parallel: bool) -> Complex64 {
    let chunk_size = chunk_size.max(1);
    if values.len() <= chunk_size {
        return pairwise_sum(values);
    }
    let partials: Vec<Complex64> = if parallel {
        values.par_chunks(chunk_size).map(pairwise_sum).collect()
    } else {
        values.chunks(chunk_size).map(pairwise_sum).collect()
    };
    pairwise_sum(&partials)
}
