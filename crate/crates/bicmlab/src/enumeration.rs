//! Exhaustive classification of all 8! labelings of an 8-point alphabet by
//! their first-order BICM coefficient.

use crate::alphabets::{norm_sq, InputAlphabet};
use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

/// Absolute merge tolerance on the normalized coefficient; the distinct
/// class values for 8-point alphabets are separated by far more.
pub const CLASS_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("exhaustive labeling classification supports exactly 8 points, got {0}")]
    UnsupportedSize(usize),
}

/// One equivalence class of labelings sharing a first-order coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaClass {
    /// Class coefficient, normalized by log2(e).
    pub alpha_normalized: f64,
    /// Number of the 40320 labelings in the class.
    pub count: u64,
}

/// Histogram of first-order coefficients over all labelings.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCensus {
    classes: Vec<AlphaClass>,
}

impl AlphaCensus {
    /// Classes in ascending coefficient order.
    pub fn classes(&self) -> &[AlphaClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total_labelings(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// Number of distinct class multiplicities (distinct pmf masses).
    pub fn distinct_multiplicities(&self) -> usize {
        let mut counts: Vec<u64> = self.classes.iter().map(|c| c.count).collect();
        counts.sort_unstable();
        counts.dedup();
        counts.len()
    }

    /// True iff some class matches `alpha_normalized` within the merge
    /// tolerance.
    pub fn contains(&self, alpha_normalized: f64) -> bool {
        self.classes
            .iter()
            .any(|c| (c.alpha_normalized - alpha_normalized).abs() <= CLASS_MERGE_TOL)
    }

    /// Smallest gap between adjacent class coefficients.
    pub fn min_class_gap(&self) -> f64 {
        self.classes
            .windows(2)
            .map(|w| w[1].alpha_normalized - w[0].alpha_normalized)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sweeps all 8! = 40320 bijections between codewords and the points of an
/// 8-point alphabet, computing each labeling's first-order coefficient from
/// the Hadamard transform entries at indices 1, 2, 4, and buckets the
/// values. The sweep runs in lexicographic permutation order, parallelized
/// by first-symbol prefix with a deterministic merge.
pub fn classify_labelings(alphabet: &InputAlphabet) -> Result<AlphaCensus, EnumerationError> {
    let big_m = alphabet.len();
    if big_m != 8 {
        return Err(EnumerationError::UnsupportedSize(big_m));
    }
    let dim = alphabet.dim();
    let es = (0..big_m).map(|i| norm_sq(alphabet.point(i))).sum::<f64>() / big_m as f64;
    // Sign of Hadamard column 2^k at row j is (-1)^(bit k of j).
    let signs: Vec<[f64; 3]> = (0..big_m)
        .map(|j| {
            [
                if j & 1 == 0 { 1.0 } else { -1.0 },
                if j & 2 == 0 { 1.0 } else { -1.0 },
                if j & 4 == 0 { 1.0 } else { -1.0 },
            ]
        })
        .collect();
    let mut values: Vec<Vec<f64>> = (0..big_m)
        .into_par_iter()
        .map(|first| {
            let rest: Vec<usize> = (0..big_m).filter(|&i| i != first).collect();
            let mut out = Vec::with_capacity(5040);
            for tail in rest.iter().permutations(big_m - 1) {
                let mut acc = [[0.0f64; 2]; 3];
                for j in 0..big_m {
                    let point = if j == 0 {
                        alphabet.point(first)
                    } else {
                        alphabet.point(*tail[j - 1])
                    };
                    for k in 0..3 {
                        let s = signs[j][k];
                        for d in 0..dim {
                            acc[k][d] += s * point[d];
                        }
                    }
                }
                let total: f64 = acc
                    .iter()
                    .map(|a| (0..dim).map(|d| (a[d] / 8.0).powi(2)).sum::<f64>())
                    .sum();
                out.push(total / es);
            }
            out
        })
        .collect();
    let mut all: Vec<f64> = Vec::with_capacity(40320);
    for chunk in values.drain(..) {
        all.extend(chunk);
    }
    all.sort_by(|a, b| a.partial_cmp(b).expect("finite coefficients"));
    let mut classes: Vec<AlphaClass> = Vec::new();
    for v in all {
        match classes.last_mut() {
            Some(last) if v - last.alpha_normalized <= CLASS_MERGE_TOL => last.count += 1,
            _ => classes.push(AlphaClass {
                alpha_normalized: v,
                count: 1,
            }),
        }
    }
    Ok(AlphaCensus { classes })
}
