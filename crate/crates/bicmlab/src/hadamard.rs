//! Hadamard matrices (Sylvester construction) and the Hadamard transform of
//! point matrices. Columns of the transform at power-of-two indices carry the
//! per-bit structure that the low-SNR analysis reads off.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HadamardError {
    #[error("matrix size must be a power of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("all rows must have the same length")]
    RaggedRows,
}

/// Symmetric +/-1 matrix of order `M = 2^m` with `H * H = M * I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    size: usize,
    entries: Vec<i8>, // row-major
}

impl HadamardMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.size + j]
    }
}

/// Builds the order-`M` Hadamard matrix by the doubling recursion
/// `H_{2M} = [H_M, H_M; H_M, -H_M]` with `H_1 = [1]`.
pub fn hadamard_matrix(size: usize) -> Result<HadamardMatrix, HadamardError> {
    if size == 0 || !size.is_power_of_two() {
        return Err(HadamardError::NotPowerOfTwo(size));
    }
    let mut entries = vec![1i8];
    let mut n = 1;
    while n < size {
        let mut next = vec![0i8; 4 * n * n];
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                next[i * 2 * n + j] = v;
                next[i * 2 * n + (j + n)] = v;
                next[(i + n) * 2 * n + j] = v;
                next[(i + n) * 2 * n + (j + n)] = -v;
            }
        }
        entries = next;
        n *= 2;
    }
    Ok(HadamardMatrix { size, entries })
}

fn check_shape(rows: &[Vec<f64>]) -> Result<usize, HadamardError> {
    let n = rows.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(HadamardError::NotPowerOfTwo(n));
    }
    let dim = rows[0].len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(HadamardError::RaggedRows);
    }
    Ok(dim)
}

/// In-place butterfly computing `H * X` on the row vectors.
fn fwht_rows(rows: &mut [Vec<f64>]) {
    let n = rows.len();
    let dim = rows[0].len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for j in block..block + h {
                for d in 0..dim {
                    let a = rows[j][d];
                    let b = rows[j + h][d];
                    rows[j][d] = a + b;
                    rows[j + h][d] = a - b;
                }
            }
        }
        h *= 2;
    }
}

/// Dense `H * X` used below the butterfly cutoff and as its test oracle.
fn dense_hx(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let dim = rows[0].len();
    let h = hadamard_matrix(n).expect("power of two");
    (0..n)
        .map(|i| {
            (0..dim)
                .map(|d| (0..n).map(|j| h.entry(i, j) as f64 * rows[j][d]).sum())
                .collect()
        })
        .collect()
}

const FWHT_CUTOFF: usize = 16;

fn hx(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, HadamardError> {
    check_shape(rows)?;
    if rows.len() >= FWHT_CUTOFF {
        let mut out = rows.to_vec();
        fwht_rows(&mut out);
        Ok(out)
    } else {
        Ok(dense_hx(rows))
    }
}

/// Forward transform `(1/M) H X` of a matrix given as row vectors. The first
/// output row is the mean of the input rows.
pub fn transform(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, HadamardError> {
    let n = rows.len() as f64;
    let mut out = hx(rows)?;
    for row in &mut out {
        for v in row {
            *v /= n;
        }
    }
    Ok(out)
}

/// Inverse transform `H X~`, undoing [`transform`].
pub fn inverse_transform(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, HadamardError> {
    hx(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_one_and_errors() {
        let h1 = hadamard_matrix(1).unwrap();
        assert_eq!(h1.entry(0, 0), 1);
        assert_eq!(hadamard_matrix(12), Err(HadamardError::NotPowerOfTwo(12)));
        assert_eq!(hadamard_matrix(0), Err(HadamardError::NotPowerOfTwo(0)));
    }

    #[test]
    fn order_four_rows() {
        let h = hadamard_matrix(4).unwrap();
        let expected: [[i8; 4]; 4] = [
            [1, 1, 1, 1],
            [1, -1, 1, -1],
            [1, 1, -1, -1],
            [1, -1, -1, 1],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h.entry(i, j), expected[i][j]);
            }
        }
    }

    #[test]
    fn order_eight_matches_hand_matrix() {
        let h = hadamard_matrix(8).unwrap();
        let expected: [[i8; 8]; 8] = [
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1, 1, -1, -1],
            [1, -1, -1, 1, 1, -1, -1, 1],
            [1, 1, 1, 1, -1, -1, -1, -1],
            [1, -1, 1, -1, -1, 1, -1, 1],
            [1, 1, -1, -1, -1, -1, 1, 1],
            [1, -1, -1, 1, -1, 1, 1, -1],
        ];
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h.entry(i, j), expected[i][j], "({i},{j})");
            }
        }
    }

    #[test]
    fn entries_match_bit_parity_formula() {
        for m in 0..=6 {
            let n = 1usize << m;
            let h = hadamard_matrix(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let sign = if (i & j).count_ones() % 2 == 0 { 1 } else { -1 };
                    assert_eq!(h.entry(i, j), sign);
                }
            }
        }
    }

    #[test]
    fn symmetric_and_self_inverse() {
        for n in [2usize, 8, 64] {
            let h = hadamard_matrix(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(h.entry(i, j), h.entry(j, i));
                    let dot: i32 = (0..n)
                        .map(|k| (h.entry(i, k) * h.entry(j, k)) as i32)
                        .sum();
                    assert_eq!(dot, if i == j { n as i32 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn power_of_two_columns_read_bits() {
        for n in [2usize, 4, 8, 16, 32, 64] {
            let h = hadamard_matrix(n).unwrap();
            let m = n.trailing_zeros() as usize;
            for i in 0..n {
                assert_eq!(h.entry(i, 0), 1);
                for l in 0..m {
                    let sign = if (i >> l) & 1 == 1 { -1 } else { 1 };
                    assert_eq!(h.entry(i, 1 << l), sign);
                }
            }
        }
    }

    #[test]
    fn transform_of_4pam_column() {
        let x: Vec<Vec<f64>> = [-3.0, -1.0, 1.0, 3.0].iter().map(|&v| vec![v]).collect();
        let xt = transform(&x).unwrap();
        let expected = [0.0, -1.0, -2.0, 0.0];
        for (row, &e) in xt.iter().zip(&expected) {
            assert!((row[0] - e).abs() < 1e-14);
        }
    }

    #[test]
    fn nbc_modified_matrix_columns_are_power_of_two_hadamard_columns() {
        use crate::labelings::{Labeling, LabelingKind};
        for m in 1..=6 {
            let q = Labeling::generate(LabelingKind::Nbc, m).unwrap().modified_matrix();
            let h = hadamard_matrix(1 << m).unwrap();
            for i in 0..q.size() {
                for k in 0..m {
                    assert_eq!(q.entry(i, k), h.entry(i, 1 << k), "m={m} ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn transform_of_8pam_lives_on_power_of_two_indices() {
        let x: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![-(7.0 - 2.0 * i as f64)])
            .collect();
        let xt = transform(&x).unwrap();
        let expected = [0.0, -1.0, -2.0, 0.0, -4.0, 0.0, 0.0, 0.0];
        for (row, &e) in xt.iter().zip(&expected) {
            assert!((row[0] - e).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_of_zero_matrix() {
        let x = vec![vec![0.0, 0.0]; 8];
        let xt = transform(&x).unwrap();
        assert!(xt.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let bad = vec![vec![1.0, 2.0], vec![3.0]];
        assert_eq!(transform(&bad), Err(HadamardError::RaggedRows));
        let odd = vec![vec![1.0]; 3];
        assert_eq!(transform(&odd), Err(HadamardError::NotPowerOfTwo(3)));
    }

    #[test]
    fn butterfly_matches_dense_multiply() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [16usize, 32, 64] {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
                .collect();
            let mut fast = rows.clone();
            fwht_rows(&mut fast);
            let dense = dense_hx(&rows);
            for (a, b) in fast.iter().flatten().zip(dense.iter().flatten()) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (0usize..=6, 1usize..=3).prop_flat_map(|(m, dim)| {
            prop::collection::vec(
                prop::collection::vec(-100.0f64..100.0, dim),
                1usize << m,
            )
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(rows in arb_matrix()) {
            let xt = transform(&rows).unwrap();
            let back = inverse_transform(&xt).unwrap();
            let scale: f64 = rows.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
            for (a, b) in back.iter().flatten().zip(rows.iter().flatten()) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
            // First transform row is the mean row.
            let n = rows.len() as f64;
            for d in 0..rows[0].len() {
                let mean: f64 = rows.iter().map(|r| r[d]).sum::<f64>() / n;
                prop_assert!((xt[0][d] - mean).abs() <= 1e-12 * scale.max(1.0));
            }
            // Parseval: sum ||xt_j||^2 = (1/M) sum ||x_i||^2.
            let lhs: f64 = xt.iter().flatten().map(|v| v * v).sum();
            let rhs: f64 = rows.iter().flatten().map(|v| v * v).sum::<f64>() / n;
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300));
        }
    }
}
