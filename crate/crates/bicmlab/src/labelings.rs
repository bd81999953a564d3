//! Binary labelings: construction, recursive transforms, and equivalence.
//!
//! A labeling of order `m` assigns one of the `M = 2^m` distinct length-`m`
//! binary codewords to each row index. The four named labelings (BRGC, NBC,
//! BSGC, FBC) are built from the recursive expand/repeat/reflect operations.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Largest supported order; enumeration and capacity flows never need more.
pub const MAX_ORDER: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelingError {
    #[error("{kind} requires order m >= {min}, got m = {m}")]
    OrderTooSmall {
        kind: LabelingKind,
        m: usize,
        min: usize,
    },
    #[error("order m must be in 1..={MAX_ORDER}, got {0}")]
    OrderOutOfRange(usize),
    #[error("labeling must have 2^m rows of length m, got {rows} rows of length {cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("labeling entries must be 0 or 1")]
    NonBinaryEntry,
    #[error("labeling rows must be distinct (row {i} equals row {j})")]
    DuplicateRow { i: usize, j: usize },
    #[error("row {row:?} is not a binary word of length {m}")]
    BadBitString { row: String, m: usize },
}

/// The four named labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelingKind {
    Brgc,
    Nbc,
    Bsgc,
    Fbc,
}

impl fmt::Display for LabelingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LabelingKind::Brgc => "BRGC",
            LabelingKind::Nbc => "NBC",
            LabelingKind::Bsgc => "BSGC",
            LabelingKind::Fbc => "FBC",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for LabelingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "brgc" => Ok(LabelingKind::Brgc),
            "nbc" => Ok(LabelingKind::Nbc),
            "bsgc" => Ok(LabelingKind::Bsgc),
            "fbc" => Ok(LabelingKind::Fbc),
            other => Err(format!("unknown labeling {other:?} (expected brgc|nbc|bsgc|fbc)")),
        }
    }
}

/// An `M x m` bit matrix with `M = 2^m` distinct rows; row `i` is the
/// codeword of symbol `i`, most significant bit in column 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    m: usize,
    bits: Vec<u8>, // row-major, M * m entries in {0, 1}
}

impl Labeling {
    /// Builds a labeling from explicit rows, validating shape, binary
    /// entries, and row distinctness.
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self, LabelingError> {
        let big_m = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if m == 0 || m > MAX_ORDER {
            return Err(LabelingError::OrderOutOfRange(m));
        }
        if big_m != 1 << m || rows.iter().any(|r| r.len() != m) {
            return Err(LabelingError::BadShape {
                rows: big_m,
                cols: m,
            });
        }
        let mut bits = Vec::with_capacity(big_m * m);
        for row in &rows {
            for &b in row {
                if b > 1 {
                    return Err(LabelingError::NonBinaryEntry);
                }
                bits.push(b);
            }
        }
        let lab = Labeling { m, bits };
        let mut seen = vec![usize::MAX; big_m];
        for i in 0..big_m {
            let v = lab.codeword_value(i);
            if seen[v] != usize::MAX {
                return Err(LabelingError::DuplicateRow { i: seen[v], j: i });
            }
            seen[v] = i;
        }
        Ok(lab)
    }

    /// The trivial order-1 labeling `[0; 1]`.
    pub fn trivial() -> Self {
        Labeling {
            m: 1,
            bits: vec![0, 1],
        }
    }

    /// Generates one of the four named labelings of order `m`.
    pub fn generate(kind: LabelingKind, m: usize) -> Result<Self, LabelingError> {
        if m == 0 || m > MAX_ORDER {
            return Err(LabelingError::OrderOutOfRange(m));
        }
        let min = match kind {
            LabelingKind::Brgc | LabelingKind::Nbc => 1,
            LabelingKind::Fbc => 2,
            LabelingKind::Bsgc => 3,
        };
        if m < min {
            return Err(LabelingError::OrderTooSmall { kind, m, min });
        }
        let lab = match kind {
            LabelingKind::Brgc => {
                let mut l = Labeling::trivial();
                for _ in 1..m {
                    l = l.expand();
                }
                l
            }
            LabelingKind::Nbc => {
                let big_m = 1usize << m;
                let mut bits = Vec::with_capacity(big_m * m);
                for i in 0..big_m {
                    for k in 0..m {
                        bits.push(((i >> (m - 1 - k)) & 1) as u8);
                    }
                }
                Labeling { m, bits }
            }
            LabelingKind::Bsgc => {
                // Replace the first BRGC column by the xor of its first and
                // last columns.
                let g = Labeling::generate(LabelingKind::Brgc, m)?;
                let big_m = 1usize << m;
                let mut bits = g.bits.clone();
                for i in 0..big_m {
                    bits[i * m] = g.bit(i, 0) ^ g.bit(i, m - 1);
                }
                Labeling { m, bits }
            }
            LabelingKind::Fbc => Labeling::generate(LabelingKind::Nbc, m - 1)?.reflect(),
        };
        Ok(lab)
    }

    /// Bit count per codeword (`m`).
    pub fn order(&self) -> usize {
        self.m
    }

    /// Number of codewords (`M = 2^m`).
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Bit `k` of codeword `i` (column 0 is the most significant position).
    #[inline]
    pub fn bit(&self, i: usize, k: usize) -> u8 {
        self.bits[i * self.m + k]
    }

    /// Integer value of codeword `i`, column 0 as MSB. For the NBC this is
    /// `i` itself.
    pub fn codeword_value(&self, i: usize) -> usize {
        (0..self.m).fold(0, |acc, k| (acc << 1) | self.bit(i, k) as usize)
    }

    /// Indices of the symbols whose codeword has bit value `u` at position `k`.
    pub fn index_set(&self, k: usize, u: u8) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.bit(i, k) == u).collect()
    }

    /// Order-(m+1) labeling: each codeword duplicated, with the column
    /// 0,1,1,0,0,1,1,0,... appended on the right.
    pub fn expand(&self) -> Labeling {
        let m = self.m + 1;
        let mut bits = Vec::with_capacity((1 << m) * m);
        for i in 0..self.size() {
            // Appended column reads 0,1,1,0,0,1,1,0,...
            for copy in 0..2u8 {
                bits.extend((0..self.m).map(|k| self.bit(i, k)));
                bits.push(copy ^ ((i & 1) as u8));
            }
        }
        Labeling { m, bits }
    }

    /// Order-(m+1) labeling: the matrix stacked on itself, with the column
    /// 0^M 1^M prepended on the left.
    pub fn repeat(&self) -> Labeling {
        let m = self.m + 1;
        let mut bits = Vec::with_capacity((1 << m) * m);
        for half in [0u8, 1] {
            for i in 0..self.size() {
                bits.push(half);
                bits.extend((0..self.m).map(|k| self.bit(i, k)));
            }
        }
        Labeling { m, bits }
    }

    /// Order-(m+1) labeling: the matrix stacked on its row-reversed self,
    /// with the column 0^M 1^M prepended on the left.
    pub fn reflect(&self) -> Labeling {
        let m = self.m + 1;
        let big_m = self.size();
        let mut bits = Vec::with_capacity((1 << m) * m);
        for half in [0u8, 1] {
            for r in 0..big_m {
                let i = if half == 0 { r } else { big_m - 1 - r };
                bits.push(half);
                bits.extend((0..self.m).map(|k| self.bit(i, k)));
            }
        }
        Labeling { m, bits }
    }

    /// Ordered direct product: row `q*i + j` of the result is row `i` of
    /// `self` followed by row `j` of `other`, with `q` the size of `other`.
    pub fn ordered_product(&self, other: &Labeling) -> Result<Labeling, LabelingError> {
        let m = self.m + other.m;
        if m > MAX_ORDER {
            return Err(LabelingError::OrderOutOfRange(m));
        }
        let mut bits = Vec::with_capacity((1 << m) * m);
        for i in 0..self.size() {
            for j in 0..other.size() {
                bits.extend((0..self.m).map(|k| self.bit(i, k)));
                bits.extend((0..other.m).map(|k| other.bit(j, k)));
            }
        }
        Ok(Labeling { m, bits })
    }

    /// The +/-1 recoding with reversed column order: entry `(i, k)` is -1
    /// iff bit `m-1-k` of codeword `i` is 1.
    pub fn modified_matrix(&self) -> ModifiedLabelingMatrix {
        let big_m = self.size();
        let mut signs = Vec::with_capacity(big_m * self.m);
        for i in 0..big_m {
            for k in 0..self.m {
                signs.push(if self.bit(i, self.m - 1 - k) == 1 { -1 } else { 1 });
            }
        }
        ModifiedLabelingMatrix { m: self.m, signs }
    }

    /// Applies a column permutation followed by per-column bit inversions.
    /// Column `k` of the result is column `perm[k]` of `self`, xored with
    /// `invert[k]`.
    pub fn relabel_columns(&self, perm: &[usize], invert: &[u8]) -> Labeling {
        assert_eq!(perm.len(), self.m);
        assert_eq!(invert.len(), self.m);
        let mut bits = Vec::with_capacity(self.bits.len());
        for i in 0..self.size() {
            for k in 0..self.m {
                bits.push(self.bit(i, perm[k]) ^ invert[k]);
            }
        }
        Labeling { m: self.m, bits }
    }

    /// Canonical form under per-column inversion and column permutation:
    /// each column is inverted so its first entry is 0, then columns are
    /// sorted by the integer value of their bit pattern.
    fn canonical_columns(&self) -> Vec<Vec<u8>> {
        let big_m = self.size();
        let mut cols: Vec<Vec<u8>> = (0..self.m)
            .map(|k| {
                let flip = self.bit(0, k);
                (0..big_m).map(|i| self.bit(i, k) ^ flip).collect()
            })
            .collect();
        cols.sort();
        cols
    }

    /// True iff the labeling can be obtained from the NBC by per-column bit
    /// inversions and/or a column permutation.
    pub fn nbc_equivalent(&self) -> bool {
        let nbc = Labeling::generate(LabelingKind::Nbc, self.m).expect("valid order");
        self.canonical_columns() == nbc.canonical_columns()
    }

    /// Rows as bit strings, e.g. `["00", "01", "11", "10"]`.
    pub fn to_bit_strings(&self) -> Vec<String> {
        (0..self.size())
            .map(|i| {
                (0..self.m)
                    .map(|k| if self.bit(i, k) == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Parses the bit-string form produced by [`Labeling::to_bit_strings`].
    pub fn from_bit_strings(rows: &[String]) -> Result<Self, LabelingError> {
        let m = rows.first().map_or(0, |r| r.len());
        let parsed: Result<Vec<Vec<u8>>, LabelingError> = rows
            .iter()
            .map(|row| {
                row.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(LabelingError::BadBitString {
                            row: row.clone(),
                            m,
                        }),
                    })
                    .collect()
            })
            .collect();
        Labeling::new(parsed?)
    }
}

impl Serialize for Labeling {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_bit_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Labeling {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        Labeling::from_bit_strings(&rows).map_err(D::Error::custom)
    }
}

/// Elements of Q(L): the labeling with column order reversed and bits mapped
/// 0 -> +1, 1 -> -1. Columns of any full labeling's Q are orthogonal and sum
/// to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedLabelingMatrix {
    m: usize,
    signs: Vec<i8>, // row-major, M * m entries in {-1, +1}
}

impl ModifiedLabelingMatrix {
    pub fn order(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        1 << self.m
    }

    #[inline]
    pub fn entry(&self, i: usize, k: usize) -> i8 {
        self.signs[i * self.m + k]
    }

    /// Column `k` as f64 signs.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.size()).map(|i| self.entry(i, k) as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rows(l: &Labeling) -> Vec<Vec<u8>> {
        (0..l.size())
            .map(|i| (0..l.order()).map(|k| l.bit(i, k)).collect())
            .collect()
    }

    fn from_strs(s: &[&str]) -> Labeling {
        Labeling::from_bit_strings(&s.iter().map(|r| r.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn nbc_order_3_rows() {
        let n3 = Labeling::generate(LabelingKind::Nbc, 3).unwrap();
        let expected = from_strs(&["000", "001", "010", "011", "100", "101", "110", "111"]);
        assert_eq!(n3, expected);
    }

    #[test]
    fn bsgc_order_3_rows() {
        let s3 = Labeling::generate(LabelingKind::Bsgc, 3).unwrap();
        let expected = from_strs(&["000", "101", "111", "010", "110", "011", "001", "100"]);
        assert_eq!(s3, expected);
    }

    #[test]
    fn brgc_order_1_is_trivial() {
        let g1 = Labeling::generate(LabelingKind::Brgc, 1).unwrap();
        assert_eq!(rows(&g1), vec![vec![0], vec![1]]);
    }

    #[test]
    fn brgc_order_3_rows() {
        let g3 = Labeling::generate(LabelingKind::Brgc, 3).unwrap();
        let expected = from_strs(&["000", "001", "011", "010", "110", "111", "101", "100"]);
        assert_eq!(g3, expected);
    }

    #[test]
    fn fbc_order_3_rows() {
        let f3 = Labeling::generate(LabelingKind::Fbc, 3).unwrap();
        let expected = from_strs(&["000", "001", "010", "011", "111", "110", "101", "100"]);
        assert_eq!(f3, expected);
    }

    #[test]
    fn expand_trivial_gives_brgc_2() {
        let g2 = Labeling::trivial().expand();
        assert_eq!(rows(&g2), vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn repeat_trivial_gives_nbc_2() {
        let n2 = Labeling::trivial().repeat();
        assert_eq!(n2, Labeling::generate(LabelingKind::Nbc, 2).unwrap());
    }

    #[test]
    fn reflect_nbc2_gives_fbc3() {
        let f3 = Labeling::generate(LabelingKind::Nbc, 2).unwrap().reflect();
        assert_eq!(f3, Labeling::generate(LabelingKind::Fbc, 3).unwrap());
    }

    #[test]
    fn order_too_small_rejected() {
        assert_eq!(
            Labeling::generate(LabelingKind::Bsgc, 2),
            Err(LabelingError::OrderTooSmall {
                kind: LabelingKind::Bsgc,
                m: 2,
                min: 3
            })
        );
        assert_eq!(
            Labeling::generate(LabelingKind::Fbc, 1),
            Err(LabelingError::OrderTooSmall {
                kind: LabelingKind::Fbc,
                m: 1,
                min: 2
            })
        );
        assert!(Labeling::generate(LabelingKind::Brgc, 0).is_err());
    }

    #[test]
    fn duplicate_rows_rejected() {
        let err = Labeling::new(vec![vec![0, 0], vec![0, 1], vec![0, 0], vec![1, 1]]);
        assert_eq!(err, Err(LabelingError::DuplicateRow { i: 0, j: 2 }));
    }

    #[test]
    fn modified_matrix_of_nbc3_matches_hand_values() {
        let q = Labeling::generate(LabelingKind::Nbc, 3).unwrap().modified_matrix();
        let expected: [[i8; 3]; 8] = [
            [1, 1, 1],
            [-1, 1, 1],
            [1, -1, 1],
            [-1, -1, 1],
            [1, 1, -1],
            [-1, 1, -1],
            [1, -1, -1],
            [-1, -1, -1],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                assert_eq!(q.entry(i, k), v, "entry ({i},{k})");
            }
        }
    }

    #[test]
    fn modified_matrix_of_trivial() {
        let q = Labeling::trivial().modified_matrix();
        assert_eq!(q.entry(0, 0), 1);
        assert_eq!(q.entry(1, 0), -1);
    }

    #[test]
    fn ordered_product_builds_nbc() {
        let n1 = Labeling::generate(LabelingKind::Nbc, 1).unwrap();
        let n2 = Labeling::generate(LabelingKind::Nbc, 2).unwrap();
        assert_eq!(n1.ordered_product(&n1).unwrap(), n2);
        assert_eq!(
            n1.ordered_product(&n2).unwrap(),
            Labeling::generate(LabelingKind::Nbc, 3).unwrap()
        );
    }

    #[test]
    fn ordered_product_of_brgc1_by_hand() {
        let g1 = Labeling::generate(LabelingKind::Brgc, 1).unwrap();
        let p = g1.ordered_product(&g1).unwrap();
        assert_eq!(rows(&p), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn nbc_equivalence_examples() {
        let n3 = Labeling::generate(LabelingKind::Nbc, 3).unwrap();
        assert!(n3.nbc_equivalent());
        assert!(!Labeling::generate(LabelingKind::Brgc, 3).unwrap().nbc_equivalent());
        // Columns reversed, first column inverted.
        let twisted = n3.relabel_columns(&[2, 1, 0], &[1, 0, 0]);
        assert!(twisted.nbc_equivalent());
    }

    #[test]
    fn brgc_expansions_equal_reflections() {
        for m in 2..=6 {
            let by_expand = Labeling::generate(LabelingKind::Brgc, m).unwrap();
            let mut by_reflect = Labeling::trivial();
            for _ in 1..m {
                by_reflect = by_reflect.reflect();
            }
            assert_eq!(by_expand, by_reflect, "order {m}");
        }
    }

    #[test]
    fn generated_labelings_have_balanced_columns() {
        for kind in [
            LabelingKind::Brgc,
            LabelingKind::Nbc,
            LabelingKind::Bsgc,
            LabelingKind::Fbc,
        ] {
            for m in 3..=6 {
                let l = Labeling::generate(kind, m).unwrap();
                for k in 0..m {
                    assert_eq!(l.index_set(k, 0).len(), l.size() / 2, "{kind} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn modified_matrix_columns_sum_to_zero_and_are_orthogonal() {
        for m in 1..=6 {
            let q = Labeling::generate(LabelingKind::Brgc, m).unwrap().modified_matrix();
            for k in 0..m {
                let col: i32 = (0..q.size()).map(|i| q.entry(i, k) as i32).sum();
                assert_eq!(col, 0);
                for l in k + 1..m {
                    let dot: i32 = (0..q.size())
                        .map(|i| (q.entry(i, k) * q.entry(i, l)) as i32)
                        .sum();
                    assert_eq!(dot, 0);
                }
            }
        }
    }

    #[test]
    fn bit_string_round_trip() {
        let s3 = Labeling::generate(LabelingKind::Bsgc, 3).unwrap();
        let strings = s3.to_bit_strings();
        assert_eq!(strings[1], "101");
        assert_eq!(Labeling::from_bit_strings(&strings).unwrap(), s3);
    }

    #[test]
    fn json_round_trip() {
        let g3 = Labeling::generate(LabelingKind::Brgc, 3).unwrap();
        let json = serde_json::to_string(&g3).unwrap();
        assert!(json.contains("\"011\""));
        let back: Labeling = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g3);
    }

    fn arb_labeling(max_m: usize) -> impl Strategy<Value = Labeling> {
        (1..=max_m).prop_flat_map(|m| {
            let big_m = 1usize << m;
            prop::collection::vec(any::<u64>(), big_m).prop_map(move |keys| {
                let mut values: Vec<usize> = (0..big_m).collect();
                values.sort_by_key(|&v| keys[v]);
                let rows = values
                    .iter()
                    .map(|&v| (0..m).map(|k| ((v >> (m - 1 - k)) & 1) as u8).collect())
                    .collect();
                Labeling::new(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn ordered_product_is_associative(a in arb_labeling(2), b in arb_labeling(2), c in arb_labeling(2)) {
            let left = a.ordered_product(&b).unwrap().ordered_product(&c).unwrap();
            let right = a.ordered_product(&b.ordered_product(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn nbc_equivalence_invariant_under_column_operations(
            l in arb_labeling(4),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = l.order();
            let mut perm: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let invert: Vec<u8> = (0..m).map(|_| rng.gen_range(0..=1)).collect();
            let twisted = l.relabel_columns(&perm, &invert);
            prop_assert_eq!(l.nbc_equivalent(), twisted.nbc_equivalent());
        }
    }
}
