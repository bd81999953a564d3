//! Input alphabets, input distributions, constellations, and fading models.
//!
//! A constellation ties an alphabet to a labeling and a per-bit input
//! distribution and carries the derived statistics (symbol pmf, average
//! energy, mean) that the capacity and asymptotics engines consume.

use crate::labelings::Labeling;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported alphabet size.
pub const MAX_POINTS: usize = 1024;

#[derive(Debug, Error, PartialEq)]
pub enum AlphabetError {
    #[error("alphabet size must be a power of two in 2..={MAX_POINTS}, got {0}")]
    BadSize(usize),
    #[error("all points must have the same dimension")]
    RaggedRows,
    #[error("point coordinates must be finite")]
    NonFinite,
    #[error("hierarchical distances must be positive")]
    NonPositiveDistance,
    #[error("hierarchical points must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),
    #[error("projection matrix must have one row per labeling bit ({expected}), got {got}")]
    ProjectionShape { expected: usize, got: usize },
    #[error("bit probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("symbol probabilities must be nonnegative and sum to 1 (sum = {0})")]
    BadPmf(f64),
    #[error("alphabet has {alphabet} points but labeling has {labeling} codewords")]
    SizeMismatch { alphabet: usize, labeling: usize },
    #[error("bit distribution has {bits} entries but labeling order is {labeling}")]
    OrderMismatch { bits: usize, labeling: usize },
    #[error("points {i} and {j} coincide and both carry positive probability")]
    DegenerateAlphabet { i: usize, j: usize },
    #[error("constellation has zero average energy")]
    ZeroEnergy,
    #[error("fading parameter must be positive, got {0}")]
    BadFadingParameter(f64),
}

/// `M x N` real matrix of constellation points. Rows are allowed to
/// coincide here; one-to-one mapping is enforced when a [`Constellation`]
/// is formed.
#[derive(Debug, Clone, PartialEq)]
pub struct InputAlphabet {
    dim: usize,
    coords: Vec<f64>, // row-major, M * dim
}

impl InputAlphabet {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, AlphabetError> {
        let m = rows.len();
        if m < 2 || m > MAX_POINTS || !m.is_power_of_two() {
            return Err(AlphabetError::BadSize(m));
        }
        let dim = rows[0].len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(AlphabetError::RaggedRows);
        }
        let coords: Vec<f64> = rows.into_iter().flatten().collect();
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(AlphabetError::NonFinite);
        }
        Ok(InputAlphabet { dim, coords })
    }

    /// Equally spaced amplitude alphabet `-(M-1), -(M-3), ..., M-1`.
    pub fn pam(size: usize) -> Result<Self, AlphabetError> {
        check_size(size)?;
        let rows = (0..size)
            .map(|i| vec![-((size as f64) - 2.0 * i as f64 - 1.0)])
            .collect();
        InputAlphabet::new(rows)
    }

    /// Unit-circle phase alphabet with points at angles `(2i+1) pi / M`.
    pub fn psk(size: usize) -> Result<Self, AlphabetError> {
        check_size(size)?;
        let rows = (0..size)
            .map(|i| {
                let a = (2.0 * i as f64 + 1.0) * std::f64::consts::PI / size as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        InputAlphabet::new(rows)
    }

    /// Rectangular quadrature alphabet: the ordered direct product of two
    /// amplitude alphabets, point `M'' l + j` being `[pam(M')_l, pam(M'')_j]`.
    pub fn qam(size_i: usize, size_q: usize) -> Result<Self, AlphabetError> {
        let a = InputAlphabet::pam(size_i)?;
        let b = InputAlphabet::pam(size_q)?;
        let mut rows = Vec::with_capacity(size_i * size_q);
        for l in 0..size_i {
            for j in 0..size_q {
                rows.push(vec![a.point(l)[0], b.point(j)[0]]);
            }
        }
        InputAlphabet::new(rows)
    }

    /// Nonequally spaced amplitude alphabet built from per-level distances:
    /// `x_i = sum_k (2 b_k(i) - 1) d_k`, rejected unless strictly increasing.
    pub fn hierarchical(distances: &[f64]) -> Result<Self, AlphabetError> {
        let m = distances.len();
        if m == 0 || m > 10 {
            return Err(AlphabetError::BadSize(1usize.checked_shl(m as u32).unwrap_or(0)));
        }
        if distances.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(AlphabetError::NonPositiveDistance);
        }
        let size = 1usize << m;
        let points: Vec<f64> = (0..size)
            .map(|i| {
                (0..m)
                    .map(|k| (2.0 * ((i >> k) & 1) as f64 - 1.0) * distances[k])
                    .sum()
            })
            .collect();
        for i in 0..size - 1 {
            if points[i + 1] <= points[i] {
                return Err(AlphabetError::NotIncreasing(i));
            }
        }
        InputAlphabet::new(points.into_iter().map(|x| vec![x]).collect())
    }

    /// Projection of the labeling's +/-1 hypercube vertices through the
    /// `m x N` matrix `V`: point `i` is `sum_k q_{i,k} v_k`. Coincident rows
    /// are not rejected here.
    pub fn project_hypercube(
        labeling: &Labeling,
        projection: &[Vec<f64>],
    ) -> Result<Self, AlphabetError> {
        let m = labeling.order();
        if projection.len() != m {
            return Err(AlphabetError::ProjectionShape {
                expected: m,
                got: projection.len(),
            });
        }
        let dim = projection[0].len();
        if dim == 0 || projection.iter().any(|r| r.len() != dim) {
            return Err(AlphabetError::RaggedRows);
        }
        let q = labeling.modified_matrix();
        let rows = (0..labeling.size())
            .map(|i| {
                (0..dim)
                    .map(|d| {
                        (0..m)
                            .map(|k| q.entry(i, k) as f64 * projection[k][d])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        InputAlphabet::new(rows)
    }

    /// The 8-point "one-three-three-one" planar alphabet, a projected cube.
    pub fn otto() -> Self {
        let nbc = Labeling::generate(crate::labelings::LabelingKind::Nbc, 3).unwrap();
        let v = vec![vec![-1.0, -1.0], vec![1.0, 0.0], vec![-1.0, 1.0]];
        InputAlphabet::project_hypercube(&nbc, &v).unwrap()
    }

    /// The 8-point "one-two-one-two-one" planar alphabet: a hexagon plus two
    /// coincident points at the origin.
    pub fn ototo() -> Self {
        let nbc = Labeling::generate(crate::labelings::LabelingKind::Nbc, 3).unwrap();
        // cos(pi/3) and sin(pi/3) written out so the two central points
        // cancel to the origin exactly.
        let s = 3.0f64.sqrt() / 2.0;
        let v = vec![vec![-1.0, 0.0], vec![0.5, s], vec![0.5, -s]];
        InputAlphabet::project_hypercube(&nbc, &v).unwrap()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i).to_vec()).collect()
    }
}

fn check_size(size: usize) -> Result<(), AlphabetError> {
    if size < 2 || size > MAX_POINTS || !size.is_power_of_two() {
        return Err(AlphabetError::BadSize(size));
    }
    Ok(())
}

/// Per-bit input distribution: entry `k` is the probability of bit value 0
/// at modulator input position `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitDistribution {
    p0: Vec<f64>,
}

impl BitDistribution {
    pub fn new(p0: Vec<f64>) -> Result<Self, AlphabetError> {
        for &p in &p0 {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(AlphabetError::BadProbability(p));
            }
        }
        Ok(BitDistribution { p0 })
    }

    pub fn uniform(order: usize) -> Self {
        BitDistribution {
            p0: vec![0.5; order],
        }
    }

    pub fn order(&self) -> usize {
        self.p0.len()
    }

    /// P(bit k = u).
    #[inline]
    pub fn prob(&self, k: usize, u: u8) -> f64 {
        if u == 0 {
            self.p0[k]
        } else {
            1.0 - self.p0[k]
        }
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn is_uniform(&self) -> bool {
        self.p0.iter().all(|&p| p == 0.5)
    }
}

/// Symbol probabilities; nonnegative, summing to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    probs: Vec<f64>,
}

impl SymbolDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, AlphabetError> {
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(AlphabetError::BadPmf(f64::NAN));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(AlphabetError::BadPmf(sum));
        }
        Ok(SymbolDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// Product-form symbol pmf induced by independent modulator input bits:
/// `P(x_i) = prod_k P(C_k = c_{i,k})`.
pub fn symbol_pmf(bits: &BitDistribution, labeling: &Labeling) -> SymbolDistribution {
    assert_eq!(bits.order(), labeling.order());
    let probs = (0..labeling.size())
        .map(|i| {
            (0..labeling.order())
                .map(|k| bits.prob(k, labeling.bit(i, k)))
                .product()
        })
        .collect();
    SymbolDistribution { probs }
}

/// Channel law for the scalar fade applied to all dimensions of a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// No fading: H = 1 deterministically.
    Awgn,
    /// Squared fade exponentially distributed with the given mean.
    Rayleigh { mean_square: f64 },
    /// Squared fade Gamma(shape, mean_square/shape) distributed.
    Nakagami { shape: f64, mean_square: f64 },
}

impl FadingModel {
    pub fn rayleigh() -> Self {
        FadingModel::Rayleigh { mean_square: 1.0 }
    }

    pub fn nakagami(shape: f64) -> Result<Self, AlphabetError> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(AlphabetError::BadFadingParameter(shape));
        }
        Ok(FadingModel::Nakagami {
            shape,
            mean_square: 1.0,
        })
    }

    /// E[H^2].
    pub fn mean_square(&self) -> f64 {
        match *self {
            FadingModel::Awgn => 1.0,
            FadingModel::Rayleigh { mean_square } | FadingModel::Nakagami { mean_square, .. } => {
                mean_square
            }
        }
    }

    pub fn is_awgn(&self) -> bool {
        matches!(self, FadingModel::Awgn)
    }

    /// Draws one fade magnitude.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingModel::Awgn => 1.0,
            FadingModel::Rayleigh { mean_square } => {
                let g = Gamma::new(1.0, mean_square).expect("valid parameters");
                g.sample(rng).sqrt()
            }
            FadingModel::Nakagami { shape, mean_square } => {
                let g = Gamma::new(shape, mean_square / shape).expect("valid parameters");
                g.sample(rng).sqrt()
            }
        }
    }
}

/// Alphabet + labeling + input distribution, with derived statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    alphabet: InputAlphabet,
    labeling: Labeling,
    bits: BitDistribution,
    pmf: SymbolDistribution,
    es: f64,
    mean: Vec<f64>,
    index_sets: Vec<[Vec<usize>; 2]>,
}

impl Constellation {
    pub fn new(
        alphabet: InputAlphabet,
        labeling: Labeling,
        bits: BitDistribution,
    ) -> Result<Self, AlphabetError> {
        if alphabet.len() != labeling.size() {
            return Err(AlphabetError::SizeMismatch {
                alphabet: alphabet.len(),
                labeling: labeling.size(),
            });
        }
        if bits.order() != labeling.order() {
            return Err(AlphabetError::OrderMismatch {
                bits: bits.order(),
                labeling: labeling.order(),
            });
        }
        let pmf = symbol_pmf(&bits, &labeling);
        // The capacity integrals assume a one-to-one mapping between
        // codewords and transmitted points; coincident points are only
        // tolerated when at most one of them can be transmitted.
        for i in 0..alphabet.len() {
            if pmf.prob(i) == 0.0 {
                continue;
            }
            for j in i + 1..alphabet.len() {
                if pmf.prob(j) > 0.0 && alphabet.point(i) == alphabet.point(j) {
                    return Err(AlphabetError::DegenerateAlphabet { i, j });
                }
            }
        }
        let es: f64 = (0..alphabet.len())
            .map(|i| pmf.prob(i) * norm_sq(alphabet.point(i)))
            .sum();
        if es <= 0.0 {
            return Err(AlphabetError::ZeroEnergy);
        }
        let mut mean = vec![0.0; alphabet.dim()];
        for i in 0..alphabet.len() {
            for (d, v) in alphabet.point(i).iter().enumerate() {
                mean[d] += pmf.prob(i) * v;
            }
        }
        let index_sets = (0..labeling.order())
            .map(|k| [labeling.index_set(k, 0), labeling.index_set(k, 1)])
            .collect();
        Ok(Constellation {
            alphabet,
            labeling,
            bits,
            pmf,
            es,
            mean,
            index_sets,
        })
    }

    pub fn uniform(alphabet: InputAlphabet, labeling: Labeling) -> Result<Self, AlphabetError> {
        let bits = BitDistribution::uniform(labeling.order());
        Constellation::new(alphabet, labeling, bits)
    }

    pub fn alphabet(&self) -> &InputAlphabet {
        &self.alphabet
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn bits(&self) -> &BitDistribution {
        &self.bits
    }

    pub fn pmf(&self) -> &SymbolDistribution {
        &self.pmf
    }

    /// Average symbol energy under the symbol pmf.
    pub fn es(&self) -> f64 {
        self.es
    }

    /// Mean transmitted point.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn order(&self) -> usize {
        self.labeling.order()
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn dim(&self) -> usize {
        self.alphabet.dim()
    }

    /// Symbol indices whose codeword carries bit value `u` at position `k`.
    pub fn index_set(&self, k: usize, u: u8) -> &[usize] {
        &self.index_sets[k][u as usize]
    }
}

pub(crate) fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// On-disk constellation description:
/// `{ "alphabet": [[..], ..], "labeling": ["010", ..], "bit_p0": [..] }`,
/// with `bit_p0` optional (uniform when absent).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstellationFile {
    pub alphabet: Vec<Vec<f64>>,
    pub labeling: Labeling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bit_p0: Option<Vec<f64>>,
}

impl ConstellationFile {
    pub fn into_constellation(self) -> Result<Constellation, AlphabetError> {
        let alphabet = InputAlphabet::new(self.alphabet)?;
        let bits = match self.bit_p0 {
            Some(p0) => BitDistribution::new(p0)?,
            None => BitDistribution::uniform(self.labeling.order()),
        };
        Constellation::new(alphabet, self.labeling, bits)
    }
}
