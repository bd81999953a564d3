//! Low-SNR machinery: first-order capacity coefficients, closed forms for
//! the classical alphabets, first-order-optimality verdicts via the Hadamard
//! transform, and the minimum-Eb/N0 / SNR-gap functions built on inverted
//! capacity curves.

use crate::alphabets::{norm_sq, Constellation, FadingModel, InputAlphabet};
use crate::capacity::{
    bicm_capacity, cm_capacity, CapacityError, CapacityKind, CapacityPoint, QuadratureSpec,
};
use crate::hadamard;
use crate::labelings::{Labeling, LabelingKind};
use crate::LOG2_E;
use rayon::prelude::*;
use thiserror::Error;

/// Relative least-squares residual below which an alphabet counts as an
/// exact hypercube projection. Analytic constructions land near 1e-15;
/// non-projections sit at 1e-3 or more.
pub const FOO_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("no closed form for {alphabet:?} with {labeling} at M = {size}")]
    UnsupportedCombination {
        alphabet: AlphabetKind,
        labeling: LabelingKind,
        size: usize,
    },
    #[error("alphabet size must be a power of two >= 2, got {0}")]
    BadSize(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("snr grid must be positive, strictly increasing, and nonempty")]
    BadGrid,
    #[error("sampled capacity is not strictly increasing at grid index {0}; suspect quadrature failure")]
    NonMonotone(usize),
    #[error("rate {rc} outside the invertible range (0, {max})")]
    RateOutOfRange { rc: f64, max: f64 },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

/// First-order (low-SNR) capacity coefficient in bits per unit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaCoefficient {
    value: f64,
}

impl AlphaCoefficient {
    pub fn from_value(value: f64) -> Self {
        AlphaCoefficient { value }
    }

    pub fn from_normalized(normalized: f64) -> Self {
        AlphaCoefficient {
            value: normalized * LOG2_E,
        }
    }

    /// Bits per unit SNR.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Value divided by log2(e); 1 marks the Shannon-limit slope.
    pub fn normalized(&self) -> f64 {
        self.value / LOG2_E
    }
}

/// First-order coefficient of the symbol-wise capacity:
/// `log2(e) (1 - ||E[X]||^2 / Es)`. Labeling-independent.
pub fn alpha_cm(omega: &Constellation) -> AlphaCoefficient {
    AlphaCoefficient {
        value: LOG2_E * (1.0 - norm_sq(omega.mean()) / omega.es()),
    }
}

/// First-order coefficient of the parallel-bit capacity for an arbitrary
/// input distribution; uses the fast uniform reduction when it applies.
pub fn alpha_bicm(omega: &Constellation) -> AlphaCoefficient {
    let m = omega.order();
    let dim = omega.dim();
    let big_m = omega.size();
    let value = if omega.bits().is_uniform() {
        // Uniform inputs: alpha = log2(e)/Es * sum_k ||mean of sign-weighted points||^2.
        let mut total = 0.0;
        for k in 0..m {
            let mut acc = vec![0.0; dim];
            for i in 0..big_m {
                let s = 1.0 - 2.0 * omega.labeling().bit(i, k) as f64;
                for (d, v) in omega.alphabet().point(i).iter().enumerate() {
                    acc[d] += s * v;
                }
            }
            for a in &mut acc {
                *a /= big_m as f64;
            }
            total += norm_sq(&acc);
        }
        LOG2_E / omega.es() * total
    } else {
        // General distribution: per bit, the half-sum-of-squares combination
        // of the sign-weighted and plain probability-weighted point sums,
        // each scaled by 1/sqrt(P_{C_k}(bit)). Symbols whose bit value has
        // probability zero carry no mass and drop out (continuous limit of
        // a deterministic bit).
        let mean_sq = norm_sq(omega.mean());
        let mut total = 0.0;
        for k in 0..m {
            let mut diff = vec![0.0; dim];
            let mut sum = vec![0.0; dim];
            for i in 0..big_m {
                let u = omega.labeling().bit(i, k);
                let pck = omega.bits().prob(k, u);
                if pck == 0.0 {
                    continue;
                }
                let w = omega.pmf().prob(i) / pck.sqrt();
                let s = 1.0 - 2.0 * u as f64;
                for (d, v) in omega.alphabet().point(i).iter().enumerate() {
                    diff[d] += s * w * v;
                    sum[d] += w * v;
                }
            }
            total += 0.5 * norm_sq(&diff) + 0.5 * norm_sq(&sum) - mean_sq;
        }
        LOG2_E / omega.es() * total
    };
    AlphaCoefficient { value }
}

/// First-order BICM coefficient of a uniform-input constellation read from
/// the Hadamard transform: rows are reordered by codeword value and the
/// transform entries at power-of-two indices are summed.
pub fn alpha_bicm_ht(alphabet: &InputAlphabet, labeling: &Labeling) -> AlphaCoefficient {
    assert_eq!(alphabet.len(), labeling.size());
    let big_m = alphabet.len();
    let mut ordered = vec![Vec::new(); big_m];
    for i in 0..big_m {
        ordered[labeling.codeword_value(i)] = alphabet.point(i).to_vec();
    }
    let xt = hadamard::transform(&ordered).expect("power-of-two row count");
    let es = (0..big_m).map(|i| norm_sq(alphabet.point(i))).sum::<f64>() / big_m as f64;
    let total: f64 = (0..labeling.order()).map(|k| norm_sq(&xt[1 << k])).sum();
    AlphaCoefficient {
        value: LOG2_E / es * total,
    }
}

/// Alphabet families with closed-form first-order coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetKind {
    Pam,
    Psk,
}

/// Closed-form first-order BICM coefficient for uniform PAM/PSK with the
/// four named labelings.
pub fn alpha_closed_form(
    alphabet: AlphabetKind,
    labeling: LabelingKind,
    size: usize,
) -> Result<AlphaCoefficient, AsymptoticsError> {
    if size < 2 || !size.is_power_of_two() {
        return Err(AsymptoticsError::BadSize(size));
    }
    let m = size.trailing_zeros() as usize;
    let unsupported = AsymptoticsError::UnsupportedCombination {
        alphabet,
        labeling,
        size,
    };
    let mf = size as f64;
    let normalized = match alphabet {
        AlphabetKind::Pam => match labeling {
            LabelingKind::Brgc => 3.0 * mf * mf / (4.0 * (mf * mf - 1.0)),
            LabelingKind::Fbc if m >= 2 => 3.0 * mf * mf / (4.0 * (mf * mf - 1.0)),
            LabelingKind::Nbc => 1.0,
            LabelingKind::Bsgc if m >= 3 => 0.0,
            _ => return Err(unsupported),
        },
        AlphabetKind::Psk => {
            if m < 2 {
                return Err(unsupported);
            }
            let base = 4.0 / (mf * mf * (std::f64::consts::PI / mf).sin().powi(2));
            match labeling {
                LabelingKind::Brgc => 2.0 * base,
                LabelingKind::Nbc => base,
                LabelingKind::Bsgc if m >= 3 => {
                    let sec = 1.0 / (2.0 * std::f64::consts::PI / mf).cos();
                    base * (1.0 + (1.0 - sec).powi(2))
                }
                LabelingKind::Fbc => {
                    let tan_sum: f64 = (2..=m)
                        .map(|k| (std::f64::consts::PI / (1u64 << k) as f64).tan().powi(2))
                        .sum();
                    base * (1.0 + tan_sum)
                }
                _ => return Err(unsupported),
            }
        }
    };
    Ok(AlphaCoefficient::from_normalized(normalized))
}

/// Outcome of the hypercube-projection test for uniform inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct FooVerdict {
    /// True iff the alphabet is (numerically) an exact projection of the
    /// labeling's +/-1 hypercube, i.e. reaches the Shannon-limit slope.
    pub is_foo: bool,
    /// Recovered m x N projection matrix, present when `is_foo`.
    pub projection: Option<Vec<Vec<f64>>>,
    /// Relative least-squares residual of the projection fit.
    pub residual: f64,
    /// True iff the recovered projection rows are pairwise orthogonal
    /// (the constant-energy diagnostic).
    pub orthogonal_projection: bool,
}

/// Tests whether `[alphabet, labeling, uniform]` is first-order optimal by
/// solving the exact least squares `X ~ Q(L) V` (the Q columns are
/// orthogonal, so `V = Q^T X / M`).
pub fn is_foo(alphabet: &InputAlphabet, labeling: &Labeling) -> FooVerdict {
    assert_eq!(alphabet.len(), labeling.size());
    let big_m = alphabet.len();
    let m = labeling.order();
    let dim = alphabet.dim();
    let q = labeling.modified_matrix();
    let mut v = vec![vec![0.0; dim]; m];
    for i in 0..big_m {
        for k in 0..m {
            let s = q.entry(i, k) as f64;
            for (d, x) in alphabet.point(i).iter().enumerate() {
                v[k][d] += s * x / big_m as f64;
            }
        }
    }
    let mut residual_num = 0.0;
    let mut x_norm = 0.0;
    for i in 0..big_m {
        let point = alphabet.point(i);
        x_norm += norm_sq(point);
        for d in 0..dim {
            let fit: f64 = (0..m).map(|k| q.entry(i, k) as f64 * v[k][d]).sum();
            residual_num += (point[d] - fit).powi(2);
        }
    }
    let residual = if x_norm > 0.0 {
        residual_num / x_norm
    } else {
        0.0
    };
    let is_foo = residual <= FOO_RESIDUAL_TOL;
    let mut orthogonal = true;
    for k in 0..m {
        for l in k + 1..m {
            let dot: f64 = (0..dim).map(|d| v[k][d] * v[l][d]).sum();
            let scale = (norm_sq(&v[k]) * norm_sq(&v[l])).sqrt();
            if dot.abs() > 1e-9 * scale.max(1e-300) {
                orthogonal = false;
            }
        }
    }
    FooVerdict {
        is_foo,
        projection: is_foo.then_some(v),
        residual,
        orthogonal_projection: orthogonal,
    }
}

/// Closed-form required Eb/N0 of the Gaussian-input channel at rate `rc`.
pub fn f_awgn(rc: f64, dims: usize) -> f64 {
    let n = dims as f64;
    n / (2.0 * rc) * ((2.0f64).powf(2.0 * rc / n) - 1.0)
}

/// Closed-form derivative of [`f_awgn`] in `rc`; strictly positive for
/// positive rates, so the Gaussian channel's minimum Eb/N0 sits at rate 0.
pub fn g_awgn(rc: f64, dims: usize) -> f64 {
    let n = dims as f64;
    let num = n + (2.0 * rc * std::f64::consts::LN_2 - n) * (2.0f64).powf(2.0 * rc / n);
    num / (2.0 * rc * rc)
}

/// Minimum-Eb/N0 search result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinEbN0 {
    /// Minimizing rate; 0 when the minimum sits at vanishing rate.
    pub rc: f64,
    /// Minimum Eb/N0, linear.
    pub ebn0: f64,
    pub ebn0_db: f64,
}

/// A monotone sampled snr -> rate map with inversion support: the required
/// Eb/N0 curve `f`, its derivative `g`, and the minimum-Eb/N0 search.
pub struct RateFunction {
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    samples: Vec<CapacityPoint>,
    e_h2: f64,
}

impl RateFunction {
    /// Builds from an arbitrary capacity evaluator sampled on `snr_grid`
    /// (positive, strictly increasing). Fails if the sampled rates are not
    /// strictly increasing.
    pub fn from_fn<F>(eval: F, snr_grid: &[f64], e_h2: f64) -> Result<Self, CurveError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if snr_grid.is_empty()
            || snr_grid[0] <= 0.0
            || snr_grid.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(CurveError::BadGrid);
        }
        let rates: Vec<f64> = snr_grid.par_iter().map(|&s| eval(s)).collect();
        let samples: Vec<CapacityPoint> = snr_grid
            .iter()
            .zip(&rates)
            .map(|(&snr, &rate)| CapacityPoint { snr, rate })
            .collect();
        if let Some(idx) = samples.windows(2).position(|w| w[1].rate <= w[0].rate) {
            return Err(CurveError::NonMonotone(idx + 1));
        }
        Ok(RateFunction {
            eval: Box::new(eval),
            samples,
            e_h2,
        })
    }

    /// Curve for a constellation capacity under the given channel.
    pub fn from_capacity(
        omega: &Constellation,
        kind: CapacityKind,
        fading: &FadingModel,
        q: &QuadratureSpec,
        snr_grid: &[f64],
    ) -> Result<Self, CurveError> {
        let omega = omega.clone();
        let fading = *fading;
        let q = *q;
        let e_h2 = fading.mean_square();
        let eval = move |snr: f64| match kind {
            CapacityKind::Cm => cm_capacity(&omega, snr, &fading, &q).expect("valid inputs"),
            CapacityKind::Bicm => bicm_capacity(&omega, snr, &fading, &q).expect("valid inputs"),
        };
        RateFunction::from_fn(eval, snr_grid, e_h2)
    }

    /// Closed-form Gaussian-input curve in `dims` dimensions.
    pub fn awgn(dims: usize) -> Self {
        let n = dims;
        RateFunction::from_fn(
            move |snr| awgn_rate(snr, n),
            &default_snr_grid(),
            1.0,
        )
        .expect("closed form is monotone")
    }

    pub fn samples(&self) -> &[CapacityPoint] {
        &self.samples
    }

    pub fn max_rate(&self) -> f64 {
        self.samples.last().map(|p| p.rate).unwrap_or(0.0)
    }

    /// Inverse of the capacity: the snr at which the curve reaches `rc`.
    /// Bisection against the evaluator, to 1e-9 absolute in rate.
    pub fn invert(&self, rc: f64) -> Result<f64, CurveError> {
        if !(rc > 0.0) || rc >= self.max_rate() {
            return Err(CurveError::RateOutOfRange {
                rc,
                max: self.max_rate(),
            });
        }
        let idx = self
            .samples
            .iter()
            .position(|p| p.rate >= rc)
            .expect("rc below max sampled rate");
        let (mut lo, mut hi) = if idx == 0 {
            (0.0, self.samples[0].snr)
        } else {
            (self.samples[idx - 1].snr, self.samples[idx].snr)
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let rate = (self.eval)(mid);
            if (rate - rc).abs() <= 1e-9 {
                return Ok(mid);
            }
            if rate < rc {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Required Eb/N0 (linear) at rate `rc`.
    pub fn f(&self, rc: f64) -> Result<f64, CurveError> {
        Ok(self.invert(rc)? / (self.e_h2 * rc))
    }

    pub fn f_db(&self, rc: f64) -> Result<f64, CurveError> {
        Ok(10.0 * self.f(rc)?.log10())
    }

    /// Derivative of `f` by central differences with relative step 1e-4.
    pub fn g(&self, rc: f64) -> Result<f64, CurveError> {
        let step = 1e-4 * rc;
        let hi = self.f(rc + step)?;
        let lo = self.f(rc - step)?;
        Ok((hi - lo) / (2.0 * step))
    }

    /// Low-rate limit of the Eb/N0 curve in dB, Richardson-extrapolated
    /// from rates 4e-3, 2e-3, 1e-3.
    pub fn low_rate_limit_db(&self) -> Result<f64, CurveError> {
        let f1 = self.f(1e-3)?;
        let f2 = self.f(2e-3)?;
        let f4 = self.f(4e-3)?;
        let f0 = (8.0 * f1 - 6.0 * f2 + f4) / 3.0;
        Ok(10.0 * f0.log10())
    }

    /// Global minimum of the Eb/N0 curve: scans a 200-point log-spaced rate
    /// grid for sign changes of `g`, bisects each root, and compares the
    /// interior minima against the vanishing-rate limit.
    pub fn min_ebn0(&self) -> Result<MinEbN0, CurveError> {
        let lo_rc = 1e-3;
        let hi_rc = 0.99 * self.max_rate();
        if hi_rc <= lo_rc {
            return Err(CurveError::RateOutOfRange {
                rc: lo_rc,
                max: self.max_rate(),
            });
        }
        let n = 200;
        let ratio = (hi_rc / lo_rc).ln();
        let grid: Vec<f64> = (0..n)
            .map(|i| lo_rc * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        let g_values: Vec<f64> = grid
            .par_iter()
            .map(|&rc| self.g(rc))
            .collect::<Result<_, _>>()?;
        let limit_linear = {
            let f1 = self.f(1e-3)?;
            let f2 = self.f(2e-3)?;
            let f4 = self.f(4e-3)?;
            (8.0 * f1 - 6.0 * f2 + f4) / 3.0
        };
        let mut best = MinEbN0 {
            rc: 0.0,
            ebn0: limit_linear,
            ebn0_db: 10.0 * limit_linear.log10(),
        };
        for i in 0..n - 1 {
            if g_values[i] < 0.0 && g_values[i + 1] >= 0.0 {
                let (mut lo, mut hi) = (grid[i], grid[i + 1]);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.g(mid)? < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let rc = 0.5 * (lo + hi);
                let ebn0 = self.f(rc)?;
                if ebn0 < best.ebn0 {
                    best = MinEbN0 {
                        rc,
                        ebn0,
                        ebn0_db: 10.0 * ebn0.log10(),
                    };
                }
            }
        }
        Ok(best)
    }
}

fn awgn_rate(snr: f64, dims: usize) -> f64 {
    let n = dims as f64;
    0.5 * n * (1.0 + 2.0 * snr / n).log2()
}

/// Log-spaced snr grid from 1e-5 to 1e3, 81 points; wide enough to invert
/// rates from 1e-3 up to near saturation for the supported alphabets.
pub fn default_snr_grid() -> Vec<f64> {
    (0..81)
        .map(|i| 10f64.powf(-5.0 + 8.0 * i as f64 / 80.0))
        .collect()
}

/// SNR gap (dB) of a sampled curve against the Gaussian-input channel of
/// the same dimensionality at rate `rc`.
pub fn snr_gap_db(rf: &RateFunction, rc: f64, dims: usize) -> Result<f64, CurveError> {
    Ok(10.0 * (rf.f(rc)? / f_awgn(rc, dims)).log10())
}

/// Gap of a constellation capacity to the Gaussian-input channel at rate
/// `rc`, building the capacity curve on `snr_grid`.
pub fn snr_gap(
    omega: &Constellation,
    rc: f64,
    kind: CapacityKind,
    fading: &FadingModel,
    q: &QuadratureSpec,
    snr_grid: &[f64],
) -> Result<f64, CurveError> {
    let rf = RateFunction::from_capacity(omega, kind, fading, q, snr_grid)?;
    snr_gap_db(&rf, rc, omega.dim())
}

/// Vanishing-rate SNR gap `log2(e)/alpha` in dB; infinite for a zero
/// coefficient.
pub fn asymptotic_gap_db(alpha: &AlphaCoefficient) -> f64 {
    if alpha.value() <= 0.0 {
        f64::INFINITY
    } else {
        10.0 * (LOG2_E / alpha.value()).log10()
    }
}
