//! Mutual-information engines: the closed-form Gaussian-input capacity, the
//! symbol-wise (CM) capacity, per-bit and total BICM capacities, and the
//! L-value demapper.
//!
//! Noise integrals use tensorized Gauss-Hermite quadrature; fading averages
//! use seeded Monte Carlo over a common scalar fade. All mixture logarithms
//! go through max-subtracted log-sum-exp so high-SNR evaluations do not
//! underflow.

use crate::alphabets::{Constellation, FadingModel};
use crate::quad::gauss_hermite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CapacityError {
    #[error("snr must be nonnegative, got {0}")]
    NegativeSnr(f64),
    #[error("dimension count must be at least 1")]
    BadDimension,
    #[error("bit index {k} out of range for order {m}")]
    BitIndexOutOfRange { k: usize, m: usize },
    #[error("quadrature order must be at least 8, got {0}")]
    QuadratureOrderTooSmall(usize),
    #[error("Monte-Carlo sample count must be at least 1")]
    NoMcSamples,
    #[error("noise density must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("vector length {got} does not match constellation dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Numerical integration parameters. Deterministic given `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Gauss-Hermite nodes per dimension.
    pub gh_order: usize,
    /// Fade draws for the fading expectation.
    pub mc_samples: usize,
    /// Base RNG seed; the per-evaluation seed also mixes in the SNR bits.
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            gh_order: 40,
            mc_samples: 10_000,
            seed: 0x1ceb00da,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<(), CapacityError> {
        if self.gh_order < 8 {
            return Err(CapacityError::QuadratureOrderTooSmall(self.gh_order));
        }
        if self.mc_samples == 0 {
            return Err(CapacityError::NoMcSamples);
        }
        Ok(())
    }
}

/// One sample of a capacity curve: linear average SNR and rate in bits per
/// symbol (per N real dimensions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub snr: f64,
    pub rate: f64,
}

/// Which capacity a curve tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityKind {
    Cm,
    Bicm,
}

/// Gaussian-input capacity `N/2 log2(1 + 2 snr / N)` of the N-dimensional
/// noise channel.
pub fn awgn_capacity(snr: f64, dims: usize) -> Result<f64, CapacityError> {
    if dims < 1 {
        return Err(CapacityError::BadDimension);
    }
    if !(snr >= 0.0) {
        return Err(CapacityError::NegativeSnr(snr));
    }
    let n = dims as f64;
    Ok(0.5 * n * (1.0 + 2.0 * snr / n).log2())
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn derive_seed(base: u64, snr: f64) -> u64 {
    splitmix64(base ^ splitmix64(snr.to_bits()))
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Shared state for the Gauss-Hermite expectations at one constellation and
/// noise level. Symbols with zero probability are excluded from all
/// mixtures; bits with a deterministic value are skipped.
struct GhEngine<'a> {
    omega: &'a Constellation,
    n0: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    active: Vec<usize>,
    log_p: Vec<f64>,                 // ln pmf per active position
    subsets: Vec<[Vec<usize>; 2]>,   // active positions per (bit, value)
    live_bits: Vec<usize>,
}

impl<'a> GhEngine<'a> {
    fn new(omega: &'a Constellation, n0: f64, gh_order: usize) -> Self {
        let (nodes, weights) = gauss_hermite(gh_order);
        let active: Vec<usize> = (0..omega.size())
            .filter(|&i| omega.pmf().prob(i) > 0.0)
            .collect();
        let log_p = active.iter().map(|&i| omega.pmf().prob(i).ln()).collect();
        let m = omega.order();
        let subsets = (0..m)
            .map(|k| {
                let mut sets: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
                for (pos, &i) in active.iter().enumerate() {
                    sets[omega.labeling().bit(i, k) as usize].push(pos);
                }
                sets
            })
            .collect();
        let live_bits = (0..m)
            .filter(|&k| omega.bits().prob(k, 0) > 0.0 && omega.bits().prob(k, 1) > 0.0)
            .collect();
        GhEngine {
            omega,
            n0,
            nodes,
            weights,
            active,
            log_p,
            subsets,
            live_bits,
        }
    }

    /// Expectation over transmitted symbols and noise of `integrand`, which
    /// receives the transmitted symbol's active position, the mixture log
    /// kernels `ln P_j - ||y - h x_j||^2 / N0`, and their full log-sum.
    /// Returns nats.
    fn expect<F>(&self, fade: f64, mut integrand: F) -> f64
    where
        F: FnMut(usize, &[f64], f64) -> f64,
    {
        let dim = self.omega.dim();
        let gh = self.nodes.len();
        let node_total = gh.pow(dim as u32);
        let sqrt_n0 = self.n0.sqrt();
        let scaled: Vec<Vec<f64>> = self
            .active
            .iter()
            .map(|&i| self.omega.alphabet().point(i).iter().map(|v| v * fade).collect())
            .collect();
        let mut kernels = vec![0.0; self.active.len()];
        let mut y = vec![0.0; dim];
        let mut total = 0.0;
        for (pos, &i) in self.active.iter().enumerate() {
            let p_i = self.omega.pmf().prob(i);
            let mut acc = 0.0;
            for flat in 0..node_total {
                let mut rest = flat;
                let mut wt = 1.0;
                for d in 0..dim {
                    let id = rest % gh;
                    rest /= gh;
                    y[d] = scaled[pos][d] + sqrt_n0 * self.nodes[id];
                    wt *= self.weights[id];
                }
                let mut max = f64::NEG_INFINITY;
                for (j, x) in scaled.iter().enumerate() {
                    let mut dist = 0.0;
                    for d in 0..dim {
                        let diff = y[d] - x[d];
                        dist += diff * diff;
                    }
                    let v = self.log_p[j] - dist / self.n0;
                    kernels[j] = v;
                    if v > max {
                        max = v;
                    }
                }
                let full_lse = max + kernels.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
                acc += wt * integrand(pos, &kernels, full_lse);
            }
            total += p_i * acc;
        }
        total
    }

    /// Symbol-wise mutual information at a fixed fade, in bits.
    fn cm(&self, fade: f64) -> f64 {
        let nats = self.expect(fade, |pos, kernels, full_lse| {
            kernels[pos] - self.log_p[pos] - full_lse
        });
        nats / std::f64::consts::LN_2
    }

    /// Mutual information between bit `k` and the output at a fixed fade.
    fn bit(&self, k: usize, fade: f64) -> f64 {
        if !self.live_bits.contains(&k) {
            return 0.0;
        }
        let lnp = [
            self.omega.bits().prob(k, 0).ln(),
            self.omega.bits().prob(k, 1).ln(),
        ];
        let nats = self.expect(fade, |pos, kernels, full_lse| {
            let u = self.omega.labeling().bit(self.active[pos], k) as usize;
            let sub = log_sum_exp(self.subsets[k][u].iter().map(|&j| kernels[j]));
            sub - lnp[u] - full_lse
        });
        nats / std::f64::consts::LN_2
    }

    /// Sum of all live per-bit informations at a fixed fade.
    fn bicm(&self, fade: f64) -> f64 {
        let lnp: Vec<[f64; 2]> = (0..self.omega.order())
            .map(|k| {
                [
                    self.omega.bits().prob(k, 0).ln(),
                    self.omega.bits().prob(k, 1).ln(),
                ]
            })
            .collect();
        let nats = self.expect(fade, |pos, kernels, full_lse| {
            let i = self.active[pos];
            self.live_bits
                .iter()
                .map(|&k| {
                    let u = self.omega.labeling().bit(i, k) as usize;
                    let sub = log_sum_exp(self.subsets[k][u].iter().map(|&j| kernels[j]));
                    sub - lnp[k][u] - full_lse
                })
                .sum()
        });
        nats / std::f64::consts::LN_2
    }

    /// Mutual information of the sub-constellation conditioned on bit `k`
    /// taking value `u`, at a fixed fade.
    fn cm_conditional(&self, k: usize, u: u8, fade: f64) -> f64 {
        let pck = self.omega.bits().prob(k, u);
        let ln_pck = pck.ln();
        let members = &self.subsets[k][u as usize];
        let nats = self.expect(fade, |pos, kernels, _full_lse| {
            let i = self.active[pos];
            if self.omega.labeling().bit(i, k) != u {
                return 0.0;
            }
            let sub = log_sum_exp(members.iter().map(|&j| kernels[j]));
            kernels[pos] - self.log_p[pos] - (sub - ln_pck)
        });
        // The outer expectation weights by P_i; conditioning rescales by P_{C_k}(u).
        nats / pck / std::f64::consts::LN_2
    }
}

fn noise_density(omega: &Constellation, snr: f64, fading: &FadingModel) -> f64 {
    fading.mean_square() * omega.es() / snr
}

/// Averages `per_fade` over the fading law. Returns the mean and, for the
/// Monte-Carlo branch, the standard error of the mean.
fn fading_average<F>(
    fading: &FadingModel,
    q: &QuadratureSpec,
    snr: f64,
    per_fade: F,
) -> (f64, Option<f64>)
where
    F: Fn(f64) -> f64 + Sync,
{
    if fading.is_awgn() {
        return (per_fade(1.0), None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(q.seed, snr));
    let fades: Vec<f64> = (0..q.mc_samples).map(|_| fading.sample(&mut rng)).collect();
    let values: Vec<f64> = fades.par_iter().map(|&h| per_fade(h)).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let se = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Some((var / n).sqrt())
    } else {
        None
    };
    (mean, se)
}

fn check_snr(snr: f64) -> Result<(), CapacityError> {
    if !(snr >= 0.0) {
        return Err(CapacityError::NegativeSnr(snr));
    }
    Ok(())
}

/// Mutual information between the transmitted symbol and the output.
/// Labeling-independent; equals the sum of the chain-rule bit levels.
pub fn cm_capacity(
    omega: &Constellation,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<f64, CapacityError> {
    q.validate()?;
    check_snr(snr)?;
    if snr == 0.0 {
        return Ok(0.0);
    }
    let engine = GhEngine::new(omega, noise_density(omega, snr, fading), q.gh_order);
    Ok(fading_average(fading, q, snr, |h| engine.cm(h)).0)
}

/// Mutual information between bit `k` of the label and the output, with the
/// nonuniform weighting of the bit's two values. A deterministic bit
/// contributes zero.
pub fn bitlevel_ami(
    omega: &Constellation,
    k: usize,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<f64, CapacityError> {
    q.validate()?;
    check_snr(snr)?;
    if k >= omega.order() {
        return Err(CapacityError::BitIndexOutOfRange {
            k,
            m: omega.order(),
        });
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    let engine = GhEngine::new(omega, noise_density(omega, snr, fading), q.gh_order);
    Ok(fading_average(fading, q, snr, |h| engine.bit(k, h)).0)
}

/// Sum of the per-bit mutual informations: the rate of the parallel
/// independent-bit decoding model.
pub fn bicm_capacity(
    omega: &Constellation,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<f64, CapacityError> {
    Ok(bicm_capacity_stats(omega, snr, fading, q)?.0)
}

/// As [`bicm_capacity`], also returning the Monte-Carlo standard error of
/// the fading average (None for the deterministic AWGN path).
pub fn bicm_capacity_stats(
    omega: &Constellation,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<(f64, Option<f64>), CapacityError> {
    q.validate()?;
    check_snr(snr)?;
    if snr == 0.0 {
        return Ok((0.0, None));
    }
    let engine = GhEngine::new(omega, noise_density(omega, snr, fading), q.gh_order);
    Ok(fading_average(fading, q, snr, |h| engine.bicm(h)))
}

/// The same rate as [`bicm_capacity`], evaluated through the difference of
/// the full and the bit-conditioned symbol-wise informations.
pub fn bicm_capacity_diff(
    omega: &Constellation,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<f64, CapacityError> {
    q.validate()?;
    check_snr(snr)?;
    if snr == 0.0 {
        return Ok(0.0);
    }
    let engine = GhEngine::new(omega, noise_density(omega, snr, fading), q.gh_order);
    let per_fade = |h: f64| {
        let full = engine.cm(h);
        let mut total = 0.0;
        for k in 0..omega.order() {
            for u in 0..2u8 {
                let pck = omega.bits().prob(k, u);
                if pck > 0.0 {
                    total += pck * (full - engine.cm_conditional(k, u, h));
                }
            }
        }
        total
    };
    Ok(fading_average(fading, q, snr, per_fade).0)
}

/// Capacity sampled over an SNR grid; points are evaluated in parallel and
/// gathered in grid order.
pub fn capacity_over_grid(
    omega: &Constellation,
    kind: CapacityKind,
    fading: &FadingModel,
    q: &QuadratureSpec,
    snrs: &[f64],
) -> Result<Vec<CapacityPoint>, CapacityError> {
    snrs.par_iter()
        .map(|&snr| {
            let rate = match kind {
                CapacityKind::Cm => cm_capacity(omega, snr, fading, q)?,
                CapacityKind::Bicm => bicm_capacity(omega, snr, fading, q)?,
            };
            Ok(CapacityPoint { snr, rate })
        })
        .collect()
}

/// L-value flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LValueMode {
    Exact,
    MaxLog,
}

/// A posteriori L-value of bit `k` for observation `y` under fade `h`
/// (per-dimension), treating the symbols as equiprobable. `MaxLog` replaces
/// each log-sum by the dominant term, giving a piecewise linear demapper.
pub fn lvalue(
    y: &[f64],
    h: &[f64],
    k: usize,
    omega: &Constellation,
    n0: f64,
    mode: LValueMode,
) -> Result<f64, CapacityError> {
    if !(n0 > 0.0) {
        return Err(CapacityError::NonPositiveNoise(n0));
    }
    if k >= omega.order() {
        return Err(CapacityError::BitIndexOutOfRange {
            k,
            m: omega.order(),
        });
    }
    let dim = omega.dim();
    if y.len() != dim {
        return Err(CapacityError::DimensionMismatch {
            expected: dim,
            got: y.len(),
        });
    }
    if h.len() != dim {
        return Err(CapacityError::DimensionMismatch {
            expected: dim,
            got: h.len(),
        });
    }
    let dist_sq = |i: usize| {
        let x = omega.alphabet().point(i);
        (0..dim)
            .map(|d| {
                let diff = y[d] - h[d] * x[d];
                diff * diff
            })
            .sum::<f64>()
    };
    let value = match mode {
        LValueMode::Exact => {
            let side = |u: u8| log_sum_exp(omega.index_set(k, u).iter().map(|&i| -dist_sq(i) / n0));
            side(1) - side(0)
        }
        LValueMode::MaxLog => {
            let side = |u: u8| {
                omega
                    .index_set(k, u)
                    .iter()
                    .map(|&i| dist_sq(i))
                    .fold(f64::INFINITY, f64::min)
            };
            (side(0) - side(1)) / n0
        }
    };
    Ok(value)
}
