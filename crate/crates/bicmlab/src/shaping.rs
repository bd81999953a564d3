//! Probabilistic shaping: maximizing the BICM capacity over independent
//! per-bit input probabilities at a fixed average SNR.
//!
//! The search is exhaustive on a grid (the objective has multiple local
//! optima, so hill climbing is not trusted): a coarse 0.05 pass over the
//! full cube, then a refinement at the requested step inside a +/-0.05 box
//! around the coarse optimum. Candidates are compared at equal average SNR,
//! so each candidate's own symbol energy sets its noise density.

use crate::alphabets::{AlphabetError, BitDistribution, Constellation, FadingModel, InputAlphabet};
use crate::capacity::{bicm_capacity, CapacityError, QuadratureSpec};
use crate::labelings::Labeling;
use rayon::prelude::*;
use thiserror::Error;

/// Coarse-stage grid step.
pub const COARSE_STEP: f64 = 0.05;

/// Rates within this of the maximum count as tied; ties resolve to the
/// lexicographically smallest bit distribution.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ShapingError {
    #[error("shaping grid search supports at most 4 bit levels, got {0}")]
    OrderTooLarge(usize),
    #[error("grid step must divide 1 evenly and lie in (0, 0.5], got {0}")]
    BadGridStep(f64),
    #[error("alphabet and labeling size mismatch: {alphabet} points vs {labeling} codewords")]
    SizeMismatch { alphabet: usize, labeling: usize },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// Outcome of the per-SNR shaping search.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapingResult {
    pub snr: f64,
    /// Grid-aligned maximizer: probability of bit value 0 per position.
    pub best_p0: Vec<f64>,
    pub best_rate: f64,
    /// Uniform-input BICM capacity at the same SNR.
    pub baseline_rate: f64,
}

fn steps_per_unit(grid_step: f64) -> Result<usize, ShapingError> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(ShapingError::BadGridStep(grid_step));
    }
    let steps = (1.0 / grid_step).round();
    if (steps * grid_step - 1.0).abs() > 1e-9 {
        return Err(ShapingError::BadGridStep(grid_step));
    }
    Ok(steps as usize)
}

/// Evaluates one candidate bit distribution; unconstructible candidates
/// (degenerate point mass) rank below everything.
fn candidate_rate(
    alphabet: &InputAlphabet,
    labeling: &Labeling,
    p0: &[f64],
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> f64 {
    let bits = match BitDistribution::new(p0.to_vec()) {
        Ok(b) => b,
        Err(_) => return f64::NEG_INFINITY,
    };
    let omega = match Constellation::new(alphabet.clone(), labeling.clone(), bits) {
        Ok(o) => o,
        Err(_) => return f64::NEG_INFINITY,
    };
    bicm_capacity(&omega, snr, fading, q).unwrap_or(f64::NEG_INFINITY)
}

/// Exhaustive search over all candidate tuples; returns the maximizer with
/// near-ties resolved lexicographically.
fn search(
    alphabet: &InputAlphabet,
    labeling: &Labeling,
    candidates: &[Vec<f64>],
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> (Vec<f64>, f64) {
    let m = labeling.order();
    let counts: Vec<usize> = candidates.iter().map(|c| c.len()).collect();
    let total: usize = counts.iter().product();
    let rates: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut p0 = vec![0.0; m];
            for k in 0..m {
                p0[k] = candidates[k][rest % counts[k]];
                rest /= counts[k];
            }
            candidate_rate(alphabet, labeling, &p0, snr, fading, q)
        })
        .collect();
    let best = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut winner: Option<(Vec<f64>, f64)> = None;
    for (flat, &rate) in rates.iter().enumerate() {
        if rate < best - TIE_TOL {
            continue;
        }
        let mut rest = flat;
        let mut p0 = vec![0.0; m];
        for k in 0..m {
            p0[k] = candidates[k][rest % counts[k]];
            rest /= counts[k];
        }
        let replace = match &winner {
            None => true,
            Some((w, _)) => p0.as_slice() < w.as_slice(),
        };
        if replace {
            winner = Some((p0, rate));
        }
    }
    winner.expect("nonempty candidate grid")
}

/// Reference search: one exhaustive pass over the full `grid_step` lattice.
/// Exponential in the bit count; used to validate the two-stage search.
pub fn full_grid_search(
    alphabet: &InputAlphabet,
    labeling: &Labeling,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
    grid_step: f64,
) -> Result<ShapingResult, ShapingError> {
    validate(alphabet, labeling)?;
    let steps = steps_per_unit(grid_step)?;
    let m = labeling.order();
    let axis: Vec<f64> = (0..=steps).map(|i| i as f64 * grid_step).collect();
    let candidates = vec![axis; m];
    let (best_p0, best_rate) = search(alphabet, labeling, &candidates, snr, fading, q);
    let baseline_rate = uniform_rate(alphabet, labeling, snr, fading, q)?;
    Ok(ShapingResult {
        snr,
        best_p0,
        best_rate,
        baseline_rate,
    })
}

fn validate(alphabet: &InputAlphabet, labeling: &Labeling) -> Result<(), ShapingError> {
    if labeling.order() > 4 {
        return Err(ShapingError::OrderTooLarge(labeling.order()));
    }
    if alphabet.len() != labeling.size() {
        return Err(ShapingError::SizeMismatch {
            alphabet: alphabet.len(),
            labeling: labeling.size(),
        });
    }
    Ok(())
}

fn uniform_rate(
    alphabet: &InputAlphabet,
    labeling: &Labeling,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
) -> Result<f64, ShapingError> {
    let omega = Constellation::uniform(alphabet.clone(), labeling.clone())?;
    Ok(bicm_capacity(&omega, snr, fading, q)?)
}

/// Two-stage grid search for the bit distribution maximizing the BICM
/// capacity at the given SNR: a coarse 0.05 sweep of the whole cube, then a
/// `grid_step` sweep of the +/-0.05 box around the coarse optimum. The
/// coarse optimum and the uniform point always remain in the candidate set.
pub fn optimize_bit_pmfs(
    alphabet: &InputAlphabet,
    labeling: &Labeling,
    snr: f64,
    fading: &FadingModel,
    q: &QuadratureSpec,
    grid_step: f64,
) -> Result<ShapingResult, ShapingError> {
    validate(alphabet, labeling)?;
    let steps = steps_per_unit(grid_step)?;
    let m = labeling.order();

    let coarse_steps = steps_per_unit(COARSE_STEP).expect("static step");
    let coarse_axis: Vec<f64> = (0..=coarse_steps).map(|i| i as f64 * COARSE_STEP).collect();
    let coarse_candidates = vec![coarse_axis; m];
    let (coarse_p0, coarse_rate) =
        search(alphabet, labeling, &coarse_candidates, snr, fading, q);

    let refined: Vec<Vec<f64>> = coarse_p0
        .iter()
        .map(|&c| {
            let lo = ((c - COARSE_STEP) / grid_step).ceil().max(0.0) as usize;
            let hi = (((c + COARSE_STEP) / grid_step).floor() as usize).min(steps);
            (lo..=hi).map(|i| i as f64 * grid_step).collect()
        })
        .collect();
    let (mut best_p0, mut best_rate) = search(alphabet, labeling, &refined, snr, fading, q);

    // The refinement lattice need not contain the coarse point when the
    // steps are incommensurate; keep the stage-1 winner explicitly.
    if coarse_rate > best_rate + TIE_TOL
        || (coarse_rate >= best_rate - TIE_TOL && coarse_p0.as_slice() < best_p0.as_slice())
    {
        best_p0 = coarse_p0;
        best_rate = coarse_rate;
    }
    let baseline_rate = uniform_rate(alphabet, labeling, snr, fading, q)?;
    if baseline_rate > best_rate + TIE_TOL
        || (baseline_rate >= best_rate - TIE_TOL
            && vec![0.5; m].as_slice() < best_p0.as_slice())
    {
        best_p0 = vec![0.5; m];
        best_rate = baseline_rate;
    }
    Ok(ShapingResult {
        snr,
        best_p0,
        best_rate,
        baseline_rate,
    })
}
