//! Adaptive random-walk Metropolis with componentwise proposals, plus
//! split-chain R-hat, autocorrelation-based effective sample size, and HPD
//! intervals.
//!
//! Step sizes adapt during burn-in by a Robbins–Monro update toward a target
//! acceptance rate and are frozen afterwards, so the retained segment is a
//! fixed-kernel Markov chain. Everything is deterministic given the seed.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::robustness::standard_normal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McmcError {
    #[error("log target is not finite at the initial point")]
    InitInvalid,
    #[error("iterations must exceed burn-in")]
    IterationsTooSmall,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("chains must have equal retained lengths of at least 4")]
    LengthMismatch,
    #[error("need at least 2 chains for R-hat")]
    TooFewChains,
}

pub type Result<T> = core::result::Result<T, McmcError>;

/// Bijection between a constrained coordinate and the unconstrained real
/// line the sampler walks on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// Unconstrained reals.
    Identity,
    /// Positives via x = exp(u).
    LogPositive,
    /// Unit interval via x = sigmoid(u).
    LogitUnit,
}

impl Transform {
    pub fn to_unconstrained(&self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::LogPositive => x.ln(),
            Transform::LogitUnit => (x / (1.0 - x)).ln(),
        }
    }

    pub fn to_constrained(&self, u: f64) -> f64 {
        match self {
            Transform::Identity => u,
            Transform::LogPositive => u.exp(),
            Transform::LogitUnit => sigmoid(u),
        }
    }

    /// ln |dx/du| at the unconstrained point.
    pub fn log_jacobian(&self, u: f64) -> f64 {
        match self {
            Transform::Identity => 0.0,
            Transform::LogPositive => u,
            Transform::LogitUnit => -softplus(u) - softplus(-u),
        }
    }
}

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Sampler settings; `target_accept` defaults to 0.30 for componentwise
/// random-walk proposals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub iterations: usize,
    pub burnin: usize,
    pub seed: u64,
    pub target_accept: f64,
}

impl SamplerConfig {
    pub fn new(iterations: usize, burnin: usize, seed: u64) -> Self {
        Self {
            iterations,
            burnin,
            seed,
            target_accept: 0.30,
        }
    }
}

/// Post-burn-in MCMC output. Draws are retained on both scales; the
/// log-density trace is the unconstrained-scale target (with Jacobian).
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub draws: Vec<Vec<f64>>,
    pub draws_unconstrained: Vec<Vec<f64>>,
    pub log_density: Vec<f64>,
    pub acceptance_rate: f64,
    pub seed: u64,
    /// Per-component proposal scales frozen at the end of burn-in.
    pub step_sizes: Vec<f64>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn param(&self, index: usize) -> Vec<f64> {
        self.draws.iter().map(|row| row[index]).collect()
    }
}

/// Componentwise adaptive random-walk Metropolis over a constrained-scale
/// log target.
///
/// Non-finite proposal targets are tolerated (auto-rejected); a non-finite
/// target at the initial point is an error.
pub fn adaptive_rw_metropolis(
    log_target: impl Fn(&[f64]) -> f64,
    transforms: &[Transform],
    init: &[f64],
    config: &SamplerConfig,
) -> Result<Chain> {
    if transforms.len() != init.len() {
        return Err(McmcError::DimensionMismatch(
            "transforms and init lengths differ",
        ));
    }
    if config.iterations <= config.burnin {
        return Err(McmcError::IterationsTooSmall);
    }
    let dim = init.len();
    let eval = |u: &[f64]| -> f64 {
        let x: Vec<f64> = u
            .iter()
            .zip(transforms)
            .map(|(&ui, tr)| tr.to_constrained(ui))
            .collect();
        let mut lt = log_target(&x);
        if lt.is_nan() {
            return f64::NEG_INFINITY;
        }
        for (&ui, tr) in u.iter().zip(transforms) {
            lt += tr.log_jacobian(ui);
        }
        if lt.is_nan() {
            f64::NEG_INFINITY
        } else {
            lt
        }
    };

    let mut u: Vec<f64> = init
        .iter()
        .zip(transforms)
        .map(|(&x, tr)| tr.to_unconstrained(x))
        .collect();
    let mut lt = eval(&u);
    if !lt.is_finite() {
        return Err(McmcError::InitInvalid);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut steps = alloc::vec![0.5; dim];
    let retained = config.iterations - config.burnin;
    let mut draws = Vec::with_capacity(retained);
    let mut draws_u = Vec::with_capacity(retained);
    let mut log_density = Vec::with_capacity(retained);
    let mut kept_accepts = 0usize;
    let mut kept_proposals = 0usize;

    for t in 0..config.iterations {
        let adapting = t < config.burnin;
        for j in 0..dim {
            let old = u[j];
            u[j] = old + steps[j] * standard_normal(&mut rng);
            let lt_new = eval(&u);
            let accept = lt_new - lt >= 0.0 || rng.random::<f64>() < (lt_new - lt).exp();
            if accept {
                lt = lt_new;
            } else {
                u[j] = old;
            }
            if adapting {
                // Robbins-Monro on the log step, unit gain, 1/sqrt(t) decay.
                let acc = if accept { 1.0 } else { 0.0 };
                steps[j] *= ((acc - config.target_accept) / ((t + 1) as f64).sqrt()).exp();
            } else {
                kept_proposals += 1;
                if accept {
                    kept_accepts += 1;
                }
            }
        }
        if !adapting {
            let x: Vec<f64> = u
                .iter()
                .zip(transforms)
                .map(|(&ui, tr)| tr.to_constrained(ui))
                .collect();
            draws.push(x);
            draws_u.push(u.clone());
            log_density.push(lt);
        }
    }

    Ok(Chain {
        draws,
        draws_unconstrained: draws_u,
        log_density,
        acceptance_rate: kept_accepts as f64 / kept_proposals.max(1) as f64,
        seed: config.seed,
        step_sizes: steps,
    })
}

/// Split-chain potential scale reduction factor for one parameter.
pub fn r_hat(chains: &[Chain], param_index: usize) -> Result<f64> {
    if chains.len() < 2 {
        return Err(McmcError::TooFewChains);
    }
    let len = chains[0].len();
    if chains.iter().any(|c| c.len() != len) || len < 4 {
        return Err(McmcError::LengthMismatch);
    }
    let series: Vec<Vec<f64>> = chains.iter().map(|c| c.param(param_index)).collect();
    split_r_hat(&series)
}

/// Split-chain R-hat over raw per-chain series.
pub fn split_r_hat(series: &[Vec<f64>]) -> Result<f64> {
    if series.len() < 2 {
        return Err(McmcError::TooFewChains);
    }
    let len = series.iter().map(|s| s.len()).min().unwrap_or(0);
    if len < 4 {
        return Err(McmcError::LengthMismatch);
    }
    let half = len / 2;
    let mut split: Vec<&[f64]> = Vec::with_capacity(series.len() * 2);
    for s in series {
        split.push(&s[..half]);
        split.push(&s[len - half..]);
    }
    let n = half as f64;
    let means: Vec<f64> = split.iter().map(|s| mean(s)).collect();
    let vars: Vec<f64> = split.iter().map(|s| sample_var(s)).collect();
    let var_between = n * sample_var(&means);
    let var_within = mean(&vars);
    if var_within == 0.0 {
        return Ok(if var_between == 0.0 { 1.0 } else { f64::INFINITY });
    }
    Ok(((var_between / var_within + n - 1.0) / n).sqrt())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_var(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Effective sample size N/(1 + 2Σρ_k) with the autocorrelation sum
/// truncated at the first non-positive paired term, clamped to [1, N].
pub fn ess(chain: &Chain, param_index: usize) -> f64 {
    ess_from_series(&chain.param(param_index))
}

pub fn ess_from_series(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 10 {
        return 1.0;
    }
    let m = mean(xs);
    let centered: Vec<f64> = xs.iter().map(|&x| x - m).collect();
    let c0 = centered.iter().map(|&x| x * x).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return 1.0;
    }
    let rho = |k: usize| -> f64 {
        let s: f64 = (0..n - k).map(|i| centered[i] * centered[i + k]).sum();
        s / (n as f64) / c0
    };
    let mut tau = 1.0;
    let mut k = 1;
    while k + 1 < n {
        let pair = rho(k) + rho(k + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        k += 2;
    }
    (n as f64 / tau).clamp(1.0, n as f64)
}

/// Shortest interval containing ⌈prob·N⌉ sorted samples; leftmost on ties.
pub fn hpd_interval(samples: &[f64], prob: f64) -> (f64, f64) {
    debug_assert!(samples.len() >= 10, "hpd_interval wants at least 10 samples");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let n = sorted.len();
    let w = ((prob * n as f64).ceil() as usize).clamp(1, n);
    let mut best = (sorted[0], sorted[w - 1]);
    let mut best_width = best.1 - best.0;
    for i in 1..=(n - w) {
        let width = sorted[i + w - 1] - sorted[i];
        if width < best_width {
            best_width = width;
            best = (sorted[i], sorted[i + w - 1]);
        }
    }
    best
}
