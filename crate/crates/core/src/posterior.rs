//! Generalized power posterior construction.
//!
//! The central object is the normalized power mean
//!
//! ```text
//! g*(θ) ∝ { (1-ξ) p0(θ)^z + ξ p1(θ)^z }^{1/z},   z = (1+α)/2,
//! ```
//!
//! which minimizes the ξ-weighted sum of α-divergences to the pseudo
//! posteriors p0 (no borrowing) and p1 (full borrowing). As z → 0 the power
//! mean degenerates to the weighted geometric mean p0^{1-ξ} p1^ξ, i.e. the
//! classical power posterior; that limit is taken by an explicit branch
//! because (1/z)·log-sum-exp is ill-conditioned below z ≈ 1e-8.
//!
//! Scale caveat: the power mean is invariant when p0 and p1 are rescaled by
//! a *common* constant, not under independent rescalings. Inputs must be
//! supplied on a common scale — either both on the likelihood × prior scale,
//! or both normalized. Unbounded parameter spaces are handled by truncation:
//! the supplied grid *is* the operative domain.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use thiserror::Error;

use crate::divergence::{alpha_divergence, DivergenceError, GridDensity};
use crate::logsum::log_add_exp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PosteriorError {
    #[error("xi must lie in [0,1], got {0}")]
    XiOutOfRange(f64),
    #[error("alpha must be finite and > -1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("operation undefined in the geometric limit z≈0 with xi strictly inside (0,1)")]
    GeometricLimitUnsupported,
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

pub type Result<T> = core::result::Result<T, PosteriorError>;

/// Borrowing weight ξ and divergence parameter α, with the derived exponent
/// z = (1+α)/2.
///
/// α = -1 exactly (z = 0) is represented by the geometric-limit flag; all
/// consumers then use the weighted geometric mean, which coincides with the
/// classical power posterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorrowConfig {
    xi: f64,
    alpha: f64,
    z: f64,
    geometric_limit: bool,
}

impl BorrowConfig {
    const Z_EPS: f64 = 1e-8;

    pub fn new(xi: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) || !xi.is_finite() {
            return Err(PosteriorError::XiOutOfRange(xi));
        }
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(PosteriorError::AlphaOutOfRange(alpha));
        }
        let z = (1.0 + alpha) / 2.0;
        Ok(Self {
            xi,
            alpha,
            z,
            geometric_limit: z.abs() < Self::Z_EPS,
        })
    }

    /// The α → -1 (z → 0) limit: the classical power posterior.
    pub fn geometric(xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) || !xi.is_finite() {
            return Err(PosteriorError::XiOutOfRange(xi));
        }
        Ok(Self {
            xi,
            alpha: -1.0,
            z: 0.0,
            geometric_limit: true,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn is_geometric_limit(&self) -> bool {
        self.geometric_limit
    }
}

/// Pointwise log of the power mean {(1-ξ)e^{z·a} + ξe^{z·b}}^{1/z}.
///
/// ξ ∈ {0, 1} short-circuits before any ln ξ is formed; the geometric-limit
/// branch returns the weighted arithmetic mean of the log inputs.
pub fn generalized_log_posterior(log_p0: f64, log_p1: f64, cfg: &BorrowConfig) -> f64 {
    power_mean_log(log_p0, log_p1, cfg.xi, cfg.z, cfg.geometric_limit)
}

pub(crate) fn power_mean_log(log_p0: f64, log_p1: f64, xi: f64, z: f64, geometric: bool) -> f64 {
    if xi == 0.0 {
        return log_p0;
    }
    if xi == 1.0 {
        return log_p1;
    }
    if geometric {
        return (1.0 - xi) * log_p0 + xi * log_p1;
    }
    log_add_exp((1.0 - xi).ln() + z * log_p0, xi.ln() + z * log_p1) / z
}

/// Eq.-(1) posterior on a grid: pointwise power mean, then normalize.
///
/// `p0` and `p1` must share a grid and a common scale (see module docs).
pub fn generalized_posterior_grid(
    p0: &GridDensity,
    p1: &GridDensity,
    cfg: &BorrowConfig,
) -> Result<GridDensity> {
    ensure_same_grid(p0, p1)?;
    let log_vals: Vec<f64> = p0
        .log_vals()
        .iter()
        .zip(p1.log_vals())
        .map(|(&a, &b)| generalized_log_posterior(a, b, cfg))
        .collect();
    Ok(GridDensity::new(p0.xs().to_vec(), log_vals)?.normalize()?)
}

/// Classical power posterior ∝ L · L0^ξ · π0, from separate log grids.
pub fn classical_power_posterior_grid(
    log_lik: &GridDensity,
    log_lik_hist: &GridDensity,
    log_prior: &GridDensity,
    xi: f64,
) -> Result<GridDensity> {
    if !(0.0..=1.0).contains(&xi) || !xi.is_finite() {
        return Err(PosteriorError::XiOutOfRange(xi));
    }
    ensure_same_grid(log_lik, log_lik_hist)?;
    ensure_same_grid(log_lik, log_prior)?;
    let log_vals: Vec<f64> = (0..log_lik.len())
        .map(|i| {
            let hist = if xi == 0.0 {
                0.0 // skip entirely so ξ·(-inf) never forms NaN
            } else {
                xi * log_lik_hist.log_vals()[i]
            };
            log_lik.log_vals()[i] + hist + log_prior.log_vals()[i]
        })
        .collect();
    Ok(GridDensity::new(log_lik.xs().to_vec(), log_vals)?.normalize()?)
}

/// Log of the generalized power prior π_α ∝ π0 · {(1-ξ) + ξ L0^z}^{1/z}.
///
/// The z → 0 limit is not defined by this formula; ξ ∈ {0, 1} still reduce
/// exactly.
pub fn generalized_log_prior(log_prior: f64, log_lik_hist: f64, cfg: &BorrowConfig) -> Result<f64> {
    if cfg.xi == 0.0 {
        return Ok(log_prior);
    }
    if cfg.xi == 1.0 {
        return Ok(log_prior + log_lik_hist);
    }
    if cfg.geometric_limit {
        return Err(PosteriorError::GeometricLimitUnsupported);
    }
    Ok(log_prior + log_add_exp((1.0 - cfg.xi).ln(), cfg.xi.ln() + cfg.z * log_lik_hist) / cfg.z)
}

/// The weighted objective (1-ξ) D_α[g‖p0] + ξ D_α[g‖p1] that the
/// generalized posterior minimizes. All densities must be normalized.
pub fn divergence_objective(
    g: &GridDensity,
    p0: &GridDensity,
    p1: &GridDensity,
    xi: f64,
    alpha: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&xi) || !xi.is_finite() {
        return Err(PosteriorError::XiOutOfRange(xi));
    }
    let d0 = if xi == 1.0 {
        0.0
    } else {
        alpha_divergence(g, p0, alpha)?
    };
    let d1 = if xi == 0.0 {
        0.0
    } else {
        alpha_divergence(g, p1, alpha)?
    };
    Ok((1.0 - xi) * d0 + xi * d1)
}

/// Point at parameter `t` on the dual α-geodesic from `p` to `q`:
/// C(t) {(1-t) p^{(1+α)/2} + t q^{(1+α)/2}}^{2/(1+α)}.
///
/// Same functional form as Eq. (1) with weights (1-t, t); at t = ξ this
/// reproduces the generalized power posterior.
pub fn alpha_geodesic(p: &GridDensity, q: &GridDensity, t: f64, alpha: f64) -> Result<GridDensity> {
    let cfg = BorrowConfig::new(t, alpha)?;
    generalized_posterior_grid(p, q, &cfg)
}

fn ensure_same_grid(a: &GridDensity, b: &GridDensity) -> core::result::Result<(), DivergenceError> {
    if a.xs().len() != b.xs().len() || a.xs().iter().zip(b.xs()).any(|(x, y)| x != y) {
        return Err(DivergenceError::GridMismatch);
    }
    Ok(())
}
