//! How α controls unimodality versus multimodality of the generalized power
//! posterior: mode detection on grid densities, the closed-form derivative
//! of the log power mean, and a bisection search for the critical α where
//! the mode count changes.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use thiserror::Error;

use crate::divergence::GridDensity;
use crate::posterior::{
    generalized_posterior_grid, power_mean_log, BorrowConfig, PosteriorError,
};

/// Default relative log-prominence filter; suppresses quadrature ripple
/// without hiding genuine secondary modes.
pub const DEFAULT_MODE_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("density is numerically constant; no mode structure")]
    DegenerateDensity,
    #[error("density value must be strictly positive, got {0}")]
    NonPositiveDensity(f64),
    #[error("rel_tol must lie in (0, 0.1], got {0}")]
    BadTolerance(f64),
    #[error("mode counts agree at both alpha endpoints; nothing to bisect")]
    NoTransition,
    #[error("alpha_lo must be below alpha_hi")]
    BadAlphaOrder,
    #[error(transparent)]
    Posterior(#[from] PosteriorError),
}

pub type Result<T> = core::result::Result<T, ShapeError>;

/// Detected modes of a grid density. Boundary modes (one-sided maxima at
/// the grid edge, as with a Beta density unbounded at 1) are counted and
/// flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub mode_locations: Vec<f64>,
    pub is_boundary: Vec<bool>,
    pub mode_count: usize,
}

/// (1/z) ln{(1−ξ)p0^z + ξp1^z} from the log inputs; the same power mean the
/// posterior is built from.
pub fn log_mixture_lz(log_p0: f64, log_p1: f64, xi: f64, z: f64) -> f64 {
    power_mean_log(log_p0, log_p1, xi, z, false)
}

/// Closed-form derivative of the log power mean:
/// L'_z = p0'/p0 + ξ R^{z−1} R' / ((1−ξ) + ξ R^z), R = p1/p0.
///
/// Evaluated in the logistic form (1−w)·p0'/p0 + w·p1'/p1 with
/// w = sigmoid(ln(ξ/(1−ξ)) + z ln R), which keeps R^z out of the way for
/// extreme density ratios.
pub fn lz_derivative(
    p0_val: f64,
    dp0_val: f64,
    p1_val: f64,
    dp1_val: f64,
    xi: f64,
    z: f64,
) -> Result<f64> {
    if !(p0_val > 0.0) {
        return Err(ShapeError::NonPositiveDensity(p0_val));
    }
    if !(p1_val > 0.0) {
        return Err(ShapeError::NonPositiveDensity(p1_val));
    }
    if xi == 0.0 {
        return Ok(dp0_val / p0_val);
    }
    if xi == 1.0 {
        return Ok(dp1_val / p1_val);
    }
    let logit = (xi / (1.0 - xi)).ln() + z * (p1_val.ln() - p0_val.ln());
    let w = crate::mcmc::sigmoid(logit);
    Ok((1.0 - w) * dp0_val / p0_val + w * dp1_val / p1_val)
}

/// Finds modes of a grid density in log space.
///
/// An interior run of equal values is a mode candidate when it exceeds both
/// neighbors; it is kept when it rises above the higher of its two adjacent
/// valley floors by `rel_tol · (max − min)` of the log values. The global
/// maximum is always kept. Grid endpoints are excluded from the interior
/// rule but reported as boundary modes when they dominate their neighbor by
/// the same margin.
pub fn count_modes(g: &GridDensity, rel_tol: f64) -> Result<ModeReport> {
    if !(rel_tol > 0.0 && rel_tol <= 0.1) {
        return Err(ShapeError::BadTolerance(rel_tol));
    }
    let xs = g.xs();
    let logs = g.log_vals();
    let finite_max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let finite_min = logs
        .iter()
        .cloned()
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min);
    if !finite_max.is_finite() || finite_max - finite_min < 1e-12 {
        return Err(ShapeError::DegenerateDensity);
    }
    let threshold = rel_tol * (finite_max - finite_min);

    // Collapse plateaus into runs of strictly distinct values.
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    let mut start = 0usize;
    for i in 1..=logs.len() {
        if i == logs.len() || logs[i] != logs[start] {
            runs.push((start, i - 1, logs[start]));
            start = i;
        }
    }

    let mut locations = Vec::new();
    let mut boundary_flags = Vec::new();
    let mut global_kept = false;
    let run_mid = |r: &(usize, usize, f64)| (xs[r.0] + xs[r.1]) / 2.0;

    for (ri, run) in runs.iter().enumerate() {
        let left = ri.checked_sub(1).map(|i| runs[i].2);
        let right = runs.get(ri + 1).map(|r| r.2);
        let (is_candidate, is_boundary) = match (left, right) {
            (Some(l), Some(r)) => (run.2 > l && run.2 > r, false),
            (None, Some(r)) => (run.2 > r, true),
            (Some(l), None) => (run.2 > l, true),
            (None, None) => (false, false),
        };
        if !is_candidate {
            continue;
        }
        // Valley floor on each side: lowest value before the next higher run.
        let valley = |mut idx: isize, step: isize| -> f64 {
            let mut floor = run.2;
            while idx >= 0 && (idx as usize) < runs.len() {
                let v = runs[idx as usize].2;
                if v > run.2 {
                    break;
                }
                if v < floor {
                    floor = v;
                }
                idx += step;
            }
            floor
        };
        let left_floor = valley(ri as isize - 1, -1);
        let right_floor = valley(ri as isize + 1, 1);
        let higher_floor = if is_boundary {
            // one-sided comparison at the edge
            if left.is_none() {
                right_floor
            } else {
                left_floor
            }
        } else {
            left_floor.max(right_floor)
        };
        let prominent = run.2 - higher_floor >= threshold;
        let is_global = run.2 == finite_max;
        if prominent || is_global {
            locations.push(run_mid(run));
            boundary_flags.push(is_boundary);
            if is_global {
                global_kept = true;
            }
        }
    }
    debug_assert!(global_kept);
    Ok(ModeReport {
        mode_count: locations.len(),
        mode_locations: locations,
        is_boundary: boundary_flags,
    })
}

/// Mode count of the generalized posterior built from `p0`, `p1` at (ξ, α).
pub fn posterior_mode_count(
    p0: &GridDensity,
    p1: &GridDensity,
    xi: f64,
    alpha: f64,
    rel_tol: f64,
) -> Result<usize> {
    let cfg = BorrowConfig::new(xi, alpha)?;
    let g = generalized_posterior_grid(p0, p1, &cfg)?;
    Ok(count_modes(&g, rel_tol)?.mode_count)
}

/// Bisection for the critical α at which the posterior mode count changes.
///
/// Mode counts at the two endpoints must differ; the returned α is accurate
/// to `tol`.
pub fn alpha_mode_transition(
    p0: &GridDensity,
    p1: &GridDensity,
    xi: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    tol: f64,
) -> Result<f64> {
    if alpha_lo >= alpha_hi {
        return Err(ShapeError::BadAlphaOrder);
    }
    let rel_tol = DEFAULT_MODE_REL_TOL;
    let count_lo = posterior_mode_count(p0, p1, xi, alpha_lo, rel_tol)?;
    let count_hi = posterior_mode_count(p0, p1, xi, alpha_hi, rel_tol)?;
    if count_lo == count_hi {
        return Err(ShapeError::NoTransition);
    }
    let (mut lo, mut hi) = (alpha_lo, alpha_hi);
    while hi - lo > tol {
        let mid = (lo + hi) / 2.0;
        if posterior_mode_count(p0, p1, xi, mid, rel_tol)? == count_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / 2.0)
}

/// Checks the single-crossing dominance pattern between the component
/// modes: p0 above p1 left of one crossing point θ* in (m0, m1), p1 above
/// p0 right of it. Returns θ* when the pattern holds.
pub fn swapping_dominance(p0: &GridDensity, p1: &GridDensity) -> Option<f64> {
    let xs = p0.xs();
    let l0 = p0.log_vals();
    let l1 = p1.log_vals();
    let argmax = |ls: &[f64]| -> usize {
        let mut best = 0;
        for (i, &v) in ls.iter().enumerate() {
            if v > ls[best] {
                best = i;
            }
        }
        best
    };
    let (m0, m1) = (argmax(l0), argmax(l1));
    let (lo, hi) = if m0 < m1 { (m0, m1) } else { (m1, m0) };
    if lo == hi {
        return None;
    }
    // Orient so that the component peaking on the left is "first".
    let (first, second): (&[f64], &[f64]) = if m0 < m1 { (l0, l1) } else { (l1, l0) };
    let mut crossing = None;
    for i in lo..hi {
        let before = first[i] - second[i];
        let after = first[i + 1] - second[i + 1];
        if before > 0.0 && after <= 0.0 {
            if crossing.is_some() {
                return None; // more than one crossing
            }
            crossing = Some((xs[i] + xs[i + 1]) / 2.0);
        } else if before < 0.0 && after > 0.0 {
            return None; // crosses back
        }
    }
    crossing
}

/// One-dimensional density families used in the shape experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density1D {
    /// Normal with mean and standard deviation.
    Normal { mu: f64, sd: f64 },
    /// Beta(a, b) on the open unit interval.
    Beta { a: f64, b: f64 },
    /// log of a Gamma(c, 1) variate: f(x) = exp(c·x − e^x)/Γ(c) on ℝ.
    LogGamma { c: f64 },
}

impl Density1D {
    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            Density1D::Normal { mu, sd } => {
                let z = (x - mu) / sd;
                -0.5 * z * z - (sd * (2.0 * core::f64::consts::PI).sqrt()).ln()
            }
            Density1D::Beta { a, b } => {
                if x <= 0.0 || x >= 1.0 {
                    return f64::NEG_INFINITY;
                }
                let ln_beta = libm::lgamma(*a) + libm::lgamma(*b) - libm::lgamma(a + b);
                (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_beta
            }
            Density1D::LogGamma { c } => c * x - x.exp() - libm::lgamma(*c),
        }
    }

    /// A support window that carries all but a negligible tail mass.
    pub fn default_window(&self) -> (f64, f64) {
        match self {
            Density1D::Normal { mu, sd } => (mu - 8.0 * sd, mu + 8.0 * sd),
            Density1D::Beta { .. } => (1e-6, 1.0 - 1e-6),
            Density1D::LogGamma { c } => {
                // mode at ln(c); heavy left tail, doubly exponential right
                let m = c.ln();
                (m - 18.0, m + 3.5)
            }
        }
    }

    /// Normalized grid density over the joint window of `self` and `other`.
    pub fn grid_pair(&self, other: &Density1D, n: usize) -> Result<(GridDensity, GridDensity)> {
        let (lo_a, hi_a) = self.default_window();
        let (lo_b, hi_b) = other.default_window();
        let (lo, hi) = (lo_a.min(lo_b), hi_a.max(hi_b));
        let make = |d: &Density1D| -> Result<GridDensity> {
            Ok(GridDensity::from_fn(lo, hi, n, |x| d.log_pdf(x))
                .map_err(PosteriorError::from)?
                .normalize()
                .map_err(PosteriorError::from)?)
        };
        Ok((make(self)?, make(other)?))
    }
}
