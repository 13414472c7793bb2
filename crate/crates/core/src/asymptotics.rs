//! Empirical checks of posterior consistency and the leading asymptotic
//! variance term 1/(n·I + ξ·n0·I0).
//!
//! Sweeps simulate data from the true model, build the generalized power
//! posterior on a grid from the likelihood × prior pseudo-posteriors (the
//! same scale convention as everywhere else in this crate), and integrate
//! grid moments. Historical sample size is tied to the current one
//! (n0 = n) to match the joint n, n0 → ∞ regime.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::divergence::{linspace, GridDensity};
use crate::models::{gaussian_log_p0, gaussian_log_p1, GaussianBorrowModel};
use crate::posterior::{generalized_posterior_grid, BorrowConfig, PosteriorError};
use crate::rng::stream_rng;
use crate::robustness::standard_normal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error(transparent)]
    Posterior(#[from] PosteriorError),
}

pub type Result<T> = core::result::Result<T, AsymptoticsError>;

/// Data-generating families with closed-form Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Gaussian { sigma2: f64 },
    Bernoulli,
}

impl Family {
    /// Fisher information at θ0: 1/σ² for the Gaussian location model,
    /// 1/(θ0(1−θ0)) for Bernoulli.
    pub fn fisher(&self, theta0: f64) -> Result<f64> {
        match self {
            Family::Gaussian { sigma2 } => {
                if !(*sigma2 > 0.0) {
                    return Err(AsymptoticsError::InvalidInput("sigma2 must be positive"));
                }
                Ok(1.0 / sigma2)
            }
            Family::Bernoulli => {
                if !(theta0 > 0.0 && theta0 < 1.0) {
                    return Err(AsymptoticsError::InvalidInput(
                        "Bernoulli theta0 must lie in (0,1)",
                    ));
                }
                Ok(1.0 / (theta0 * (1.0 - theta0)))
            }
        }
    }
}

/// Posterior mass outside {|θ−θ0| > ε}, per sample size, averaged over
/// replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencySweepResult {
    pub sample_sizes: Vec<usize>,
    pub outside_mass: Vec<f64>,
    pub outside_mass_sd: Vec<f64>,
    pub epsilon: f64,
    pub replicates: usize,
}

/// Leading-order posterior variance (1/n)[I(θ0) + ξ(n0/n)I0(θ0)]^{-1} for
/// the scalar families, with I0 = I (same model for both studies).
pub fn leading_variance(family: Family, theta0: f64, n: usize, n0: usize, xi: f64) -> Result<f64> {
    if n == 0 || n0 == 0 {
        return Err(AsymptoticsError::InvalidInput("n and n0 must be at least 1"));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(AsymptoticsError::InvalidInput("xi must lie in [0,1]"));
    }
    let info = family.fisher(theta0)?;
    Ok(1.0 / (n as f64 * info + xi * n0 as f64 * info))
}

/// Simulates the posterior for one dataset and returns it as a grid density.
fn simulate_posterior<R: Rng + ?Sized>(
    family: Family,
    theta0: f64,
    cfg: &BorrowConfig,
    n: usize,
    n0: usize,
    rng: &mut R,
) -> Result<GridDensity> {
    match family {
        Family::Gaussian { sigma2 } => {
            let sigma = sigma2.sqrt();
            let draw = |rng: &mut R| theta0 + sigma * standard_normal(rng);
            let xs: Vec<f64> = (0..n).map(|_| draw(rng)).collect();
            let ys: Vec<f64> = (0..n0).map(|_| draw(rng)).collect();
            let model = GaussianBorrowModel::from_data(sigma2, 0.0, 100.0, &xs, &ys)
                .map_err(|_| AsymptoticsError::InvalidInput("bad gaussian model"))?;
            let span = 3.0 * sigma;
            let grid = linspace(theta0 - span, theta0 + span, 4001);
            let p0 = GridDensity::new(
                grid.clone(),
                grid.iter().map(|&t| gaussian_log_p0(&model, t)).collect(),
            )
            .map_err(PosteriorError::from)?;
            let p1 = GridDensity::new(
                grid.clone(),
                grid.iter().map(|&t| gaussian_log_p1(&model, t)).collect(),
            )
            .map_err(PosteriorError::from)?;
            Ok(generalized_posterior_grid(&p0, &p1, cfg)?)
        }
        Family::Bernoulli => {
            if !(theta0 > 0.0 && theta0 < 1.0) {
                return Err(AsymptoticsError::InvalidInput(
                    "Bernoulli theta0 must lie in (0,1)",
                ));
            }
            let s_x = (0..n).filter(|_| rng.random::<f64>() < theta0).count() as f64;
            let s_y = (0..n0).filter(|_| rng.random::<f64>() < theta0).count() as f64;
            let grid = linspace(1e-9, 1.0 - 1e-9, 4001);
            // Uniform prior; likelihood exponents from the success counts.
            let lp0: Vec<f64> = grid
                .iter()
                .map(|&t| s_x * t.ln() + (n as f64 - s_x) * (1.0 - t).ln())
                .collect();
            let lp1: Vec<f64> = grid
                .iter()
                .zip(&lp0)
                .map(|(&t, &l)| l + s_y * t.ln() + (n0 as f64 - s_y) * (1.0 - t).ln())
                .collect();
            let p0 = GridDensity::new(grid.clone(), lp0).map_err(PosteriorError::from)?;
            let p1 = GridDensity::new(grid, lp1).map_err(PosteriorError::from)?;
            Ok(generalized_posterior_grid(&p0, &p1, cfg)?)
        }
    }
}

/// Probability mass of a normalized grid density on [lo, hi], with linear
/// interpolation at the interval endpoints.
pub fn mass_within(g: &GridDensity, lo: f64, hi: f64) -> f64 {
    let xs = g.xs();
    let vals = g.values();
    let a = lo.max(xs[0]);
    let b = hi.min(xs[xs.len() - 1]);
    if a >= b {
        return 0.0;
    }
    let value_at = |x: f64| -> f64 {
        let j = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[j - 1], xs[j]);
        let w = (x - x0) / (x1 - x0);
        vals[j - 1] * (1.0 - w) + vals[j] * w
    };
    let mut total = 0.0;
    let mut prev_x = a;
    let mut prev_v = value_at(a);
    for (&x, &v) in xs.iter().zip(&vals) {
        if x <= a {
            continue;
        }
        if x >= b {
            break;
        }
        total += (x - prev_x) * (prev_v + v) / 2.0;
        prev_x = x;
        prev_v = v;
    }
    total += (b - prev_x) * (prev_v + value_at(b)) / 2.0;
    total.clamp(0.0, 1.0)
}

/// Posterior mass outside the ε-ball around θ0, averaged over seeded
/// replicates for each sample size (with n0 = n).
pub fn consistency_sweep(
    family: Family,
    theta0: f64,
    cfg: &BorrowConfig,
    epsilon: f64,
    sizes: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<ConsistencySweepResult> {
    if !(epsilon > 0.0) {
        return Err(AsymptoticsError::InvalidInput("epsilon must be positive"));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AsymptoticsError::InvalidInput("sizes must be increasing"));
    }
    if replicates == 0 {
        return Err(AsymptoticsError::InvalidInput("need at least one replicate"));
    }
    let mut outside_mass = Vec::with_capacity(sizes.len());
    let mut outside_sd = Vec::with_capacity(sizes.len());
    for (si, &n) in sizes.iter().enumerate() {
        let masses: Vec<f64> = (0..replicates)
            .map(|r| {
                let mut rng = stream_rng(seed, (si * replicates + r) as u64);
                let g = simulate_posterior(family, theta0, cfg, n, n, &mut rng)?;
                Ok(1.0 - mass_within(&g, theta0 - epsilon, theta0 + epsilon))
            })
            .collect::<Result<_>>()?;
        let (mean, sd) = crate::robustness::mean_sd(&masses);
        outside_mass.push(mean.clamp(0.0, 1.0));
        outside_sd.push(sd);
    }
    Ok(ConsistencySweepResult {
        sample_sizes: sizes.to_vec(),
        outside_mass,
        outside_mass_sd: outside_sd,
        epsilon,
        replicates,
    })
}

/// Grid-moment posterior variances over seeded replicates at fixed (n, n0).
pub fn posterior_variance_replicates(
    family: Family,
    theta0: f64,
    cfg: &BorrowConfig,
    n: usize,
    n0: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if replicates == 0 {
        return Err(AsymptoticsError::InvalidInput("need at least one replicate"));
    }
    (0..replicates)
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let g = simulate_posterior(family, theta0, cfg, n, n0, &mut rng)?;
            Ok(g.moments().1)
        })
        .collect()
}
