//! Huber-contamination robustness: total-variation bounds between the
//! generalized power posterior built with a contamination-aware likelihood
//! and the one built with the clean likelihood, empirical TV simulations,
//! bound monotonicity scans over α, and the prior-sensitivity constant K(α).
//!
//! The bound is ½[(R_max/R_min)^{1/z} − 1] with
//! R(θ) = [(1−ξ)p0^z + ξp1^z] / [(1−ξ)(p0^F)^z + ξ(p1^F)^z].
//!
//! How the extrema of R are obtained depends on which dataset is
//! contaminated:
//!
//! * Historical contamination leaves the current-likelihood factor common to
//!   numerator and denominator, so R(θ) → 1 away from the data and its
//!   extrema are interior: they are found by a dense grid scan plus
//!   golden-section refinement.
//! * Current contamination makes the historical factor cancel instead, so
//!   R(θ) = (L/L^F)(θ)^z exactly. That ratio grows without bound as θ leaves
//!   the data region (every far-field point is rescued by the ε-branch of
//!   the mixture), so a sup over any fixed window is a window artifact and
//!   overflows f64 at modest Δ_H. Here the per-observation envelope
//!   m0 ≤ 1−ε+ε·φ(x;θ_H)/φ(x;θ) ≤ M0, with m0/M0 = 1−ε+ε·exp(∓Δ_H²/2σ²),
//!   gives the scale-free bound ½[(M0/m0)^n − 1], which is exactly
//!   α-free — the same cancellation that makes R a pure power of L/L^F.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use rand::Rng;
use thiserror::Error;

use crate::divergence::{linspace, tv_distance, GridDensity};
use crate::logsum::log_add_exp;
use crate::posterior::{generalized_posterior_grid, BorrowConfig, PosteriorError};
use crate::rng::stream_rng;

const LN_2PI: f64 = 1.837877066409345483560659472811;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RobustnessError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
    #[error("search interval [{lo}, {hi}] does not cover the required window or is too coarse")]
    SearchDomainTooNarrow { lo: f64, hi: f64 },
    #[error("R extremum within 2 cells of the search boundary at theta={0}")]
    ExtremumAtBoundary(f64),
    #[error("invalid sensitivity bounds: {0}")]
    InvalidBounds(&'static str),
    #[error(transparent)]
    Posterior(#[from] PosteriorError),
}

pub type Result<T> = core::result::Result<T, RobustnessError>;

/// Which dataset carries the Huber contamination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    CurrentContaminated,
    HistoricalContaminated,
}

/// Huber location-shift mixture (1−ε)N(θ0,σ²) + εN(θ_H,σ²) plus the trial
/// sizes of the two studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationScenario {
    pub theta0: f64,
    pub theta_h: f64,
    pub sigma2: f64,
    pub eps_h: f64,
    pub n: usize,
    pub n0: usize,
    pub direction: Direction,
}

impl ContaminationScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) {
            return Err(RobustnessError::InvalidScenario("sigma2 must be positive"));
        }
        if !(0.0..=0.5).contains(&self.eps_h) {
            return Err(RobustnessError::InvalidScenario("eps_h must lie in [0, 1/2]"));
        }
        if self.eps_h > 0.0 && self.theta_h == self.theta0 {
            return Err(RobustnessError::InvalidScenario(
                "theta_h must differ from theta0 when eps_h > 0",
            ));
        }
        Ok(())
    }

    /// Outlier shift Δ_H = |θ_H − θ0|.
    pub fn delta_h(&self) -> f64 {
        (self.theta_h - self.theta0).abs()
    }

    /// Default posterior/search window [min(θ0,θ_H)−6σ, max(θ0,θ_H)+6σ].
    pub fn default_window(&self) -> (f64, f64) {
        let s = self.sigma2.sqrt();
        (
            self.theta0.min(self.theta_h) - 6.0 * s,
            self.theta0.max(self.theta_h) + 6.0 * s,
        )
    }
}

/// Baseline prior N(μ0, τ0²) on the location parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    pub mu0: f64,
    pub tau02: f64,
}

impl GaussianPrior {
    pub fn log_density(&self, theta: f64) -> f64 {
        let d = theta - self.mu0;
        -0.5 * (LN_2PI + self.tau02.ln()) - d * d / (2.0 * self.tau02)
    }
}

fn normal_logpdf(x: f64, mu: f64, sigma2: f64) -> f64 {
    let d = x - mu;
    -0.5 * (LN_2PI + sigma2.ln()) - d * d / (2.0 * sigma2)
}

/// Mixture-model log-likelihood Σ ln[(1−ε)φ(x;θ,σ²) + εφ(x;θ_H,σ²)].
pub fn contaminated_log_likelihood(data: &[f64], theta: f64, scenario: &ContaminationScenario) -> f64 {
    let eps = scenario.eps_h;
    if eps == 0.0 {
        return clean_log_likelihood(data, theta, scenario.sigma2);
    }
    data.iter()
        .map(|&x| {
            log_add_exp(
                (1.0 - eps).ln() + normal_logpdf(x, theta, scenario.sigma2),
                eps.ln() + normal_logpdf(x, scenario.theta_h, scenario.sigma2),
            )
        })
        .sum()
}

/// Clean-model log-likelihood Σ ln φ(x;θ,σ²).
pub fn clean_log_likelihood(data: &[f64], theta: f64, sigma2: f64) -> f64 {
    data.iter().map(|&x| normal_logpdf(x, theta, sigma2)).sum()
}

/// The four pseudo-posterior log-densities of the contaminated/clean pair at
/// one θ, per the scenario direction. Order: (p0, p1, p0F, p1F).
fn log_pseudo_posteriors(
    theta: f64,
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    prior: &GaussianPrior,
) -> (f64, f64, f64, f64) {
    let lp = prior.log_density(theta);
    match scenario.direction {
        Direction::CurrentContaminated => {
            let l_mix = contaminated_log_likelihood(current, theta, scenario);
            let l_clean = clean_log_likelihood(current, theta, scenario.sigma2);
            let l0 = clean_log_likelihood(hist, theta, scenario.sigma2);
            (l_mix + lp, l_mix + l0 + lp, l_clean + lp, l_clean + l0 + lp)
        }
        Direction::HistoricalContaminated => {
            let l = clean_log_likelihood(current, theta, scenario.sigma2);
            let l0_mix = contaminated_log_likelihood(hist, theta, scenario);
            let l0_clean = clean_log_likelihood(hist, theta, scenario.sigma2);
            (l + lp, l + l0_mix + lp, l + lp, l + l0_clean + lp)
        }
    }
}

/// ln R(θ) via paired log-sum-exps of the four pseudo-posteriors.
fn log_ratio_r(
    theta: f64,
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
) -> f64 {
    let (p0, p1, p0f, p1f) = log_pseudo_posteriors(theta, current, hist, scenario, prior);
    let xi = cfg.xi();
    let z = cfg.z();
    if xi == 0.0 {
        return z * (p0 - p0f);
    }
    if xi == 1.0 {
        return z * (p1 - p1f);
    }
    let num = log_add_exp((1.0 - xi).ln() + z * p0, xi.ln() + z * p1);
    let den = log_add_exp((1.0 - xi).ln() + z * p0f, xi.ln() + z * p1f);
    num - den
}

/// The ratio R(θ) of Huber-contaminated to clean power-mean kernels.
pub fn ratio_r(
    theta: f64,
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
) -> Result<f64> {
    scenario.validate()?;
    if cfg.is_geometric_limit() {
        return Err(RobustnessError::Posterior(
            PosteriorError::GeometricLimitUnsupported,
        ));
    }
    Ok(log_ratio_r(theta, current, hist, scenario, cfg, prior).exp())
}

/// Cancellation-free ln R(θ) for historical contamination with ξ ∈ (0,1):
/// both sides share the current-likelihood factor, so
/// ln R = ln1p(odds·L0_mix^z) − ln1p(odds·L0_clean^z), odds = ξ/(1−ξ).
/// Accurate even when both correction terms are ~1e-300.
fn log_ratio_r_historical(
    theta: f64,
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
) -> f64 {
    let z = cfg.z();
    let ln_odds = cfg.xi().ln() - (1.0 - cfg.xi()).ln();
    let t_mix = ln_odds + z * contaminated_log_likelihood(hist, theta, scenario);
    let t_clean = ln_odds + z * clean_log_likelihood(hist, theta, scenario.sigma2);
    let soft = |t: f64| {
        if t > 30.0 {
            t + (-t).exp().ln_1p()
        } else {
            t.exp().ln_1p()
        }
    };
    soft(t_mix) - soft(t_clean)
}

/// Search window for the R-extremum scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchWindow {
    pub lo: f64,
    pub hi: f64,
    pub grid_n: usize,
}

impl SearchWindow {
    pub fn default_for(scenario: &ContaminationScenario) -> Self {
        let (lo, hi) = scenario.default_window();
        Self { lo, hi, grid_n: 4001 }
    }

    fn validate(&self, scenario: &ContaminationScenario) -> Result<()> {
        let (lo_req, hi_req) = scenario.default_window();
        if self.lo > lo_req + 1e-12 || self.hi < hi_req - 1e-12 || self.grid_n < 2001 {
            return Err(RobustnessError::SearchDomainTooNarrow {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(())
    }
}

/// ln R_max and ln R_min over the window, by dense scan plus golden-section
/// refinement. Errors if an extremum sits within 2 cells of a boundary.
fn scan_log_ratio_extrema(
    window: &SearchWindow,
    f: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let xs = linspace(window.lo, window.hi, window.grid_n);
    let vals: Vec<f64> = xs.iter().map(|&t| f(t)).collect();
    let (mut imax, mut imin) = (0usize, 0usize);
    for (i, &v) in vals.iter().enumerate() {
        if v > vals[imax] {
            imax = i;
        }
        if v < vals[imin] {
            imin = i;
        }
    }
    let n = xs.len();
    for &i in &[imax, imin] {
        if i < 2 || i >= n - 2 {
            return Err(RobustnessError::ExtremumAtBoundary(xs[i]));
        }
    }
    let max = golden_section_max(xs[imax - 1], xs[imax + 1], &f);
    let min = -golden_section_max(xs[imin - 1], xs[imin + 1], &|t| -f(t));
    Ok((max.max(vals[imax]), min.min(vals[imin])))
}

fn golden_section_max(mut a: f64, mut b: f64, f: &impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Per-observation mixture/clean likelihood-ratio envelope
/// [m0, M0] = 1−ε+ε·exp(∓Δ_H²/2σ²).
fn factor_envelope(scenario: &ContaminationScenario) -> (f64, f64) {
    let eps = scenario.eps_h;
    let d2 = scenario.delta_h() * scenario.delta_h() / (2.0 * scenario.sigma2);
    (1.0 - eps + eps * (-d2).exp(), 1.0 - eps + eps * d2.exp())
}

/// Extremes (ln R_min, ln R_max) per scenario direction and ξ; see the
/// module docs for why current contamination uses the factor envelope.
fn bound_log_extrema(
    _current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    _prior: &GaussianPrior,
    search: &SearchWindow,
) -> Result<(f64, f64)> {
    scenario.validate()?;
    search.validate(scenario)?;
    if cfg.is_geometric_limit() {
        return Err(RobustnessError::Posterior(
            PosteriorError::GeometricLimitUnsupported,
        ));
    }
    if scenario.eps_h == 0.0 {
        return Ok((0.0, 0.0));
    }
    let z = cfg.z();
    let xi = cfg.xi();
    let (m0, big_m0) = factor_envelope(scenario);
    match scenario.direction {
        // R = (L/L^F)^z exactly; envelope over the n current observations.
        Direction::CurrentContaminated => Ok((
            z * scenario.n as f64 * m0.ln(),
            z * scenario.n as f64 * big_m0.ln(),
        )),
        Direction::HistoricalContaminated => {
            if xi == 0.0 {
                return Ok((0.0, 0.0));
            }
            if xi == 1.0 {
                // R = (L0/L0^F)^z; envelope over the n0 historical points.
                return Ok((
                    z * scenario.n0 as f64 * m0.ln(),
                    z * scenario.n0 as f64 * big_m0.ln(),
                ));
            }
            let f = |theta: f64| log_ratio_r_historical(theta, hist, scenario, cfg);
            let (max, min) = scan_log_ratio_extrema(search, f)?;
            Ok((min, max))
        }
    }
}

/// Theorem-style TV bound ½[(R_max/R_min)^{1/z} − 1].
pub fn tv_bound(
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
    search: &SearchWindow,
) -> Result<f64> {
    let (ln_min, ln_max) = ordered(bound_log_extrema(
        current, hist, scenario, cfg, prior, search,
    )?);
    Ok(0.5 * ((ln_max - ln_min) / cfg.z()).exp_m1())
}

/// Max-form variant ½·max{R_max^{1/z} − 1, 1 − R_min^{1/z}}; never exceeds
/// [`tv_bound`].
pub fn tv_bound_maxform(
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
    search: &SearchWindow,
) -> Result<f64> {
    let (ln_min, ln_max) = ordered(bound_log_extrema(
        current, hist, scenario, cfg, prior, search,
    )?);
    let up = (ln_max / cfg.z()).exp_m1();
    let down = -(ln_min / cfg.z()).exp_m1();
    Ok(0.5 * up.max(down).max(0.0))
}

fn ordered(pair: (f64, f64)) -> (f64, f64) {
    let (a, b) = pair;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Draws one (current, historical) dataset pair for the scenario.
pub fn sample_scenario<R: Rng + ?Sized>(
    scenario: &ContaminationScenario,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let sigma = scenario.sigma2.sqrt();
    let mut draw = |contaminated: bool| {
        let mu = if contaminated && rng.random::<f64>() < scenario.eps_h {
            scenario.theta_h
        } else {
            scenario.theta0
        };
        mu + sigma * standard_normal(rng)
    };
    let current: Vec<f64> = (0..scenario.n)
        .map(|_| draw(scenario.direction == Direction::CurrentContaminated))
        .collect();
    let hist: Vec<f64> = (0..scenario.n0)
        .map(|_| draw(scenario.direction == Direction::HistoricalContaminated))
        .collect();
    (current, hist)
}

pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rand_distr::StandardNormal.sample_from(rng)
}

trait SampleFrom {
    fn sample_from<R: Rng + ?Sized>(self, rng: &mut R) -> f64;
}

impl SampleFrom for rand_distr::StandardNormal {
    fn sample_from<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        use rand_distr::Distribution;
        self.sample(rng)
    }
}

/// Builds the Theorem-2 posterior pair on a shared grid for one dataset and
/// returns their total-variation distance.
pub fn posterior_pair_tv(
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
    grid_n: usize,
) -> Result<f64> {
    let (lo, hi) = scenario.default_window();
    let xs = linspace(lo, hi, grid_n);
    let mut log_p0 = Vec::with_capacity(grid_n);
    let mut log_p1 = Vec::with_capacity(grid_n);
    let mut log_p0f = Vec::with_capacity(grid_n);
    let mut log_p1f = Vec::with_capacity(grid_n);
    for &t in &xs {
        let (p0, p1, p0f, p1f) = log_pseudo_posteriors(t, current, hist, scenario, prior);
        log_p0.push(p0);
        log_p1.push(p1);
        log_p0f.push(p0f);
        log_p1f.push(p1f);
    }
    let make = |a: Vec<f64>| GridDensity::new(xs.clone(), a).map_err(PosteriorError::from);
    let g_contaminated =
        generalized_posterior_grid(&make(log_p0)?, &make(log_p1)?, cfg).map_err(RobustnessError::from)?;
    let g_clean =
        generalized_posterior_grid(&make(log_p0f)?, &make(log_p1f)?, cfg).map_err(RobustnessError::from)?;
    Ok(tv_distance(&g_contaminated, &g_clean).map_err(PosteriorError::from)?)
}

/// Mean and sample sd of the TV distance over seeded trials; trial `i` uses
/// the RNG stream (seed, i), so results are independent of evaluation order.
pub fn empirical_tv(
    scenario: &ContaminationScenario,
    cfg: &BorrowConfig,
    prior: &GaussianPrior,
    seed: u64,
    trials: usize,
) -> Result<(f64, f64)> {
    scenario.validate()?;
    let tvs: Vec<f64> = (0..trials)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let (current, hist) = sample_scenario(scenario, &mut rng);
            posterior_pair_tv(&current, &hist, scenario, cfg, prior, 4001)
        })
        .collect::<Result<_>>()?;
    Ok(mean_sd(&tvs))
}

pub(crate) fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Monotonicity verdict with a −1e−9 slack per step; an all-flat sequence
/// counts as Increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NonMonotone,
}

pub fn classify_monotonicity(values: &[f64]) -> Monotonicity {
    const TOL: f64 = 1e-9;
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d > -TOL) {
        Monotonicity::Increasing
    } else if diffs.iter().all(|&d| d < TOL) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::NonMonotone
    }
}

/// TV bounds over an increasing α grid plus the monotonicity verdict.
pub fn bound_monotonicity_scan(
    current: &[f64],
    hist: &[f64],
    scenario: &ContaminationScenario,
    xi: f64,
    prior: &GaussianPrior,
    search: &SearchWindow,
    alphas: &[f64],
) -> Result<(Vec<f64>, Monotonicity)> {
    if alphas.len() < 5 || alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RobustnessError::InvalidScenario(
            "need at least 5 strictly increasing alphas",
        ));
    }
    let bounds: Vec<f64> = alphas
        .iter()
        .map(|&a| {
            let cfg = BorrowConfig::new(xi, a)?;
            tv_bound(current, hist, scenario, &cfg, prior, search)
        })
        .collect::<Result<_>>()?;
    let verdict = classify_monotonicity(&bounds);
    Ok((bounds, verdict))
}

/// Likelihood and prior envelopes 0 < m ≤ 1 ≤ M entering K(α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityBounds {
    pub lik_min: f64,
    pub lik_max: f64,
    pub prior_min: f64,
    pub prior_max: f64,
}

impl SensitivityBounds {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.lik_min
            && self.lik_min <= 1.0
            && 1.0 <= self.lik_max
            && 0.0 < self.prior_min
            && self.prior_min <= 1.0
            && 1.0 <= self.prior_max;
        if ok {
            Ok(())
        } else {
            Err(RobustnessError::InvalidBounds(
                "need 0 < m ≤ 1 ≤ M for both likelihood and prior envelopes",
            ))
        }
    }
}

/// Posterior normalizers C, C̃ and the density envelope M_p, supplied by the
/// caller (computed numerically from grids where needed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityNormalizers {
    pub c: f64,
    pub c_tilde: f64,
    pub m_p: f64,
}

/// Prior-sensitivity constant K(α) = (C1·C2·M_L/C)·(1 + M_F/C̃) with
///
/// * M_H = M_L^z M_π^z ((1−ξ) + ξ M_L^z), m_H likewise with minima,
/// * C2  = M_H^{1/z−1} for z ≤ 1, m_H^{1/z−1} for z > 1,
/// * C1  = (1−ξ) M_p^{z−1} + ξ (M_p M_L)^{z−1} M_L,
/// * M_F = M_p ((1−ξ) + ξ M_L^z)^{1/z}.
///
/// Minimized at α = 1 (z = 1) for valid envelopes.
pub fn prior_sensitivity_k(
    bounds: &SensitivityBounds,
    xi: f64,
    alpha: f64,
    normalizers: &SensitivityNormalizers,
) -> Result<f64> {
    bounds.validate()?;
    if !(0.0..=1.0).contains(&xi) {
        return Err(RobustnessError::InvalidBounds("xi must lie in [0,1]"));
    }
    if !(alpha > -1.0) || !(normalizers.c > 0.0) || !(normalizers.c_tilde > 0.0) {
        return Err(RobustnessError::InvalidBounds(
            "alpha must exceed -1 and normalizers must be positive",
        ));
    }
    let z = (1.0 + alpha) / 2.0;
    let ml = bounds.lik_max;
    let bracket_max = (1.0 - xi) + xi * ml.powf(z);
    let bracket_min = (1.0 - xi) + xi * bounds.lik_min.powf(z);
    let m_h_max = ml.powf(z) * bounds.prior_max.powf(z) * bracket_max;
    let m_h_min = bounds.lik_min.powf(z) * bounds.prior_min.powf(z) * bracket_min;
    let c2 = if z <= 1.0 {
        m_h_max.powf(1.0 / z - 1.0)
    } else {
        m_h_min.powf(1.0 / z - 1.0)
    };
    let mp = normalizers.m_p;
    let c1 = (1.0 - xi) * mp.powf(z - 1.0) + xi * (mp * ml).powf(z - 1.0) * ml;
    let m_f = mp * bracket_max.powf(1.0 / z);
    Ok((c1 * c2 * ml / normalizers.c) * (1.0 + m_f / normalizers.c_tilde))
}
