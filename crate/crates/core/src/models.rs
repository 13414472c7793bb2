//! Closed-form generalized power posteriors for three conjugate-style
//! families: Gaussian with known variance, Beta–Bernoulli, and
//! Dirichlet–Multinomial. These double as oracles for the generic grid
//! engine in [`crate::posterior`].
//!
//! Each model stores sufficient statistics rather than raw data; the
//! densities depend on the data only through them.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use thiserror::Error;

use crate::logsum::log_add_exp;
use crate::posterior::BorrowConfig;

const LN_2PI: f64 = 1.837877066409345483560659472811;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("theta must lie strictly inside (0,1), got {0}")]
    DomainError(f64),
    #[error("theta must be a strictly positive simplex point summing to 1 (deviation {0})")]
    SimplexViolation(f64),
    #[error("only ternary (k=3) simplex grids are supported, got k={0}")]
    UnsupportedDimension(usize),
    #[error("the closed forms are undefined in the geometric limit z≈0 with xi inside (0,1)")]
    GeometricLimitUnsupported,
}

pub type Result<T> = core::result::Result<T, ModelError>;

/// Gaussian mean inference with known variance σ², prior N(μ0, τ0²), and
/// sufficient statistics of the current (X) and historical (Y) samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBorrowModel {
    pub sigma2: f64,
    pub mu0: f64,
    pub tau02: f64,
    pub n: usize,
    pub sum_x: f64,
    pub sum_x2: f64,
    pub n0: usize,
    pub sum_y: f64,
    pub sum_y2: f64,
}

impl GaussianBorrowModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) {
            return Err(ModelError::InvalidParameter("sigma2 must be positive"));
        }
        if !(self.tau02 > 0.0) {
            return Err(ModelError::InvalidParameter("tau02 must be positive"));
        }
        Ok(())
    }

    /// Convenience constructor from raw samples.
    pub fn from_data(sigma2: f64, mu0: f64, tau02: f64, xs: &[f64], ys: &[f64]) -> Result<Self> {
        let m = Self {
            sigma2,
            mu0,
            tau02,
            n: xs.len(),
            sum_x: xs.iter().sum(),
            sum_x2: xs.iter().map(|x| x * x).sum(),
            n0: ys.len(),
            sum_y: ys.iter().sum(),
            sum_y2: ys.iter().map(|y| y * y).sum(),
        };
        m.validate()?;
        Ok(m)
    }

    fn log_prior(&self, theta: f64) -> f64 {
        let d = theta - self.mu0;
        -0.5 * (LN_2PI + self.tau02.ln()) - d * d / (2.0 * self.tau02)
    }

    fn log_lik_current(&self, theta: f64) -> f64 {
        let n = self.n as f64;
        -0.5 * n * (LN_2PI + self.sigma2.ln())
            - (self.sum_x2 - 2.0 * theta * self.sum_x + n * theta * theta) / (2.0 * self.sigma2)
    }

    fn log_lik_hist(&self, theta: f64) -> f64 {
        let n0 = self.n0 as f64;
        -0.5 * n0 * (LN_2PI + self.sigma2.ln())
            - (self.sum_y2 - 2.0 * theta * self.sum_y + n0 * theta * theta) / (2.0 * self.sigma2)
    }
}

/// log p0(θ) = log L(θ|D) + log π0(θ), with all constants.
pub fn gaussian_log_p0(model: &GaussianBorrowModel, theta: f64) -> f64 {
    model.log_lik_current(theta) + model.log_prior(theta)
}

/// log p1(θ) = log L(θ|D) + log L(θ|D0) + log π0(θ), with all constants.
pub fn gaussian_log_p1(model: &GaussianBorrowModel, theta: f64) -> f64 {
    gaussian_log_p0(model, theta) + model.log_lik_hist(theta)
}

/// Closed-form unnormalized log-density of the generalized power posterior,
/// assembled from the quadratic exponent and the borrowing bracket
/// {1 + C exp(z S_Y θ/σ² − z n0 θ²/2σ²)}^{1/z} with the constant C folded
/// into a single log term.
///
/// Agrees with the generic engine up to a θ-independent constant.
pub fn gaussian_generalized_logdensity(
    model: &GaussianBorrowModel,
    cfg: &BorrowConfig,
    theta: f64,
) -> Result<f64> {
    let xi = cfg.xi();
    let z = cfg.z();
    let s2 = model.sigma2;
    let quad = -0.5 * (model.n as f64 / s2 + 1.0 / model.tau02) * theta * theta
        + (model.sum_x / s2 + model.mu0 / model.tau02) * theta;
    if xi == 0.0 {
        return Ok(quad);
    }
    let hist_exponent = model.sum_y * theta / s2 - model.n0 as f64 * theta * theta / (2.0 * s2);
    if xi == 1.0 {
        return Ok(quad + hist_exponent);
    }
    if cfg.is_geometric_limit() {
        return Err(ModelError::GeometricLimitUnsupported);
    }
    // ln C = ln(Q1/Q0) − z Σ Y_j² / 2σ², Q1/Q0 = ξ/(1−ξ) · (2πσ²)^{−n0 z/2}
    let ln_c = xi.ln() - (1.0 - xi).ln()
        - 0.5 * model.n0 as f64 * z * (LN_2PI + s2.ln())
        - z * model.sum_y2 / (2.0 * s2);
    Ok(quad + log_add_exp(0.0, ln_c + z * hist_exponent) / z)
}

/// Bernoulli trials with a Beta(α0, β0) prior; S_X successes out of n
/// current trials and S_Y out of n0 historical ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaBernoulliBorrowModel {
    pub alpha0: f64,
    pub beta0: f64,
    pub n: u64,
    pub s_x: u64,
    pub n0: u64,
    pub s_y: u64,
}

impl BetaBernoulliBorrowModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0 && self.beta0 > 0.0) {
            return Err(ModelError::InvalidParameter("alpha0, beta0 must be positive"));
        }
        if self.s_x > self.n || self.s_y > self.n0 {
            return Err(ModelError::InvalidParameter("success counts exceed trial counts"));
        }
        Ok(())
    }
}

/// (1/z) ln F(θ) for the Beta–Bernoulli family, computed in log space:
/// F(θ) = θ^{z(S_X+α0−1)} (1−θ)^{z(n−S_X+β0−1)} ·
///        {(1−ξ) + ξ θ^{z S_Y} (1−θ)^{z(n0−S_Y)}}.
pub fn beta_bernoulli_generalized_logdensity(
    model: &BetaBernoulliBorrowModel,
    cfg: &BorrowConfig,
    theta: f64,
) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(ModelError::DomainError(theta));
    }
    let lt = theta.ln();
    let lq = (1.0 - theta).ln();
    let base = (model.s_x as f64 + model.alpha0 - 1.0) * lt
        + (model.n as f64 - model.s_x as f64 + model.beta0 - 1.0) * lq;
    let xi = cfg.xi();
    if xi == 0.0 {
        return Ok(base);
    }
    let hist = model.s_y as f64 * lt + (model.n0 - model.s_y) as f64 * lq;
    if xi == 1.0 {
        return Ok(base + hist);
    }
    if cfg.is_geometric_limit() {
        return Err(ModelError::GeometricLimitUnsupported);
    }
    let z = cfg.z();
    Ok(base + log_add_exp((1.0 - xi).ln(), xi.ln() + z * hist) / z)
}

/// Multinomial counts with a Dirichlet prior; X and Y are per-category
/// counts for the current and historical samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletMultinomialBorrowModel {
    pub alpha0: Vec<f64>,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

impl DirichletMultinomialBorrowModel {
    pub fn validate(&self) -> Result<()> {
        let k = self.alpha0.len();
        if k < 2 {
            return Err(ModelError::InvalidParameter("need at least 2 categories"));
        }
        if self.x.len() != k || self.y.len() != k {
            return Err(ModelError::InvalidParameter("count vectors must match alpha0 length"));
        }
        if self.alpha0.iter().any(|&a| !(a > 0.0)) {
            return Err(ModelError::InvalidParameter("alpha0 entries must be positive"));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.alpha0.len()
    }
}

/// Pointwise log-density on the simplex:
/// (1/z) lse( ln(1−ξ) + z Σ(X_i+α0_i−1) ln θ_i ,
///            ln ξ    + z Σ(X_i+Y_i+α0_i−1) ln θ_i ).
///
/// Works for any k; normalized grids are only provided for k = 3.
pub fn dirichlet_multinomial_generalized_logdensity(
    model: &DirichletMultinomialBorrowModel,
    cfg: &BorrowConfig,
    theta: &[f64],
) -> Result<f64> {
    if theta.len() != model.k() {
        return Err(ModelError::InvalidParameter("theta length must match model dimension"));
    }
    let sum: f64 = theta.iter().sum();
    if theta.iter().any(|&t| !(t > 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(ModelError::SimplexViolation((sum - 1.0).abs()));
    }
    let mut no_borrow = 0.0;
    let mut full_borrow = 0.0;
    for i in 0..model.k() {
        let lt = theta[i].ln();
        no_borrow += (model.x[i] as f64 + model.alpha0[i] - 1.0) * lt;
        full_borrow += (model.x[i] as f64 + model.y[i] as f64 + model.alpha0[i] - 1.0) * lt;
    }
    let xi = cfg.xi();
    if xi == 0.0 {
        return Ok(no_borrow);
    }
    if xi == 1.0 {
        return Ok(full_borrow);
    }
    if cfg.is_geometric_limit() {
        return Err(ModelError::GeometricLimitUnsupported);
    }
    let z = cfg.z();
    Ok(log_add_exp((1.0 - xi).ln() + z * no_borrow, xi.ln() + z * full_borrow) / z)
}

/// Quadrature lattice on the open 2-simplex {θ ∈ (0,1)³ : Σθ = 1}.
///
/// Points are interior-shifted barycentric lattice sites (i+½, j+½, l+½) /
/// (r+½) over compositions i+j+l = r−1; every point carries the same
/// normalized weight. Integrals of densities defined w.r.t. dθ1 dθ2 use
/// the projected-simplex area 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexGrid {
    pub points: Vec<[f64; 3]>,
    /// Normalized cell weights, summing to 1.
    pub weights: Vec<f64>,
}

impl SimplexGrid {
    /// ∫ f dθ1 dθ2 ≈ (1/2) Σ w_i f(θ_i) for a function given in log space.
    pub fn integrate_log(&self, log_vals: &[f64]) -> f64 {
        0.5 * self
            .weights
            .iter()
            .zip(log_vals)
            .map(|(&w, &lv)| w * lv.exp())
            .sum::<f64>()
    }

    /// Shifts log-values by a constant so the grid integral is 1.
    pub fn normalize_log(&self, log_vals: &[f64]) -> Vec<f64> {
        let total = self.integrate_log(log_vals);
        let shift = total.ln();
        log_vals.iter().map(|&lv| lv - shift).collect()
    }

    /// Total variation between two normalized log-densities on this grid.
    pub fn tv(&self, log_p: &[f64], log_q: &[f64]) -> f64 {
        0.25 * self
            .weights
            .iter()
            .zip(log_p.iter().zip(log_q))
            .map(|(&w, (&lp, &lq))| w * (lp.exp() - lq.exp()).abs())
            .sum::<f64>()
    }
}

/// Builds the ternary quadrature grid at the given resolution.
pub fn simplex_grid(k: usize, resolution: usize) -> Result<SimplexGrid> {
    if k != 3 {
        return Err(ModelError::UnsupportedDimension(k));
    }
    if resolution < 2 {
        return Err(ModelError::InvalidParameter("resolution must be at least 2"));
    }
    let r = resolution;
    let denom = r as f64 + 0.5;
    let mut points = Vec::new();
    for i in 0..r {
        for j in 0..(r - i) {
            let l = r - 1 - i - j;
            points.push([
                (i as f64 + 0.5) / denom,
                (j as f64 + 0.5) / denom,
                (l as f64 + 0.5) / denom,
            ]);
        }
    }
    let w = 1.0 / points.len() as f64;
    let weights = alloc::vec![w; points.len()];
    Ok(SimplexGrid { points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{linspace, tv_distance, GridDensity};
    use crate::posterior::generalized_posterior_grid;

    fn fig1_gaussian() -> GaussianBorrowModel {
        // Means 1 and 2 with n = n0 = 10; second moments consistent with
        // unit sample variance around those means.
        GaussianBorrowModel {
            sigma2: 1.0,
            mu0: 1.0,
            tau02: 1.0,
            n: 10,
            sum_x: 10.0,
            sum_x2: 20.0,
            n0: 10,
            sum_y: 20.0,
            sum_y2: 50.0,
        }
    }

    #[test]
    fn gaussian_empty_data_reduces_to_prior() {
        let m = GaussianBorrowModel {
            sigma2: 1.0,
            mu0: 0.5,
            tau02: 2.0,
            n: 0,
            sum_x: 0.0,
            sum_x2: 0.0,
            n0: 0,
            sum_y: 0.0,
            sum_y2: 0.0,
        };
        for theta in [-1.0, 0.0, 0.5, 2.0] {
            let lp = m.log_prior(theta);
            assert!((gaussian_log_p0(&m, theta) - lp).abs() < 1e-14);
            assert!((gaussian_log_p1(&m, theta) - lp).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_p1_minus_p0_is_hist_loglik() {
        let m = fig1_gaussian();
        for theta in [-2.0, 0.0, 1.3, 4.0] {
            let diff = gaussian_log_p1(&m, theta) - gaussian_log_p0(&m, theta);
            let n0 = m.n0 as f64;
            let expected = -0.5 * n0 * (LN_2PI + m.sigma2.ln())
                - (m.sum_y2 - 2.0 * theta * m.sum_y + n0 * theta * theta) / (2.0 * m.sigma2);
            assert!((diff - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_no_borrow_posterior_is_conjugate_normal() {
        // Single X = 1, σ² = 1, prior N(1,1): posterior N(1, 1/2).
        let m = GaussianBorrowModel {
            sigma2: 1.0,
            mu0: 1.0,
            tau02: 1.0,
            n: 1,
            sum_x: 1.0,
            sum_x2: 1.0,
            n0: 0,
            sum_y: 0.0,
            sum_y2: 0.0,
        };
        let g = GridDensity::from_fn(-6.0, 8.0, 4001, |t| gaussian_log_p0(&m, t))
            .unwrap()
            .normalize()
            .unwrap();
        let (mean, var) = g.moments();
        assert!((mean - 1.0).abs() < 1e-6);
        assert!((var - 0.5).abs() < 1e-6);
    }

    #[test]
    fn gaussian_closed_form_matches_generic_engine() {
        let m = fig1_gaussian();
        let xs = linspace(-6.0, 8.0, 3001);
        for (xi, alpha) in [(0.5, 0.5), (0.3, -0.5), (0.7, 2.0)] {
            let cfg = BorrowConfig::new(xi, alpha).unwrap();
            let p0 = GridDensity::new(
                xs.clone(),
                xs.iter().map(|&t| gaussian_log_p0(&m, t)).collect(),
            )
            .unwrap();
            let p1 = GridDensity::new(
                xs.clone(),
                xs.iter().map(|&t| gaussian_log_p1(&m, t)).collect(),
            )
            .unwrap();
            let generic = generalized_posterior_grid(&p0, &p1, &cfg).unwrap();
            let closed = GridDensity::new(
                xs.clone(),
                xs.iter()
                    .map(|&t| gaussian_generalized_logdensity(&m, &cfg, t).unwrap())
                    .collect(),
            )
            .unwrap()
            .normalize()
            .unwrap();
            let max_diff = generic
                .log_vals()
                .iter()
                .zip(closed.log_vals())
                .filter(|(&a, _)| a > -600.0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(max_diff < 1e-8, "xi={xi} alpha={alpha} diff={max_diff}");
        }
    }

    #[test]
    fn gaussian_fig1_alphas_normalizable() {
        let m = fig1_gaussian();
        for alpha in [-0.9, 0.0, 1.0, 3.0] {
            let cfg = BorrowConfig::new(0.5, alpha).unwrap();
            let g = GridDensity::from_fn(-6.0, 8.0, 3001, |t| {
                gaussian_generalized_logdensity(&m, &cfg, t).unwrap()
            })
            .unwrap()
            .normalize()
            .unwrap();
            assert!(g.log_integral().abs() < 1e-9);
        }
    }

    #[test]
    fn beta_bernoulli_endpoint_reductions() {
        // Fig.-1 style configuration: X̄=0.6, Ȳ=0.7, α0=2, β0=8, n=n0=10.
        let m = BetaBernoulliBorrowModel {
            alpha0: 2.0,
            beta0: 8.0,
            n: 10,
            s_x: 6,
            n0: 10,
            s_y: 7,
        };
        m.validate().unwrap();
        let xs = linspace(1e-9, 1.0 - 1e-9, 4001);

        // ξ=0 → Beta(S_X+α0, n−S_X+β0): mean a/(a+b), var ab/((a+b)²(a+b+1)).
        let cfg0 = BorrowConfig::new(0.0, 0.5).unwrap();
        let g0 = GridDensity::new(
            xs.clone(),
            xs.iter()
                .map(|&t| beta_bernoulli_generalized_logdensity(&m, &cfg0, t).unwrap())
                .collect(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        let (a, b) = (8.0, 12.0);
        let (mean, var) = g0.moments();
        assert!((mean - a / (a + b)).abs() < 1e-6);
        assert!((var - a * b / ((a + b) * (a + b) * (a + b + 1.0))).abs() < 1e-6);

        // ξ=1 → Beta(S_X+S_Y+α0, n+n0−S_X−S_Y+β0).
        let cfg1 = BorrowConfig::new(1.0, 0.5).unwrap();
        let g1 = GridDensity::new(
            xs.clone(),
            xs.iter()
                .map(|&t| beta_bernoulli_generalized_logdensity(&m, &cfg1, t).unwrap())
                .collect(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        let (a1, b1) = (15.0, 15.0);
        let (mean1, var1) = g1.moments();
        assert!((mean1 - a1 / (a1 + b1)).abs() < 1e-6);
        assert!((var1 - a1 * b1 / ((a1 + b1) * (a1 + b1) * (a1 + b1 + 1.0))).abs() < 1e-6);
    }

    #[test]
    fn beta_bernoulli_matches_generic_engine() {
        let m = BetaBernoulliBorrowModel {
            alpha0: 2.0,
            beta0: 8.0,
            n: 10,
            s_x: 6,
            n0: 10,
            s_y: 7,
        };
        let cfg = BorrowConfig::new(0.5, 0.5).unwrap();
        let xs = linspace(1e-9, 1.0 - 1e-9, 4001);
        let log_p0: Vec<f64> = xs
            .iter()
            .map(|&t| {
                (m.s_x as f64 + m.alpha0 - 1.0) * t.ln()
                    + (m.n as f64 - m.s_x as f64 + m.beta0 - 1.0) * (1.0 - t).ln()
            })
            .collect();
        let log_p1: Vec<f64> = xs
            .iter()
            .zip(&log_p0)
            .map(|(&t, &lp0)| lp0 + m.s_y as f64 * t.ln() + (m.n0 - m.s_y) as f64 * (1.0 - t).ln())
            .collect();
        let generic = generalized_posterior_grid(
            &GridDensity::new(xs.clone(), log_p0).unwrap(),
            &GridDensity::new(xs.clone(), log_p1).unwrap(),
            &cfg,
        )
        .unwrap();
        let closed = GridDensity::new(
            xs.clone(),
            xs.iter()
                .map(|&t| beta_bernoulli_generalized_logdensity(&m, &cfg, t).unwrap())
                .collect(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        assert!(tv_distance(&generic, &closed).unwrap() < 1e-8);
    }

    #[test]
    fn beta_bernoulli_domain_checked() {
        let m = BetaBernoulliBorrowModel {
            alpha0: 1.0,
            beta0: 1.0,
            n: 5,
            s_x: 3,
            n0: 5,
            s_y: 2,
        };
        let cfg = BorrowConfig::new(0.5, 0.5).unwrap();
        assert!(matches!(
            beta_bernoulli_generalized_logdensity(&m, &cfg, 0.0),
            Err(ModelError::DomainError(_))
        ));
        assert!(matches!(
            beta_bernoulli_generalized_logdensity(&m, &cfg, 1.0),
            Err(ModelError::DomainError(_))
        ));
    }

    #[test]
    fn dirichlet_reductions_and_k2_correspondence() {
        let m = DirichletMultinomialBorrowModel {
            alpha0: alloc::vec![2.0, 2.0, 2.0],
            x: alloc::vec![20, 15, 15],
            y: alloc::vec![10, 12, 8],
        };
        m.validate().unwrap();
        let cfg = BorrowConfig::new(0.5, 0.5).unwrap();
        // Finite on the interior of the simplex.
        let v = dirichlet_multinomial_generalized_logdensity(&m, &cfg, &[0.4, 0.35, 0.25]).unwrap();
        assert!(v.is_finite());
        // ξ=0 reduction: Dirichlet(X+α0) log-density up to constant.
        let cfg0 = BorrowConfig::new(0.0, 0.5).unwrap();
        let t = [0.3, 0.45, 0.25];
        let v0 = dirichlet_multinomial_generalized_logdensity(&m, &cfg0, &t).unwrap();
        let expected: f64 = (0..3)
            .map(|i| (m.x[i] as f64 + m.alpha0[i] - 1.0) * t[i].ln())
            .sum();
        assert!((v0 - expected).abs() < 1e-12);

        // k=2 equals the Beta–Bernoulli closed form under (θ, 1−θ).
        let m2 = DirichletMultinomialBorrowModel {
            alpha0: alloc::vec![2.0, 8.0],
            x: alloc::vec![6, 4],
            y: alloc::vec![7, 3],
        };
        let mb = BetaBernoulliBorrowModel {
            alpha0: 2.0,
            beta0: 8.0,
            n: 10,
            s_x: 6,
            n0: 10,
            s_y: 7,
        };
        let theta = 0.37;
        let lhs =
            dirichlet_multinomial_generalized_logdensity(&m2, &cfg, &[theta, 1.0 - theta]).unwrap();
        let rhs = beta_bernoulli_generalized_logdensity(&mb, &cfg, theta).unwrap();
        // Same up to a θ-independent constant: compare differences at two points.
        let theta_b = 0.62;
        let lhs_b = dirichlet_multinomial_generalized_logdensity(&m2, &cfg, &[theta_b, 1.0 - theta_b])
            .unwrap();
        let rhs_b = beta_bernoulli_generalized_logdensity(&mb, &cfg, theta_b).unwrap();
        assert!(((lhs - lhs_b) - (rhs - rhs_b)).abs() < 1e-10);
    }

    #[test]
    fn simplex_violation_rejected() {
        let m = DirichletMultinomialBorrowModel {
            alpha0: alloc::vec![1.0, 1.0, 1.0],
            x: alloc::vec![1, 2, 3],
            y: alloc::vec![1, 1, 1],
        };
        let cfg = BorrowConfig::new(0.5, 0.5).unwrap();
        assert!(matches!(
            dirichlet_multinomial_generalized_logdensity(&m, &cfg, &[0.5, 0.4, 0.2]),
            Err(ModelError::SimplexViolation(_))
        ));
    }

    #[test]
    fn simplex_grid_smallest_and_weights() {
        assert!(matches!(
            simplex_grid(2, 10),
            Err(ModelError::UnsupportedDimension(2))
        ));
        let g = simplex_grid(3, 2).unwrap();
        assert_eq!(g.points.len(), 3);
        let wsum: f64 = g.weights.iter().sum();
        assert!((wsum - 1.0).abs() < 1e-12);
        for p in &g.points {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&c| c > 0.0));
        }
    }

    #[test]
    fn simplex_grid_integrates_dirichlet222() {
        // Dirichlet(2,2,2) density w.r.t. dθ1dθ2 is 120·θ1θ2θ3; integral 1.
        let g = simplex_grid(3, 200).unwrap();
        let log_vals: Vec<f64> = g
            .points
            .iter()
            .map(|p| 120.0_f64.ln() + p[0].ln() + p[1].ln() + p[2].ln())
            .collect();
        let integral = g.integrate_log(&log_vals);
        assert!((integral - 1.0).abs() < 1e-3, "integral={integral}");
    }
}
