//! Cure-rate Weibull survival model with historical-data borrowing.
//!
//! Each subject is cured with logistic probability π (never experiencing
//! the event) or follows a Weibull law. The current trial has treatment and
//! control arms; the historical trial contributes controls only, through
//! its own parameter block, discounted by the scalar borrowing factor
//! {(1−ξ) + ξ exp(z ℓ_hist)}^{1/z}, z = (1+α)/2. The factor is always
//! evaluated as a two-term log-sum-exp on ℓ_hist; exp(z·ℓ_hist) alone
//! underflows long before the factor becomes ill-defined.
//!
//! Because the historical block shares no parameters with the current one,
//! the two blocks of the joint posterior factorize given (ξ, α): hazard
//! ratios and other current-arm functionals are structurally invariant to
//! the amount of borrowing. Fits at different ξ differ in those columns by
//! Monte Carlo noise only.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use rand::Rng;
use rand_distr::Distribution;
use thiserror::Error;

use crate::logsum::log_add_exp;
use crate::mcmc::{
    adaptive_rw_metropolis, ess_from_series, hpd_interval, sigmoid, softplus, split_r_hat, Chain,
    McmcError, SamplerConfig, Transform,
};
use crate::rng::stream_rng;

const LN_2PI: f64 = 1.837877066409345483560659472811;
const Z_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurvivalError {
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("historical record {0} is not in the control group")]
    HistoricalGroupViolation(usize),
    #[error("borrowing factor undefined: z ≈ 0 with xi strictly inside (0,1)")]
    GeometricLimitUnsupported,
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("no comparable pairs for the concordance index")]
    NoComparablePairs,
    #[error("empty record set")]
    NoRecords,
    #[error(transparent)]
    Mcmc(#[from] McmcError),
}

pub type Result<T> = core::result::Result<T, SurvivalError>;

/// Treatment arm indicator: 0 = observation/control, 1 = interferon/treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Control,
    Treatment,
}

impl Arm {
    pub fn indicator(&self) -> f64 {
        match self {
            Arm::Control => 0.0,
            Arm::Treatment => 1.0,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Arm::Control),
            1 => Ok(Arm::Treatment),
            _ => Err(SurvivalError::DomainError("group must be 0 or 1")),
        }
    }
}

/// One survival observation: time on study, event indicator, arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubjectRecord {
    pub time: f64,
    pub event: bool,
    pub group: Arm,
}

impl SubjectRecord {
    pub fn new(time: f64, event: bool, group: Arm) -> Result<Self> {
        if !(time > 0.0) {
            return Err(SurvivalError::DomainError("time must be positive"));
        }
        Ok(Self { time, event, group })
    }
}

/// Full parameter block: current-trial cure/Weibull parameters, historical
/// control parameters, and the borrowing pair (ξ, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CureRateParams {
    pub gamma0_cur: f64,
    pub gamma1_cur: f64,
    pub shape_cur: f64,
    pub scale_cur: f64,
    pub gamma0_hist: f64,
    pub shape_hist: f64,
    pub scale_hist: f64,
    pub xi: f64,
    pub alpha_gp: f64,
}

impl CureRateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.shape_cur > 0.0 && self.scale_cur > 0.0)
            || !(self.shape_hist > 0.0 && self.scale_hist > 0.0)
        {
            return Err(SurvivalError::InvalidParams(
                "shapes and scales must be positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(SurvivalError::InvalidParams("xi must lie in [0,1]"));
        }
        Ok(())
    }

    fn z(&self) -> f64 {
        (1.0 + self.alpha_gp) / 2.0
    }
}

/// Hyperparameters of the §-style prior block. The second parameter of
/// every normal prior is a standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    pub mu_alpha: f64,
    pub sigma_alpha: f64,
    pub a_xi: f64,
    pub b_xi: f64,
    pub fixed_xi: Option<f64>,
    pub fixed_alpha: Option<f64>,
    /// sd of the N(0, ·) priors on the regression intercepts/effects.
    pub gamma_sd: f64,
    /// Gamma(shape, rate) prior on the Weibull shapes and scales.
    pub gamma_shape: f64,
    pub gamma_rate: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            mu_alpha: 0.0,
            sigma_alpha: 1.0,
            a_xi: 2.0,
            b_xi: 2.0,
            fixed_xi: None,
            fixed_alpha: None,
            gamma_sd: 10.0,
            gamma_shape: 2.0,
            gamma_rate: 1.0,
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_alpha > 0.0 && self.a_xi > 0.0 && self.b_xi > 0.0)
            || !(self.gamma_sd > 0.0 && self.gamma_shape > 0.0 && self.gamma_rate > 0.0)
        {
            return Err(SurvivalError::InvalidParams(
                "prior hyperparameters must be positive",
            ));
        }
        if let Some(xi) = self.fixed_xi {
            if !(0.0..=1.0).contains(&xi) {
                return Err(SurvivalError::InvalidParams("fixed xi must lie in [0,1]"));
            }
        }
        if let Some(a) = self.fixed_alpha {
            if !(a > -1.0) {
                return Err(SurvivalError::InvalidParams("fixed alpha must exceed -1"));
            }
        }
        Ok(())
    }
}

/// Logistic cure probability σ(γ0 + γ1·g), overflow-safe.
pub fn cure_probability(gamma0: f64, gamma1: f64, g: f64) -> f64 {
    sigmoid(gamma0 + gamma1 * g)
}

/// ln f(t) of a Weibull(shape, scale).
pub fn weibull_log_pdf(t: f64, shape: f64, scale: f64) -> Result<f64> {
    check_weibull_args(t, shape, scale)?;
    Ok((shape / scale).ln() + (shape - 1.0) * (t / scale).ln() - (t / scale).powf(shape))
}

/// ln S(t) = −(t/scale)^shape.
pub fn weibull_log_survival(t: f64, shape: f64, scale: f64) -> Result<f64> {
    check_weibull_args(t, shape, scale)?;
    Ok(-(t / scale).powf(shape))
}

fn check_weibull_args(t: f64, shape: f64, scale: f64) -> Result<()> {
    if !(t > 0.0 && shape > 0.0 && scale > 0.0) {
        return Err(SurvivalError::DomainError(
            "weibull arguments must be positive",
        ));
    }
    Ok(())
}

/// Mixture log-likelihood of one subject under given cure/Weibull
/// parameters: [(1−π)f]^δ [π + (1−π)S]^{1−δ}, in log space.
fn mixture_log_lik(
    time: f64,
    event: bool,
    logit_cure: f64,
    shape: f64,
    scale: f64,
) -> Result<f64> {
    // ln π = −softplus(−t), ln(1−π) = −softplus(t) for π = σ(t)
    let ln_cured = -softplus(-logit_cure);
    let ln_uncured = -softplus(logit_cure);
    if event {
        Ok(ln_uncured + weibull_log_pdf(time, shape, scale)?)
    } else {
        Ok(log_add_exp(
            ln_cured,
            ln_uncured + weibull_log_survival(time, shape, scale)?,
        ))
    }
}

/// Log-likelihood of one current-trial subject.
pub fn subject_log_lik(rec: &SubjectRecord, params: &CureRateParams) -> Result<f64> {
    mixture_log_lik(
        rec.time,
        rec.event,
        params.gamma0_cur + params.gamma1_cur * rec.group.indicator(),
        params.shape_cur,
        params.scale_cur,
    )
}

/// Log-likelihood of the historical controls under the historical block.
pub fn historical_log_lik(hist: &[SubjectRecord], params: &CureRateParams) -> Result<f64> {
    let mut total = 0.0;
    for (i, rec) in hist.iter().enumerate() {
        if rec.group != Arm::Control {
            return Err(SurvivalError::HistoricalGroupViolation(i));
        }
        total += mixture_log_lik(
            rec.time,
            rec.event,
            params.gamma0_hist,
            params.shape_hist,
            params.scale_hist,
        )?;
    }
    Ok(total)
}

/// Borrowing factor (1/z)·ln{(1−ξ) + ξ exp(z·ℓ_hist)}, short-circuiting the
/// ξ endpoints. Non-increasing in ξ and bounded in [ℓ_hist, 0] when
/// ℓ_hist < 0.
pub fn borrowing_factor(log_lik_hist: f64, xi: f64, z: f64) -> Result<f64> {
    if xi == 0.0 {
        return Ok(0.0);
    }
    if xi == 1.0 {
        return Ok(log_lik_hist);
    }
    if !(z > Z_EPS) {
        return Err(SurvivalError::GeometricLimitUnsupported);
    }
    Ok(log_add_exp((1.0 - xi).ln(), xi.ln() + z * log_lik_hist) / z)
}

/// Joint unnormalized log-posterior on the constrained scale: current
/// likelihood + borrowing factor on ℓ_hist + all log-prior terms.
/// Transform Jacobians are added by the sampler wrapper.
pub fn joint_log_posterior(
    current: &[SubjectRecord],
    hist: &[SubjectRecord],
    params: &CureRateParams,
    priors: &PriorSpec,
) -> Result<f64> {
    params.validate()?;
    priors.validate()?;
    let mut total = 0.0;
    for rec in current {
        total += subject_log_lik(rec, params)?;
    }
    if params.xi > 0.0 {
        let lh = historical_log_lik(hist, params)?;
        total += borrowing_factor(lh, params.xi, params.z())?;
    }

    let normal_lp = |x: f64, mu: f64, sd: f64| {
        let d = (x - mu) / sd;
        -0.5 * d * d - sd.ln() - 0.5 * LN_2PI
    };
    let gamma_lp = |x: f64| {
        (priors.gamma_shape - 1.0) * x.ln() - priors.gamma_rate * x
            + priors.gamma_shape * priors.gamma_rate.ln()
            - libm::lgamma(priors.gamma_shape)
    };
    total += normal_lp(params.gamma0_cur, 0.0, priors.gamma_sd)
        + normal_lp(params.gamma1_cur, 0.0, priors.gamma_sd)
        + normal_lp(params.gamma0_hist, 0.0, priors.gamma_sd)
        + gamma_lp(params.shape_cur)
        + gamma_lp(params.scale_cur)
        + gamma_lp(params.shape_hist)
        + gamma_lp(params.scale_hist);
    if priors.fixed_alpha.is_none() && priors.fixed_xi != Some(0.0) && priors.fixed_xi != Some(1.0)
    {
        total += normal_lp(params.alpha_gp, priors.mu_alpha, priors.sigma_alpha);
    }
    if priors.fixed_xi.is_none() {
        let ln_beta = libm::lgamma(priors.a_xi) + libm::lgamma(priors.b_xi)
            - libm::lgamma(priors.a_xi + priors.b_xi);
        total +=
            (priors.a_xi - 1.0) * params.xi.ln() + (priors.b_xi - 1.0) * (1.0 - params.xi).ln()
                - ln_beta;
    }
    Ok(total)
}

/// Instantaneous hazard h(t|g) = (1−π)f / (π + (1−π)S) for the current
/// model.
pub fn hazard(t: f64, g: f64, params: &CureRateParams) -> Result<f64> {
    let logit = params.gamma0_cur + params.gamma1_cur * g;
    let ln_cured = -softplus(-logit);
    let ln_uncured = -softplus(logit);
    let ln_f = weibull_log_pdf(t, params.shape_cur, params.scale_cur)?;
    let ln_s = weibull_log_survival(t, params.shape_cur, params.scale_cur)?;
    let ln_num = ln_uncured + ln_f;
    let ln_den = log_add_exp(ln_cured, ln_uncured + ln_s);
    Ok((ln_num - ln_den).exp())
}

/// Hazard ratio treatment / control at t0.
pub fn hazard_ratio(t0: f64, params: &CureRateParams) -> Result<f64> {
    Ok(hazard(t0, 1.0, params)? / hazard(t0, 0.0, params)?)
}

/// Model risk score r_i = π_i + (1−π_i)·exp[−(t_i/β)^α]: the predicted
/// population survival probability at the subject's observed time (higher
/// = longer expected survival).
pub fn risk_score(rec: &SubjectRecord, params: &CureRateParams) -> Result<f64> {
    let pi = cure_probability(params.gamma0_cur, params.gamma1_cur, rec.group.indicator());
    let s = weibull_log_survival(rec.time, params.shape_cur, params.scale_cur)?.exp();
    Ok(pi + (1.0 - pi) * s)
}

/// Concordance over comparable pairs (t_i < t_j with δ_i = 1) from raw
/// (time, event, score) triples.
///
/// With `survival_scores` true (the model's convention here) the expected
/// ordering is score_i < score_j; flip it for hazard-like scores where
/// larger means shorter survival.
pub fn concordance_from_scores(
    items: &[(f64, bool, f64)],
    survival_scores: bool,
) -> Result<f64> {
    let mut num = 0.0;
    let mut pairs = 0usize;
    for (i, &(ti, ei, ri)) in items.iter().enumerate() {
        if !ei {
            continue;
        }
        for (j, &(tj, _, rj)) in items.iter().enumerate() {
            if i == j || ti >= tj {
                continue;
            }
            pairs += 1;
            let (a, b) = if survival_scores { (ri, rj) } else { (rj, ri) };
            num += if a < b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            };
        }
    }
    if pairs == 0 {
        return Err(SurvivalError::NoComparablePairs);
    }
    Ok(num / pairs as f64)
}

/// C-index of the fitted model over the records, Harrell comparable-pair
/// rule with ties scored 0.5.
pub fn c_index(records: &[SubjectRecord], params: &CureRateParams) -> Result<f64> {
    let items: Vec<(f64, bool, f64)> = records
        .iter()
        .map(|r| Ok((r.time, r.event, risk_score(r, params)?)))
        .collect::<Result<_>>()?;
    concordance_from_scores(&items, true)
}

/// Kaplan–Meier product-limit estimate with Greenwood variance and a 95%
/// normal-approximation confidence band.
#[derive(Debug, Clone, PartialEq)]
pub struct KmCurve {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
    pub greenwood_var: Vec<f64>,
    pub ci95_lo: Vec<f64>,
    pub ci95_hi: Vec<f64>,
}

/// KM estimator over (time, event) pairs. Censoring removes subjects from
/// the risk set after their time; an all-censored input yields Ŝ ≡ 1.
pub fn km_estimate(records: &[(f64, bool)]) -> Result<KmCurve> {
    if records.is_empty() {
        return Err(SurvivalError::NoRecords);
    }
    let mut sorted: Vec<(f64, bool)> = records.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    let n = sorted.len();
    let mut curve = KmCurve {
        times: Vec::new(),
        survival: Vec::new(),
        greenwood_var: Vec::new(),
        ci95_lo: Vec::new(),
        ci95_hi: Vec::new(),
    };
    let mut s = 1.0;
    let mut greenwood_sum = 0.0;
    let mut i = 0usize;
    while i < n {
        let t = sorted[i].0;
        let mut deaths = 0usize;
        let mut at_time = 0usize;
        while i + at_time < n && sorted[i + at_time].0 == t {
            if sorted[i + at_time].1 {
                deaths += 1;
            }
            at_time += 1;
        }
        let at_risk = n - i;
        if deaths > 0 {
            let d = deaths as f64;
            let r = at_risk as f64;
            s *= 1.0 - d / r;
            if deaths < at_risk {
                greenwood_sum += d / (r * (r - d));
            }
            let var = s * s * greenwood_sum;
            let half = 1.96 * var.sqrt();
            curve.times.push(t);
            curve.survival.push(s);
            curve.greenwood_var.push(var);
            curve.ci95_lo.push((s - half).clamp(0.0, 1.0));
            curve.ci95_hi.push((s + half).clamp(0.0, 1.0));
        }
        i += at_time;
    }
    Ok(curve)
}

/// Synthetic two-arm trial generator standing in for real trial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub n: usize,
    /// Cure probability per arm [control, treatment].
    pub cure_prob: [f64; 2],
    /// Weibull (shape, scale) per arm.
    pub weibull: [(f64, f64); 2],
    /// Rate of the independent exponential censoring process; 0 disables it.
    pub censor_rate: f64,
    /// Administrative follow-up horizon; cured subjects censor here.
    pub admin_horizon: f64,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n: 100,
            cure_prob: [0.3, 0.45],
            weibull: [(1.2, 2.0), (1.2, 3.0)],
            censor_rate: 0.1,
            admin_horizon: 15.0,
            seed: 0,
        }
    }
}

/// Draws a synthetic trial: Bernoulli arm assignment and cure status,
/// Weibull event times for the uncured, exponential plus administrative
/// censoring. Deterministic given the seed.
pub fn synthesize_trial(config: &TrialConfig) -> Result<Vec<SubjectRecord>> {
    if config.n == 0 {
        return Err(SurvivalError::DomainError("n must be at least 1"));
    }
    let mut rng = stream_rng(config.seed, 0);
    let mut records = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let arm_idx = usize::from(rng.random::<f64>() < 0.5);
        let group = if arm_idx == 1 { Arm::Treatment } else { Arm::Control };
        let cured = rng.random::<f64>() < config.cure_prob[arm_idx];
        let (shape, scale) = config.weibull[arm_idx];
        let event_time = if cured {
            f64::INFINITY
        } else {
            rand_distr::Weibull::new(scale, shape)
                .map_err(|_| SurvivalError::DomainError("invalid weibull parameters"))?
                .sample(&mut rng)
        };
        let censor_time = if config.censor_rate > 0.0 {
            rand_distr::Exp::new(config.censor_rate)
                .map_err(|_| SurvivalError::DomainError("invalid censor rate"))?
                .sample(&mut rng)
        } else {
            f64::INFINITY
        };
        let cutoff = censor_time.min(config.admin_horizon);
        let event = event_time <= cutoff;
        let time = event_time.min(cutoff).max(1e-12);
        records.push(SubjectRecord { time, event, group });
    }
    Ok(records)
}

/// Population survival π(g) + (1−π(g))·S(t) under current-arm parameters.
pub fn population_survival(t: f64, g: f64, params: &CureRateParams) -> Result<f64> {
    let pi = cure_probability(params.gamma0_cur, params.gamma1_cur, g);
    Ok(pi + (1.0 - pi) * weibull_log_survival(t, params.shape_cur, params.scale_cur)?.exp())
}

/// MCMC protocol for [`fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub chains: usize,
    pub iterations: usize,
    pub burnin: usize,
    pub seed: u64,
}

impl FitConfig {
    /// The full-length protocol: 4 chains of 50,000 with 10,000 burn-in.
    pub fn full(seed: u64) -> Self {
        Self {
            chains: 4,
            iterations: 50_000,
            burnin: 10_000,
            seed,
        }
    }

    /// Desk-scale preset: 4 chains of 8,000 with 2,000 burn-in.
    pub fn fast(seed: u64) -> Self {
        Self {
            chains: 4,
            iterations: 8_000,
            burnin: 2_000,
            seed,
        }
    }
}

/// Which entries of the sampled vector map to which parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamLayout {
    pub names: Vec<String>,
    pub transforms: Vec<Transform>,
    pub xi_index: Option<usize>,
    pub alpha_index: Option<usize>,
}

/// Builds the sampled-parameter layout for a prior specification. The seven
/// structural parameters are always sampled; ξ and α join when not fixed
/// (α is dropped when ξ is fixed at an endpoint, where it cannot enter the
/// likelihood).
pub fn param_layout(priors: &PriorSpec) -> ParamLayout {
    let mut names: Vec<String> = alloc::vec![
        String::from("gamma0_cur"),
        String::from("gamma1_cur"),
        String::from("shape_cur"),
        String::from("scale_cur"),
        String::from("gamma0_hist"),
        String::from("shape_hist"),
        String::from("scale_hist"),
    ];
    let mut transforms = alloc::vec![
        Transform::Identity,
        Transform::Identity,
        Transform::LogPositive,
        Transform::LogPositive,
        Transform::Identity,
        Transform::LogPositive,
        Transform::LogPositive,
    ];
    let mut xi_index = None;
    let mut alpha_index = None;
    if priors.fixed_xi.is_none() {
        xi_index = Some(names.len());
        names.push(String::from("xi"));
        transforms.push(Transform::LogitUnit);
    }
    let xi_at_endpoint = matches!(priors.fixed_xi, Some(x) if x == 0.0 || x == 1.0);
    if priors.fixed_alpha.is_none() && !xi_at_endpoint {
        alpha_index = Some(names.len());
        names.push(String::from("alpha"));
        transforms.push(Transform::Identity);
    }
    ParamLayout {
        names,
        transforms,
        xi_index,
        alpha_index,
    }
}

fn unpack_params(theta: &[f64], layout: &ParamLayout, priors: &PriorSpec) -> CureRateParams {
    CureRateParams {
        gamma0_cur: theta[0],
        gamma1_cur: theta[1],
        shape_cur: theta[2],
        scale_cur: theta[3],
        gamma0_hist: theta[4],
        shape_hist: theta[5],
        scale_hist: theta[6],
        xi: layout
            .xi_index
            .map(|i| theta[i])
            .or(priors.fixed_xi)
            .unwrap_or(0.0),
        alpha_gp: layout
            .alpha_index
            .map(|i| theta[i])
            .or(priors.fixed_alpha)
            .unwrap_or(1.0),
    }
}

/// Runs a single MCMC chain of the joint posterior. Chain `index` derives
/// its own seed from the fit seed, so chains can run in any order or in
/// parallel with identical results.
pub fn run_fit_chain(
    current: &[SubjectRecord],
    hist: &[SubjectRecord],
    priors: &PriorSpec,
    config: &FitConfig,
    index: usize,
) -> Result<Chain> {
    priors.validate()?;
    let layout = param_layout(priors);
    let target = |x: &[f64]| -> f64 {
        let params = unpack_params(x, &layout, priors);
        joint_log_posterior(current, hist, &params, priors).unwrap_or(f64::NEG_INFINITY)
    };
    let mut init = alloc::vec![0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0];
    if layout.xi_index.is_some() {
        init.push(priors.a_xi / (priors.a_xi + priors.b_xi));
    }
    if layout.alpha_index.is_some() {
        init.push(priors.mu_alpha.max(0.0));
    }
    let chain_seed = config
        .seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1));
    let sampler = SamplerConfig {
        iterations: config.iterations,
        burnin: config.burnin,
        seed: chain_seed,
        target_accept: 0.30,
    };
    Ok(adaptive_rw_metropolis(
        target,
        &layout.transforms,
        &init,
        &sampler,
    )?)
}

/// Per-parameter posterior summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub hpd_lo: f64,
    pub hpd_hi: f64,
    pub r_hat: f64,
    pub ess: f64,
}

/// Fit output mirroring the results-table schema: borrowing parameters,
/// hazard ratio with HPD interval, concordance, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub alpha_mean: Option<f64>,
    pub xi_mean: Option<f64>,
    pub hr_mean: f64,
    pub hr_hpd_lo: f64,
    pub hr_hpd_hi: f64,
    pub c_index: f64,
    pub t0: f64,
    pub params: Vec<ParamSummary>,
    pub posterior_mean_params: CureRateParams,
    pub max_r_hat: f64,
    /// False when any split R-hat exceeds 1.05 (non-fatal).
    pub diagnostics_ok: bool,
}

/// Summarizes completed chains: per-parameter moments and diagnostics,
/// pooled hazard-ratio posterior at `t0`, and the C-index at the
/// posterior-mean parameters.
pub fn summarize_chains(
    chains: &[Chain],
    layout: &ParamLayout,
    priors: &PriorSpec,
    current: &[SubjectRecord],
    t0: f64,
) -> Result<FitSummary> {
    if chains.len() < 2 {
        return Err(SurvivalError::Mcmc(McmcError::TooFewChains));
    }
    let dim = layout.names.len();
    let mut params = Vec::with_capacity(dim);
    let mut max_r_hat: f64 = 1.0;
    for p in 0..dim {
        let pooled: Vec<f64> = chains.iter().flat_map(|c| c.param(p)).collect();
        let mean = pooled.iter().sum::<f64>() / pooled.len() as f64;
        let var = pooled.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>()
            / (pooled.len() - 1) as f64;
        let (hpd_lo, hpd_hi) = hpd_interval(&pooled, 0.95);
        let r = crate::mcmc::r_hat(chains, p)?;
        let e: f64 = chains.iter().map(|c| ess_from_series(&c.param(p))).sum();
        max_r_hat = max_r_hat.max(r);
        params.push(ParamSummary {
            name: layout.names[p].clone(),
            mean,
            sd: var.sqrt(),
            hpd_lo,
            hpd_hi,
            r_hat: r,
            ess: e,
        });
    }

    // pooled hazard-ratio posterior
    let mut hr_draws = Vec::new();
    for chain in chains {
        for row in &chain.draws {
            let p = unpack_params(row, layout, priors);
            hr_draws.push(hazard_ratio(t0, &p)?);
        }
    }
    let hr_mean = hr_draws.iter().sum::<f64>() / hr_draws.len() as f64;
    let (hr_lo, hr_hi) = hpd_interval(&hr_draws, 0.95);

    let mean_vec: Vec<f64> = (0..dim).map(|p| params[p].mean).collect();
    let mean_params = unpack_params(&mean_vec, layout, priors);
    let c = c_index(current, &mean_params)?;

    let alpha_mean = layout
        .alpha_index
        .map(|i| params[i].mean)
        .or(priors.fixed_alpha);
    let xi_mean = layout.xi_index.map(|i| params[i].mean).or(priors.fixed_xi);

    Ok(FitSummary {
        alpha_mean,
        xi_mean,
        hr_mean,
        hr_hpd_lo: hr_lo,
        hr_hpd_hi: hr_hi,
        c_index: c,
        t0,
        params,
        posterior_mean_params: mean_params,
        max_r_hat,
        diagnostics_ok: max_r_hat <= 1.05,
    })
}

/// Median of the observed times, the default hazard-ratio evaluation point.
pub fn median_time(records: &[SubjectRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(SurvivalError::NoRecords);
    }
    let mut times: Vec<f64> = records.iter().map(|r| r.time).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let n = times.len();
    Ok(if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2.0
    })
}

/// Full fit: runs the chains sequentially and summarizes. `t0` defaults to
/// the median observed time of the current trial.
pub fn fit(
    current: &[SubjectRecord],
    hist: &[SubjectRecord],
    priors: &PriorSpec,
    config: &FitConfig,
    t0: Option<f64>,
) -> Result<FitSummary> {
    if config.chains < 2 {
        return Err(SurvivalError::Mcmc(McmcError::TooFewChains));
    }
    let t0 = match t0 {
        Some(t) => t,
        None => median_time(current)?,
    };
    let chains: Vec<Chain> = (0..config.chains)
        .map(|i| run_fit_chain(current, hist, priors, config, i))
        .collect::<Result<_>>()?;
    let layout = param_layout(priors);
    summarize_chains(&chains, &layout, priors, current, t0)
}
