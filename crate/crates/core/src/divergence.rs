//! Grid-based density representation and divergence functionals.
//!
//! A [`GridDensity`] stores a 1-D density as log-values over a strictly
//! increasing support grid. All integrals are trapezoid quadrature; the
//! normalization constant is accumulated with a per-panel log-sum-exp so that
//! log-densities spanning hundreds of log units stay stable.

use alloc::vec::Vec;
#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;
use thiserror::Error;

use crate::logsum::{log_add_exp, log_sum_exp_iter};

/// Log-density values at or below this are treated as exactly zero mass in
/// pointwise ratio computations (exp underflows to subnormal/0 around -745).
pub const LOG_ZERO_CUTOFF: f64 = -745.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DivergenceError {
    #[error("grid must have at least 3 points, got {0}")]
    GridTooShort(usize),
    #[error("grid and log-density lengths differ: {xs} vs {log_vals}")]
    LengthMismatch { xs: usize, log_vals: usize },
    #[error("non-finite grid coordinate at index {0}")]
    NonFiniteGrid(usize),
    #[error("grid not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("log-density at index {0} is NaN or +inf")]
    InvalidLogValue(usize),
    #[error("cannot normalize: every log-density is -inf")]
    AllMassZero,
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("alpha within 1e-12 of ±1; use kl_divergence for the limits")]
    AlphaSingular,
    #[error("p has mass where q vanishes (first offending index {0})")]
    SupportViolation(usize),
}

pub type Result<T> = core::result::Result<T, DivergenceError>;

/// A 1-D density on a fixed grid, stored in log space.
///
/// `normalized` records whether the trapezoid integral of `exp(log_vals)`
/// over `xs` is 1 (within 1e-6). Construction validates the grid; call
/// [`GridDensity::normalize`] to rescale.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    xs: Vec<f64>,
    log_vals: Vec<f64>,
    normalized: bool,
}

impl GridDensity {
    /// Wraps raw (unnormalized) log-density values over a grid.
    pub fn new(xs: Vec<f64>, log_vals: Vec<f64>) -> Result<Self> {
        if xs.len() < 3 {
            return Err(DivergenceError::GridTooShort(xs.len()));
        }
        if xs.len() != log_vals.len() {
            return Err(DivergenceError::LengthMismatch {
                xs: xs.len(),
                log_vals: log_vals.len(),
            });
        }
        for (i, &x) in xs.iter().enumerate() {
            if !x.is_finite() {
                return Err(DivergenceError::NonFiniteGrid(i));
            }
        }
        for i in 1..xs.len() {
            if xs[i] <= xs[i - 1] {
                return Err(DivergenceError::NotIncreasing(i));
            }
        }
        for (i, &v) in log_vals.iter().enumerate() {
            if v.is_nan() || v == f64::INFINITY {
                return Err(DivergenceError::InvalidLogValue(i));
            }
        }
        Ok(Self {
            xs,
            log_vals,
            normalized: false,
        })
    }

    /// Evaluates `log_f` at every point of a uniform grid on `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, n: usize, log_f: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = linspace(lo, hi, n);
        let log_vals = xs.iter().map(|&x| log_f(x)).collect();
        Self::new(xs, log_vals)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn log_vals(&self) -> &[f64] {
        &self.log_vals
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Density values on the natural scale.
    pub fn values(&self) -> Vec<f64> {
        self.log_vals.iter().map(|&lv| lv.exp()).collect()
    }

    /// ln ∫ exp(log_vals) dx by trapezoid quadrature, one log-sum-exp over
    /// panel masses.
    pub fn log_integral(&self) -> f64 {
        log_sum_exp_iter((0..self.xs.len() - 1).map(|i| {
            let width = self.xs[i + 1] - self.xs[i];
            (width / 2.0).ln() + log_add_exp(self.log_vals[i], self.log_vals[i + 1])
        }))
    }

    /// Rescales so the trapezoid integral is 1.
    pub fn normalize(&self) -> Result<Self> {
        let log_z = self.log_integral();
        if log_z == f64::NEG_INFINITY {
            return Err(DivergenceError::AllMassZero);
        }
        let log_vals = self.log_vals.iter().map(|&lv| lv - log_z).collect();
        Ok(Self {
            xs: self.xs.clone(),
            log_vals,
            normalized: true,
        })
    }

    /// Mean and variance under the density, by trapezoid quadrature.
    pub fn moments(&self) -> (f64, f64) {
        let vals = self.values();
        let mean = trapezoid(&self.xs, &vals.iter().zip(&self.xs).map(|(&f, &x)| f * x).collect::<Vec<_>>());
        let ex2 = trapezoid(
            &self.xs,
            &vals.iter().zip(&self.xs).map(|(&f, &x)| f * x * x).collect::<Vec<_>>(),
        );
        (mean, ex2 - mean * mean)
    }

    /// Checks that `other` lives on the same grid (exact coordinates).
    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.xs.len() != other.xs.len() || self.xs.iter().zip(&other.xs).any(|(a, b)| a != b) {
            return Err(DivergenceError::GridMismatch);
        }
        Ok(())
    }
}

/// Uniform grid of `n` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

/// Plain trapezoid rule over matched abscissae/ordinates.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    (0..xs.len() - 1)
        .map(|i| (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]) / 2.0)
        .sum()
}

/// Amari α-divergence D_α[p‖q] = 4/(1−α²) · (1 − ∫ p^{(1−α)/2} q^{(1+α)/2}).
///
/// Undefined at α = ±1; callers wanting the KL limits use
/// [`kl_divergence`] directly. Tiny negative quadrature residue in
/// [-1e-10, 0) is clamped to 0.
pub fn alpha_divergence(p: &GridDensity, q: &GridDensity, alpha: f64) -> Result<f64> {
    p.same_grid(q)?;
    if (alpha.abs() - 1.0).abs() < 1e-12 {
        return Err(DivergenceError::AlphaSingular);
    }
    let wp = (1.0 - alpha) / 2.0;
    let wq = (1.0 + alpha) / 2.0;
    let log_integrand: Vec<f64> = p
        .log_vals
        .iter()
        .zip(&q.log_vals)
        .map(|(&lp, &lq)| {
            if lp == f64::NEG_INFINITY || lq == f64::NEG_INFINITY {
                // 0^w with the other factor finite: mass vanishes. Negative
                // powers of 0 cannot arise because wp, wq have opposite signs
                // only when |alpha| > 1, and then the -inf branch still
                // carries the vanishing factor with positive weight.
                if (lp == f64::NEG_INFINITY && wp > 0.0) || (lq == f64::NEG_INFINITY && wq > 0.0) {
                    f64::NEG_INFINITY
                } else {
                    // exploding ratio against zero mass: the integrand is
                    // genuinely +inf; surface it as such.
                    f64::INFINITY
                }
            } else {
                wp * lp + wq * lq
            }
        })
        .collect();
    let log_affinity = log_sum_exp_panels(&p.xs, &log_integrand);
    let affinity = log_affinity.exp();
    let d = 4.0 / (1.0 - alpha * alpha) * (1.0 - affinity);
    Ok(if d < 0.0 && d >= -1e-10 { 0.0 } else { d })
}

/// KL divergence ∫ p ln(p/q) by trapezoid quadrature.
///
/// Points where p underflows to zero contribute nothing; p > 1e-300 against
/// q = 0 is a support violation.
pub fn kl_divergence(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    p.same_grid(q)?;
    const LOG_P_POSITIVE: f64 = -690.77552789821368; // ln(1e-300)
    let mut integrand = Vec::with_capacity(p.len());
    for (i, (&lp, &lq)) in p.log_vals.iter().zip(&q.log_vals).enumerate() {
        if lp <= LOG_ZERO_CUTOFF {
            integrand.push(0.0);
            continue;
        }
        if lq <= LOG_ZERO_CUTOFF {
            if lp > LOG_P_POSITIVE {
                return Err(DivergenceError::SupportViolation(i));
            }
            integrand.push(0.0);
            continue;
        }
        integrand.push(lp.exp() * (lp - lq));
    }
    let d = trapezoid(&p.xs, &integrand);
    Ok(if d < 0.0 && d >= -1e-10 { 0.0 } else { d })
}

/// Total variation distance ½ ∫ |p − q|, clamped to [0, 1].
pub fn tv_distance(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    p.same_grid(q)?;
    let integrand: Vec<f64> = p
        .log_vals
        .iter()
        .zip(&q.log_vals)
        .map(|(&lp, &lq)| (lp.exp() - lq.exp()).abs())
        .collect();
    Ok((0.5 * trapezoid(&p.xs, &integrand)).clamp(0.0, 1.0))
}

/// Trapezoid quadrature of exp(log_integrand) in log space; tolerates +inf
/// entries by propagating +inf.
fn log_sum_exp_panels(xs: &[f64], log_integrand: &[f64]) -> f64 {
    if log_integrand.iter().any(|v| *v == f64::INFINITY) {
        return f64::INFINITY;
    }
    log_sum_exp_iter((0..xs.len() - 1).map(|i| {
        let width = xs[i + 1] - xs[i];
        (width / 2.0).ln() + log_add_exp(log_integrand[i], log_integrand[i + 1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn std_normal_grid(lo: f64, hi: f64, n: usize, mu: f64, sigma: f64) -> GridDensity {
        GridDensity::from_fn(lo, hi, n, |x| {
            let z = (x - mu) / sigma;
            -0.5 * z * z - (sigma * (2.0 * core::f64::consts::PI).sqrt()).ln()
        })
        .unwrap()
        .normalize()
        .unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            GridDensity::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 0.0]),
            Err(DivergenceError::GridTooShort(2))
        ));
        assert!(matches!(
            GridDensity::new(alloc::vec![0.0, 1.0, 0.5], alloc::vec![0.0; 3]),
            Err(DivergenceError::NotIncreasing(2))
        ));
        assert!(matches!(
            GridDensity::new(alloc::vec![0.0, f64::NAN, 1.0], alloc::vec![0.0; 3]),
            Err(DivergenceError::NonFiniteGrid(1))
        ));
    }

    #[test]
    fn normalize_uniform_is_flat_one() {
        let g = GridDensity::from_fn(0.0, 1.0, 101, |_| 0.0)
            .unwrap()
            .normalize()
            .unwrap();
        for &lv in g.log_vals() {
            assert!(lv.abs() < 1e-12);
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = std_normal_grid(-8.0, 8.0, 2001, 0.0, 1.0);
        let g2 = g.normalize().unwrap();
        let max_diff = g
            .log_vals()
            .iter()
            .zip(g2.log_vals())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-9);
    }

    #[test]
    fn normalize_matches_closed_form_normal() {
        let g = GridDensity::from_fn(-8.0, 8.0, 2001, |x| -x * x / 2.0)
            .unwrap()
            .normalize()
            .unwrap();
        for (&x, &lv) in g.xs().iter().zip(g.log_vals()) {
            let expected = -x * x / 2.0 - 0.5 * (2.0 * core::f64::consts::PI).ln();
            assert!((lv - expected).abs() < 1e-7, "x={x} lv={lv} exp={expected}");
        }
    }

    #[test]
    fn normalize_all_neg_inf_errors() {
        let g = GridDensity::new(alloc::vec![0.0, 1.0, 2.0], alloc::vec![f64::NEG_INFINITY; 3])
            .unwrap();
        assert!(matches!(g.normalize(), Err(DivergenceError::AllMassZero)));
    }

    #[test]
    fn alpha_divergence_identical_is_zero() {
        let p = std_normal_grid(-8.0, 8.0, 2001, 0.0, 1.0);
        for alpha in [-0.9, -0.5, 0.0, 0.5, 2.0, 3.0] {
            let d = alpha_divergence(&p, &p, alpha).unwrap();
            assert!(d.abs() < 1e-10, "alpha={alpha} d={d}");
        }
    }

    #[test]
    fn alpha_zero_matches_hellinger_affinity_oracle() {
        // Oracle: D_0 = 4(1 - ∫ sqrt(pq)); for N(0,1) vs N(1,1) the affinity
        // is exp(-1/8), so D_0 = 4(1 - e^{-1/8}) = 0.47001239...; frozen from
        // the fine-quadrature oracle below.
        let p = std_normal_grid(-10.0, 10.0, 4001, 0.0, 1.0);
        let q = std_normal_grid(-10.0, 10.0, 4001, 1.0, 1.0);
        let d = alpha_divergence(&p, &q, 0.0).unwrap();
        let oracle = {
            let affinity = trapezoid(
                p.xs(),
                &p.log_vals()
                    .iter()
                    .zip(q.log_vals())
                    .map(|(&lp, &lq)| (0.5 * lp + 0.5 * lq).exp())
                    .collect::<Vec<_>>(),
            );
            4.0 * (1.0 - affinity)
        };
        assert!((d - oracle).abs() < 1e-9);
        assert!((d - 0.470_012_389_661_6).abs() < 1e-6, "d={d}");
    }

    #[test]
    fn alpha_near_one_matches_dual_kl() {
        let p = std_normal_grid(-9.0, 9.0, 4001, 0.0, 1.0);
        let q = std_normal_grid(-9.0, 9.0, 4001, 0.5, 1.0);
        let d = alpha_divergence(&p, &q, 1.0 - 1e-6).unwrap();
        let kl_qp = kl_divergence(&q, &p).unwrap();
        assert!((d - kl_qp).abs() < 1e-4, "d={d} kl={kl_qp}");
    }

    #[test]
    fn alpha_singular_rejected() {
        let p = std_normal_grid(-8.0, 8.0, 501, 0.0, 1.0);
        assert!(matches!(
            alpha_divergence(&p, &p, 1.0),
            Err(DivergenceError::AlphaSingular)
        ));
        assert!(matches!(
            alpha_divergence(&p, &p, -1.0 + 1e-13),
            Err(DivergenceError::AlphaSingular)
        ));
    }

    #[test]
    fn kl_gaussian_closed_forms() {
        // Oracle: KL[N(m1,s1²)‖N(m2,s2²)] = ln(s2/s1) + (s1² + (m1-m2)²)/(2 s2²) - 1/2.
        let p = std_normal_grid(-12.0, 12.0, 6001, 0.0, 1.0);
        let q = std_normal_grid(-12.0, 12.0, 6001, 1.0, 1.0);
        assert!((kl_divergence(&p, &q).unwrap() - 0.5).abs() < 1e-7);
        assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-12);

        let q2 = std_normal_grid(-12.0, 12.0, 6001, 0.0, 2.0);
        let expected = 0.5 * (0.25 + 4.0_f64.ln() - 1.0);
        assert!((kl_divergence(&p, &q2).unwrap() - expected).abs() < 1e-7);
        assert!((expected - 0.318_147_180_559_9).abs() < 1e-10);
    }

    #[test]
    fn kl_support_violation_detected() {
        let xs = linspace(0.0, 1.0, 11);
        let p = GridDensity::new(xs.clone(), alloc::vec![0.0; 11])
            .unwrap()
            .normalize()
            .unwrap();
        let mut q_log = alloc::vec![0.0; 11];
        q_log[5] = f64::NEG_INFINITY;
        let q = GridDensity::new(xs, q_log).unwrap();
        assert!(matches!(
            kl_divergence(&p, &q),
            Err(DivergenceError::SupportViolation(5))
        ));
    }

    #[test]
    fn tv_identical_zero_and_disjoint_one() {
        let p = std_normal_grid(-8.0, 8.0, 2001, 0.0, 1.0);
        assert!(tv_distance(&p, &p).unwrap().abs() < 1e-15);

        // Disjoint uniforms on [0,1] and [2,3] over a joint grid.
        let xs = linspace(-0.5, 3.5, 4001);
        let u1 = GridDensity::new(
            xs.clone(),
            xs.iter()
                .map(|&x| if (0.0..=1.0).contains(&x) { 0.0 } else { f64::NEG_INFINITY })
                .collect(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        let u2 = GridDensity::new(
            xs.clone(),
            xs.iter()
                .map(|&x| if (2.0..=3.0).contains(&x) { 0.0 } else { f64::NEG_INFINITY })
                .collect(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        let tv = tv_distance(&u1, &u2).unwrap();
        assert!((tv - 1.0).abs() < 1e-3, "tv={tv}");
    }

    #[test]
    fn tv_gaussian_shift_closed_form() {
        // Oracle: TV(N(0,1), N(Δ,1)) = 2Φ(Δ/2) - 1 = erf(Δ/(2√2)).
        let p = std_normal_grid(-10.0, 11.0, 8001, 0.0, 1.0);
        let q = std_normal_grid(-10.0, 11.0, 8001, 1.25, 1.0);
        let tv = tv_distance(&p, &q).unwrap();
        let oracle = libm::erf(1.25 / (2.0 * core::f64::consts::SQRT_2));
        assert!((tv - oracle).abs() < 1e-7, "tv={tv} oracle={oracle}");
        assert!((oracle - 0.468_028_941_9).abs() < 1e-6);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let p = std_normal_grid(-8.0, 8.0, 2001, 0.0, 1.0);
        let q = std_normal_grid(-8.0, 8.0, 2003, 0.0, 1.0);
        assert!(matches!(
            tv_distance(&p, &q),
            Err(DivergenceError::GridMismatch)
        ));
    }
}
