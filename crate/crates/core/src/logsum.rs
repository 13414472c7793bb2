//! Stable log-space accumulation primitives shared by every module.

#[allow(unused_imports)] // std builds shadow Float with inherent methods
use num_traits::Float;

/// ln(e^a + e^b) without overflow; -inf inputs behave as zero mass.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln Σ e^{x_i} over an iterator; empty input or all -inf yields -inf.
pub fn log_sum_exp_iter<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut buf = alloc::vec::Vec::new();
    for x in xs {
        buf.push(x);
        if x > max {
            max = x;
        }
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = buf.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}
