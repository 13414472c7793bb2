//! Numerical core for historical-data borrowing with generalized power posteriors.
//!
//! Everything here is pure computation over owned data: grid densities,
//! divergence functionals, power-mean posterior construction, contamination
//! robustness bounds, posterior shape diagnostics, asymptotic checks, an
//! adaptive random-walk Metropolis sampler, and a cure-rate Weibull survival
//! model. IO, file formats, and the command-line front end live in the
//! companion `histborrow` crate.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm` via `num_traits::Float`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;



pub mod asymptotics;
pub mod divergence;
pub mod mcmc;
pub mod models;
pub mod posterior;
pub mod robustness;
pub mod shape;
pub mod survival;

mod logsum;
mod rng;

pub use logsum::{log_add_exp, log_sum_exp_iter};
pub use rng::stream_rng;
