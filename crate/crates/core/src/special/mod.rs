//! Scalar kernels: Clausen's function, the complex dilogarithm, Kummer's angle,
//! the Dedekind eta modulus, the complex digamma function, Bernoulli numbers
//! and polynomials, and the named constants.

mod bernoulli;
mod clausen;
mod constants;
mod digamma;
mod dilog;
mod eta;
mod kummer;
mod zeta;

pub use bernoulli::{bernoulli_number, bernoulli_numbers, bernoulli_poly, bernoulli_rational, MAX_BERNOULLI};
pub use clausen::clausen_cl2;
pub use constants::{constants, Constants, CATALAN, EULER_GAMMA, GAMMA_ONE_QUARTER, GAMMA_ONE_THIRD};
pub use digamma::digamma;
pub use dilog::dilog;
pub use eta::log_abs_eta;
pub use kummer::kummer_omega;
pub use zeta::zeta_even;

/// Complex scalar used throughout (`μ`, `q = e^{2πiμ}`, dilogarithm arguments).
pub type ComplexValue = num_complex::Complex64;
