// SPDX-License-Identifier: Apache-2.0

//! Special functions and orthogonal polynomials.
//!
//! Everything here is pure and allocation-light; tables built from these
//! functions are immutable and can be shared across threads.

mod gamma;
mod hypergeometric;
mod orthopoly;
mod poly;
pub mod quadrature;

pub use gamma::{
    beta, binomial, double_factorial_odd, factorial, gamma, ln_factorial, ln_gamma, rgamma,
    sphere_volume,
};
pub use hypergeometric::{hyp2f1, Z_SWITCH};
pub use orthopoly::{
    hermite, hermite_coeffs, hermite_even_at_zero, laguerre, sigma_eval, sigma_poly,
    sigma_second_moment, sigma_variance, SigmaTable,
};
pub use poly::PolynomialCoeffs;
