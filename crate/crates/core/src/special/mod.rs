//! Special functions and quadrature used throughout the crate.

mod bessel;
mod erf;
mod gamma;
pub mod quadrature;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use erf::{erf, erfc, normal_cdf, normal_quantile};
pub use gamma::{gamma, ln_gamma};
pub use quadrature::{gauss_hermite, gauss_legendre, QuadratureRule, RuleKind, Tolerance};
