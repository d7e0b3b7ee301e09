//! Scalar special functions.

mod bessel;
mod dd;
mod gamma;
mod hyper;
mod mittag_leffler;

pub use bessel::{bessel_j, bessel_j_zero};
pub(crate) use bessel::bisect;
pub use gamma::{binomial, falling_factorial, gamma, gamma_ratio_asymptotic, ln_gamma, pochhammer_rising, rgamma};
pub(crate) use gamma::is_nonpositive_integer;
pub use hyper::{hyp0fq, HypergeometricParams};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_series, MittagLefflerParams};
