//! Nystrom discretization of the integral equation for the spectral problem,
//! and the analytic routes used to cross-check it.

mod frobenius;
mod nystrom;
mod product;

pub use frobenius::{
    bessel_eigenvalues_k1, characteristic_determinant, characteristic_roots, frobenius_solution, FundamentalSystem,
};
pub use nystrom::{
    build_nystrom_matrix, build_sampled_nystrom_matrix, nystrom_extend, solve_basis, unweighted_eigenfunction,
    SpectralBasis,
};
