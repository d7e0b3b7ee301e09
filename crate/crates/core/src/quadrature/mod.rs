//! Quadrature rules on (0, 1) and adaptive integration.

mod adaptive;
mod gauss;
mod rule;

pub use adaptive::integrate_adaptive;
pub use gauss::{gauss_jacobi_unit, gauss_legendre};
pub use rule::{gauss_rule, graded_rule, Panel, QuadratureRule};
