pub mod error;
pub mod quadrature;
pub mod specialfn;

pub use error::{Error, Result};
pub mod substcoeffs;
pub mod greens;
pub mod eigensolver;
pub mod fracode;
pub mod assembly;
