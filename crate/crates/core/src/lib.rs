//! Large sieve sums over the Gaussian integers and the exact arithmetic,
//! spacing, counting and character machinery needed to evaluate and audit them.

pub mod error;
pub mod fourier;
pub mod characters;
pub mod double_sieve;
pub mod gaussian;
pub mod sieve;
pub mod spacing;
pub mod square_norm;

pub use error::{Error, Result};
pub use gaussian::{GaussianInt, ResidueSystem};
