//! Right-hand sides of the large sieve inequalities, with implied constant 1.
//!
//! `q` is the size parameter of the respective inequality: a norm cap for
//! Gaussian moduli, and a cap on `√N(q)` for natural or square-norm moduli.

use crate::error::{Error, Result};

/// Default `ε` for the square-norm bound.
pub const DEFAULT_EPSILON: f64 = 0.1;

/// `(Q² + N)·Z`, all Gaussian moduli with `N(q) <= Q`.
pub fn bound_t1(q: f64, n: f64, z: f64) -> f64 {
    (q * q + n) * z
}

/// `(Q³ + Q²√N + N)·Z`, natural moduli `q <= Q`.
pub fn bound_t2(q: f64, n: f64, z: f64) -> f64 {
    (q.powi(3) + q * q * n.sqrt() + n) * z
}

/// `(QN)^ε·(Q³ + Q²√N + √Q·N)·Z`, square-norm moduli with `N(q) <= Q²`.
pub fn bound_t3(q: f64, n: f64, z: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::OutOfRange(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    Ok((q * n).powf(epsilon) * (q.powi(3) + q * q * n.sqrt() + q.sqrt() * n) * z)
}

/// The multiplicative-character analogue shares the square-norm right-hand side.
pub fn bound_t4(q: f64, n: f64, z: f64, epsilon: f64) -> Result<f64> {
    bound_t3(q, n, z, epsilon)
}
