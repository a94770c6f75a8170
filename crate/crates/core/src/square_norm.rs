//! Moduli of square norm, found two ways: a direct scan, and the images of
//! `(m² − n²) + 2mn·i`. The scan is ground truth; the parametrized set is only
//! audited against it.

use std::collections::BTreeSet;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::gaussian::{is_perfect_square, GaussianInt};

/// Largest `maxNorm` either enumeration accepts.
pub const SQUARE_NORM_CAP: i64 = 100_000_000;

fn check_cap(max_norm: i64) -> Result<()> {
    if max_norm > SQUARE_NORM_CAP {
        Err(Error::NormCap { norm: max_norm, cap: SQUARE_NORM_CAP })
    } else {
        Ok(())
    }
}

fn sorted(set: BTreeSet<GaussianInt>) -> Vec<GaussianInt> {
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort_by_key(|g| (g.norm(), g.re, g.im));
    out
}

/// Canonical `q ≠ 0` with `N(q) <= max_norm` a perfect square, sorted by `(norm, re, im)`.
pub fn enumerate_square_norm(max_norm: i64) -> Result<Vec<GaussianInt>> {
    check_cap(max_norm)?;
    let mut out = BTreeSet::new();
    let side = max_norm.max(0).sqrt();
    for re in 1..=side {
        let rest = max_norm - re * re;
        for im in 0..=rest.sqrt() {
            if is_perfect_square(re * re + im * im) {
                out.insert(GaussianInt::new(re, im));
            }
        }
    }
    Ok(sorted(out))
}

/// `(m² − n²) + 2mn·i`, whose norm is `(m² + n²)²`.
pub fn pyth_param(m: i64, n: i64) -> GaussianInt {
    GaussianInt::new(m * m - n * n, 2 * m * n)
}

/// Canonical images of [`pyth_param`] over all `(m, n)` with `(m² + n²)² <= max_norm`.
pub fn enumerate_pyth_param(max_norm: i64) -> Result<Vec<GaussianInt>> {
    check_cap(max_norm)?;
    let mut out = BTreeSet::new();
    if max_norm < 1 {
        return Ok(Vec::new());
    }
    let hyp = max_norm.sqrt();
    let reach = hyp.sqrt();
    for m in -reach..=reach {
        for n in -reach..=reach {
            if m * m + n * n > hyp || (m, n) == (0, 0) {
                continue;
            }
            out.insert(pyth_param(m, n).canonical());
        }
    }
    Ok(sorted(out))
}

/// Square-norm moduli the parametrization misses, and parametrized moduli
/// that do not have square norm.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageDiff {
    pub missing: Vec<GaussianInt>,
    pub extraneous: Vec<GaussianInt>,
}

pub fn coverage_diff(max_norm: i64) -> Result<CoverageDiff> {
    let truth: BTreeSet<_> = enumerate_square_norm(max_norm)?.into_iter().collect();
    let param: BTreeSet<_> = enumerate_pyth_param(max_norm)?.into_iter().collect();
    Ok(CoverageDiff {
        missing: sorted(truth.difference(&param).copied().collect()),
        extraneous: sorted(param.difference(&truth).copied().collect()),
    })
}

/// `gcd(u, v)` of the coordinates.
pub fn content(q: GaussianInt) -> i64 {
    num_integer::gcd(q.re, q.im)
}
