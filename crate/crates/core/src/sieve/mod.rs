//! Large sieve sums
//!
//! ```text
//! Σ(Q, N; S) = Σ_{q ∈ S, window} Σ_{r mod q, (r,q)=1} |Σ_{N(n) <= N} a_n e(Re(n·r/q))|²
//! ```
//!
//! and the multiplicative-character variant weighted by `N(q)/Φ(q)`.
//!
//! Evaluation over distinct moduli runs in parallel; per-modulus partial sums
//! are collected in modulus order and added sequentially, so the result does
//! not depend on the number of worker threads.

mod bounds;
mod coeffs;
mod family;
mod fast;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{e_frac, CharacterTable, CHARACTER_NORM_CAP};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianInt, ResidueSystem};

pub use bounds::{bound_t1, bound_t2, bound_t3, bound_t4, DEFAULT_EPSILON};
pub use coeffs::{disk_points, generate, CoeffKind, CoeffSpec, CoefficientSequence};
pub use family::{FamilyKind, ModuliFamily, Window};
pub use fast::{sieve_lhs_fast, twists_fast};

/// `e(j/m)` for `j = 0..m`.
pub(crate) struct PhaseTable {
    m: i64,
    values: Vec<Complex64>,
}

impl PhaseTable {
    pub(crate) fn new(m: i64) -> Self {
        Self { m, values: (0..m).map(|j| e_frac(j, m)).collect() }
    }

    fn get(&self, numerator: i64) -> Complex64 {
        self.values[numerator.rem_euclid(self.m) as usize]
    }
}

/// `T(q, r) = Σ_n a_n·e(Re(n·r·conj(q))/N(q))`.
pub fn inner_sum(q: GaussianInt, r: GaussianInt, coeffs: &CoefficientSequence) -> Result<Complex64> {
    if q.is_zero() {
        return Err(Error::ZeroModulus);
    }
    Ok(inner_sum_with(&PhaseTable::new(q.norm()), q, r, coeffs.entries()))
}

fn inner_sum_with(
    table: &PhaseTable,
    q: GaussianInt,
    r: GaussianInt,
    entries: &[(GaussianInt, Complex64)],
) -> Complex64 {
    // w = r·conj(q); Re(n·w) = s·Re(w) - t·Im(w)
    let w = r * q.conj();
    let (a, b) = (w.re % table.m, w.im % table.m);
    entries
        .iter()
        .map(|&(n, coeff)| coeff * table.get(n.re * a - n.im * b))
        .sum()
}

/// `Σ_{r reduced} |T(q, r)|²` for one modulus, summing `r` in residue-system order.
pub fn modulus_contribution(q: GaussianInt, coeffs: &CoefficientSequence) -> Result<f64> {
    let rs = ResidueSystem::new(q)?;
    let table = PhaseTable::new(q.norm());
    let entries: Vec<_> = coeffs.support().collect();
    Ok(rs.reduced().map(|r| inner_sum_with(&table, q, r, &entries).norm_sqr()).sum())
}

/// `Σ_{r mod q} |T(q, r)|²` over the full residue system.
pub fn full_residue_contribution(q: GaussianInt, coeffs: &CoefficientSequence) -> Result<f64> {
    let rs = ResidueSystem::new(q)?;
    let table = PhaseTable::new(q.norm());
    let entries: Vec<_> = coeffs.support().collect();
    Ok(rs
        .representatives()
        .iter()
        .map(|&r| inner_sum_with(&table, q, r, &entries).norm_sqr())
        .sum())
}

/// Coefficient mass per residue class mod `q`, `B_c = Σ_{n ≡ c (mod q)} a_n`,
/// indexed like `ResidueSystem::new(q).representatives()`.
pub fn class_aggregates(q: GaussianInt, coeffs: &CoefficientSequence) -> Result<Vec<Complex64>> {
    let rs = ResidueSystem::new(q)?;
    let mut out = vec![Complex64::new(0.0, 0.0); rs.len()];
    for (n, a) in coeffs.support() {
        out[rs.class_of(n)] += a;
    }
    Ok(out)
}

/// Per-modulus contributions, in the family's modulus order.
pub fn sieve_lhs_by_modulus(
    family: &ModuliFamily,
    coeffs: &CoefficientSequence,
) -> Vec<(GaussianInt, f64)> {
    let moduli = family.moduli();
    let parts: Vec<f64> = moduli
        .par_iter()
        .map(|&q| modulus_contribution(q, coeffs).expect("family moduli are nonzero"))
        .collect();
    moduli.into_iter().zip(parts).collect()
}

/// Direct evaluation of the sieve sum over a family window.
pub fn sieve_lhs(family: &ModuliFamily, coeffs: &CoefficientSequence) -> f64 {
    sieve_lhs_by_modulus(family, coeffs).into_iter().map(|(_, v)| v).sum()
}

/// Multiplicative-character sieve sum over the square-norm moduli in `window`:
///
/// `Σ_q (N(q)/Φ(q))·Σ_{χ proper} |Σ_n a_n χ(n)|²`,
///
/// with `χ(n) = 0` whenever `n` is not a unit modulo `q` and always `χ(0) = 0`.
/// The unit modulus has norm `1 = 1²` and is included unless `include_unit`
/// is false.
pub fn multiplicative_lhs(window: Window, coeffs: &CoefficientSequence, include_unit: bool) -> Result<f64> {
    let moduli: Vec<GaussianInt> = ModuliFamily::new(FamilyKind::SquareNorm, window)
        .moduli()
        .into_iter()
        .filter(|q| include_unit || !q.is_unit())
        .collect();
    if let Some(q) = moduli.iter().find(|q| q.norm() > CHARACTER_NORM_CAP) {
        return Err(Error::NormCap { norm: q.norm(), cap: CHARACTER_NORM_CAP });
    }
    let parts: Vec<f64> = moduli
        .par_iter()
        .map(|&q| multiplicative_contribution(q, coeffs))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

/// One modulus of [`multiplicative_lhs`], weight included.
pub fn multiplicative_contribution(q: GaussianInt, coeffs: &CoefficientSequence) -> Result<f64> {
    let table = CharacterTable::new(q)?;
    let group = &table.group;
    let exponent = group.exponent() as i64;
    let mut mass = vec![Complex64::new(0.0, 0.0); group.elements().len()];
    let elements = group.elements();
    for (n, a) in coeffs.support() {
        if n.is_zero() {
            continue;
        }
        if let Some(k) = group.element_index(n) {
            mass[k] += a;
        }
    }
    let mut total = 0.0;
    for chi in table.proper() {
        let mut s = Complex64::new(0.0, 0.0);
        for (k, &g) in elements.iter().enumerate() {
            if mass[k] != Complex64::new(0.0, 0.0) {
                let p = chi.phase(group, g)?.expect("unit") as i64;
                s += mass[k] * e_frac(p, exponent);
            }
        }
        total += s.norm_sqr();
    }
    Ok(q.norm() as f64 / group.order() as f64 * total)
}

/// One experiment row: a family window, coefficients, and the bounds it is compared to.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveRecord {
    pub family: String,
    pub q: f64,
    pub n: i64,
    pub coeff: String,
    pub mode: String,
    pub epsilon: f64,
    pub lhs: f64,
    pub z: f64,
    pub bound_t1: Option<f64>,
    pub bound_t2: Option<f64>,
    pub bound_t3: Option<f64>,
    pub bound_t4: Option<f64>,
    pub ratio_t1: Option<f64>,
    pub ratio_t2: Option<f64>,
    pub ratio_t3: Option<f64>,
    pub ratio_t4: Option<f64>,
    pub elapsed_ms: Option<u64>,
    /// Why a column was left empty, if one was.
    pub note: Option<String>,
}
