//! Transform-based evaluation of the sieve sum.
//!
//! The phase `Re(n·r·conj(q))/N(q)` of `T(q, r)` only sees `n` modulo `M = N(q)`
//! in each coordinate. Folding the coefficients onto the `M × M` torus,
//!
//! ```text
//! A[s mod M][t mod M] = Σ a_{s+ti},
//! ```
//!
//! gives `T(q, r) = F(Re w, -Im w)` with `w = r·conj(q)` and
//! `F(j1, j2) = Σ A[s][t]·e((s·j1 + t·j2)/M)`, a two-dimensional DFT of size
//! `M × M` that serves every twist `r` at once.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{CoefficientSequence, ModuliFamily};
use crate::characters::e_frac;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianInt, ResidueSystem};

/// `T(q, r)` for every reduced `r`, in residue-system order.
pub fn twists_fast(q: GaussianInt, coeffs: &CoefficientSequence) -> Result<Vec<(GaussianInt, Complex64)>> {
    if q.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let fft = FftPlanner::new().plan_fft_inverse(q.norm() as usize);
    Ok(NormGrid::new(q.norm(), coeffs, &fft).twists(q))
}

/// The part of the `M × M` transform that depends on `M` alone.
///
/// Holds the inverse DFT along `t` of every occupied row `s`. The second pass
/// along `s` is evaluated per modulus, only at the frequencies its reduced
/// residues read, so moduli of equal norm share one grid.
struct NormGrid {
    m: i64,
    occupied: Vec<usize>,
    rows: Vec<Complex64>,
    roots: Vec<Complex64>,
}

impl NormGrid {
    fn new(m: i64, coeffs: &CoefficientSequence, fft: &Arc<dyn Fft<f64>>) -> Self {
        let mu = m as usize;
        let mut slot = vec![usize::MAX; mu];
        let mut folded: Vec<(usize, usize, Complex64)> = Vec::new();
        // entries are sorted by (re, im), so t only needs a full reduction when re changes
        let (mut prev, mut s, mut t) = (GaussianInt::new(i64::MIN, 0), 0, 0);
        for (n, a) in coeffs.support() {
            if n.re != prev.re {
                s = n.re.rem_euclid(m) as usize;
                t = n.im.rem_euclid(m) as usize;
            } else {
                let step = (n.im - prev.im) as usize;
                t = if step < mu { t + step } else { t + step % mu };
                if t >= mu {
                    t -= mu;
                }
            }
            prev = n;
            slot[s] = 0;
            folded.push((s, t, a));
        }
        let mut occupied = Vec::new();
        for (s, k) in slot.iter_mut().enumerate() {
            if *k == 0 {
                *k = occupied.len();
                occupied.push(s);
            }
        }
        let mut rows = vec![Complex64::new(0.0, 0.0); occupied.len() * mu];
        for (s, t, a) in folded {
            rows[slot[s] * mu + t] += a;
        }
        if !rows.is_empty() {
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(&mut rows, &mut scratch);
        }
        let roots = (0..m).map(|k| e_frac(k, m)).collect();
        Self { m, occupied, rows, roots }
    }

    /// `F(j1, j2) = Σ_s rows[s][j2]·e(s·j1/M)`.
    fn at(&self, j1: usize, j2: usize) -> Complex64 {
        let mu = self.m as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        let (mut prev, mut idx) = (0, 0);
        for (s, row) in self.occupied.iter().zip(self.rows.chunks_exact(mu)) {
            let step = if s - prev == 1 { j1 } else { (s - prev) * j1 % mu };
            idx += step;
            if idx >= mu {
                idx -= mu;
            }
            prev = *s;
            acc += row[j2] * self.roots[idx];
        }
        acc
    }

    fn twists(&self, q: GaussianInt) -> Vec<(GaussianInt, Complex64)> {
        debug_assert_eq!(q.norm(), self.m);
        let m = self.m;
        let rs = ResidueSystem::new(q).expect("nonzero modulus");
        rs.reduced()
            .map(|r| {
                let w = r * q.conj();
                let j1 = w.re.rem_euclid(m) as usize;
                let j2 = (-w.im).rem_euclid(m) as usize;
                (r, self.at(j1, j2))
            })
            .collect()
    }
}

/// Same value as [`super::sieve_lhs`], computed through the per-norm 2-D DFT.
pub fn sieve_lhs_fast(family: &ModuliFamily, coeffs: &CoefficientSequence) -> f64 {
    let moduli = family.moduli();
    let groups: Vec<&[GaussianInt]> = moduli.chunk_by(|a, b| a.norm() == b.norm()).collect();
    let mut planner = FftPlanner::new();
    let plans: Vec<Arc<dyn Fft<f64>>> = groups.iter().map(|g| planner.plan_fft_inverse(g[0].norm() as usize)).collect();
    let parts: Vec<Vec<f64>> = groups
        .par_iter()
        .zip(plans.par_iter())
        .map(|(group, fft)| {
            let grid = NormGrid::new(group[0].norm(), coeffs, fft);
            group
                .iter()
                .map(|&q| grid.twists(q).into_iter().map(|(_, t)| t.norm_sqr()).sum())
                .collect()
        })
        .collect();
    parts.into_iter().flatten().sum()
}
