use std::time::Instant;

use gaussian_sieve::sieve::{
    bound_t1, bound_t2, bound_t3, bound_t4, generate, multiplicative_lhs, sieve_lhs_fast, CoeffKind, FamilyKind,
    ModuliFamily, SieveRecord, Window,
};
use gaussian_sieve::characters::CHARACTER_NORM_CAP;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Mode};
use crate::HarnessError;

/// The norm windows a grid cell sums over.
pub fn cell_windows(kind: &FamilyKind, q: f64, mode: Mode) -> Vec<Window> {
    let cap = kind.norm_cap(q);
    match mode {
        Mode::Windowed => vec![Window::dyadic(cap)],
        Mode::Cumulative => Window::dyadic_cover(cap),
    }
}

fn ratio(lhs: f64, bound: Option<f64>) -> Option<f64> {
    bound.filter(|b| *b > 0.0).map(|b| lhs / b)
}

/// Evaluates one `(family, Q, N, coefficients)` cell. Failures that only
/// affect one column leave it empty and say why in `note`.
pub fn run_cell(kind: &FamilyKind, q: f64, n: i64, coeff: CoeffKind, config: &ExperimentConfig) -> Result<SieveRecord, HarnessError> {
    let start = Instant::now();
    let coeffs = generate(&coeff.spec(n, config.seed))?;
    let windows = cell_windows(kind, q, config.mode);
    let lhs: f64 = windows.iter().map(|&w| sieve_lhs_fast(&ModuliFamily::new(kind.clone(), w), &coeffs)).sum();
    let z = coeffs.energy();
    let (qf, nf, eps) = (q, n as f64, config.epsilon);
    let mut notes = Vec::new();

    // Every family is a set of Gaussian moduli below the norm cap.
    let t1 = Some(bound_t1(kind.norm_cap(q), nf, z));
    let t2 = matches!(kind, FamilyKind::NaturalIntegers).then(|| bound_t2(qf, nf, z));
    let (mut t3, mut t4, mut lhs4) = (None, None, None);
    if matches!(kind, FamilyKind::SquareNorm) {
        t3 = Some(bound_t3(qf, nf, z, eps)?);
        t4 = Some(bound_t4(qf, nf, z, eps)?);
        if kind.norm_cap(q) > CHARACTER_NORM_CAP as f64 {
            notes.push(format!("ratioT4 skipped: norms above {CHARACTER_NORM_CAP}"));
        } else {
            let mut total = 0.0;
            for &w in &windows {
                total += multiplicative_lhs(w, &coeffs, true)?;
            }
            lhs4 = Some(total);
        }
    }
    let ratio_t4 = match (lhs4, t4) {
        (Some(l), b) => ratio(l, b),
        _ => None,
    };
    let elapsed_ms = config.timings.then(|| start.elapsed().as_millis() as u64);
    Ok(SieveRecord {
        family: kind.label().to_string(),
        q,
        n,
        coeff: coeff.as_str().to_string(),
        mode: config.mode.as_str().to_string(),
        epsilon: eps,
        lhs,
        z,
        bound_t1: t1,
        bound_t2: t2,
        bound_t3: t3,
        bound_t4: t4,
        ratio_t1: ratio(lhs, t1),
        ratio_t2: ratio(lhs, t2),
        ratio_t3: ratio(lhs, t3),
        ratio_t4,
        elapsed_ms,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

/// One record per grid cell, sorted by `(family, Q, N, coeff)`.
pub fn run_sieve_grid(config: &ExperimentConfig) -> Result<Vec<SieveRecord>, HarnessError> {
    config.validate()?;
    let mut cells = Vec::new();
    for kind in config.family_kinds()? {
        for &q in &config.q_values {
            for &n in &config.n_values {
                for coeff in config.coeff_kinds()? {
                    cells.push((kind.clone(), q, n, coeff));
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let mut records: Vec<SieveRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|(kind, q, n, coeff)| run_cell(kind, *q, *n, *coeff, config))
            .collect::<Result<_, _>>()
    })?;
    records.sort_by(|a, b| {
        (a.family.as_str(), a.q, a.n, a.coeff.as_str())
            .partial_cmp(&(b.family.as_str(), b.q, b.n, b.coeff.as_str()))
            .expect("Q values are finite")
    });
    records.dedup_by(|a, b| (a.family.as_str(), a.q, a.n, a.coeff.as_str()) == (b.family.as_str(), b.q, b.n, b.coeff.as_str()));
    Ok(records)
}
