//! Verification suites behind `sieve verify`. Each returns a list of checks
//! with the instance, the expected value and what was found.

use std::f64::consts::TAU;

use clap::ValueEnum;
use gaussian_sieve::characters::{gauss_sum, orthogonality_sum, CharacterTable};
use gaussian_sieve::double_sieve::{check_dls, sieve_instance, BilinearInstance, WeightedPoints};
use gaussian_sieve::fourier::{
    pre_poisson_sum, theta_cutoff, theta_identity_check, weighted_lattice_sum, WeightFunction, TAIL_TOLERANCE,
};
use gaussian_sieve::gaussian::{canonical_in_annulus, GaussianInt, ResidueSystem};
use gaussian_sieve::sieve::{
    generate, sieve_lhs, sieve_lhs_fast, CoeffSpec, CoeffKind, FamilyKind, ModuliFamily, Window,
};
use gaussian_sieve::spacing::{verify_spacing_lemma, SpacingInstance};
use gaussian_sieve::square_norm::{content, coverage_diff, enumerate_pyth_param, enumerate_square_norm};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use serde::Serialize;

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spacing,
    Gauss,
    Dls,
    Coverage,
    Poisson,
    Fastpath,
}

impl Suite {
    /// Norm range a suite covers when `--max-norm` is not given.
    pub fn default_max_norm(self) -> i64 {
        match self {
            Self::Spacing => 40,
            Self::Gauss => 60,
            Self::Coverage => 25,
            Self::Fastpath => 100,
            Self::Dls | Self::Poisson => 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub instance: String,
    pub expected: String,
    pub got: String,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, instance: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), instance: instance.into(), expected: expected.into(), got: got.into(), passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageSets {
    #[serde(rename = "maxNorm")]
    pub max_norm: i64,
    pub missing: Vec<(i64, i64)>,
    pub extraneous: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageSets>,
}

pub fn run_verify_suite(suite: Suite, max_norm: Option<i64>) -> Result<VerifyReport, HarnessError> {
    let m = max_norm.unwrap_or_else(|| suite.default_max_norm());
    if m < 1 {
        return Err(HarnessError::Config(format!("--max-norm must be >= 1, got {m}")));
    }
    let mut coverage = None;
    let checks = match suite {
        Suite::Spacing => spacing_checks(m)?,
        Suite::Gauss => {
            let mut c = gauss_checks(m)?;
            c.extend(orthogonality_checks(m)?);
            c
        }
        Suite::Dls => dls_checks(m as f64, 100, 2024)?,
        Suite::Coverage => {
            let (c, sets) = coverage_checks(m)?;
            coverage = Some(sets);
            c
        }
        Suite::Poisson => {
            let mut c = theta_checks(2024)?;
            c.extend(poisson_checks(m as f64, 20, 5)?);
            c
        }
        Suite::Fastpath => fastpath_checks(m, 400, 50, 7)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { suite, passed, checks, coverage })
}

/// Spacing dichotomy on `[−5, 5]²` and the `k, l` identities, per modulus `2 <= N(q₂) <= max_norm`.
pub fn spacing_checks(max_norm: i64) -> Result<Vec<Check>, HarnessError> {
    let mut out = Vec::new();
    for q2 in canonical_in_annulus(1.0, max_norm as f64) {
        let mut violations = 0;
        let mut identity_failures = 0;
        for r2 in ResidueSystem::new(q2)?.reduced() {
            violations += verify_spacing_lemma(q2, r2, 5)?.len();
            let inst = SpacingInstance::new(q2, r2)?;
            let (k, l) = (inst.k, inst.l);
            if k * k + l * l != r2.norm() * q2.norm() || GaussianInt::new(k, -l) != r2 * q2.conj() {
                identity_failures += 1;
            }
        }
        out.push(Check::new("spacing-dichotomy", format!("q2={q2}"), "0 violations", format!("{violations} violations"), violations == 0));
        out.push(Check::new(
            "kl-identities",
            format!("q2={q2}"),
            "0 failures",
            format!("{identity_failures} failures"),
            identity_failures == 0,
        ));
    }
    Ok(out)
}

/// `|τ(χ)|² = N(q)` to `1e-6` for every proper character, per modulus.
pub fn gauss_checks(max_norm: i64) -> Result<Vec<Check>, HarnessError> {
    let mut out = Vec::new();
    for q in canonical_in_annulus(0.0, max_norm as f64) {
        let table = CharacterTable::new(q)?;
        let mut worst = 0.0f64;
        let mut count = 0;
        for chi in table.proper() {
            let tau = gauss_sum(&table.group, chi)?;
            worst = worst.max((tau.norm_sqr() - q.norm() as f64).abs());
            count += 1;
        }
        out.push(Check::new(
            "gauss-sum-modulus",
            format!("q={q} ({count} proper)"),
            format!("|tau|^2 = {} within 1e-6", q.norm()),
            format!("max deviation {worst:e}"),
            worst <= 1e-6,
        ));
    }
    Ok(out)
}

/// `Σ_{r mod q} e(Re(m·r/q)) = N(q)·[q | m]` to `1e-9`, for `m` in `[−6, 6]²`
/// and a few multiples of `q`.
pub fn orthogonality_checks(max_norm: i64) -> Result<Vec<Check>, HarnessError> {
    let mut out = Vec::new();
    for q in canonical_in_annulus(0.0, max_norm as f64) {
        let mut ms: Vec<GaussianInt> = (-6..=6).flat_map(|a| (-6..=6).map(move |b| GaussianInt::new(a, b))).collect();
        ms.extend([GaussianInt::new(2, -1), GaussianInt::new(1, 3), GaussianInt::new(-4, 0)].map(|w| q * w));
        let mut worst = 0.0f64;
        for m in ms {
            let want = if m.is_divisible_by(q) { q.norm() as f64 } else { 0.0 };
            worst = worst.max((orthogonality_sum(q, m)? - Complex64::new(want, 0.0)).norm());
        }
        out.push(Check::new("additive-orthogonality", format!("q={q}"), "N(q)*[q|m] within 1e-9", format!("max error {worst:e}"), worst <= 1e-9));
    }
    Ok(out)
}

fn random_points(rng: &mut Pcg32, spread: f64) -> WeightedPoints {
    let count = rng.gen_range(1..=50);
    (0..count)
        .map(|_| {
            let p = vec![rng.gen_range(-spread..=spread), rng.gen_range(-spread..=spread)];
            (p, Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
        })
        .collect()
}

fn dls_check(name: &str, instance: String, inst: &BilinearInstance) -> Check {
    let d = check_dls(inst);
    Check::new(name, instance, format!("|B|^2 <= {:e}", d.rhs), format!("{:e}", d.lhs_squared), d.holds())
}

/// The trivial case, `count` seeded planar instances, and the sieve's own
/// instance for all Gaussian moduli with `Q/2 < N(q) <= Q` and `N = 40`.
pub fn dls_checks(q: f64, count: usize, seed: u64) -> Result<Vec<Check>, HarnessError> {
    let one = vec![(vec![0.0], Complex64::new(1.0, 0.0))];
    let trivial = BilinearInstance::new(1, one.clone(), one, vec![1.0], vec![1.0])?;
    let mut out = vec![dls_check("dls-trivial", "x=y=0".into(), &trivial)];
    let mut rng = Pcg32::seed_from_u64(seed);
    for trial in 0..count {
        let xs = random_points(&mut rng, 2.0);
        let ys = random_points(&mut rng, 2.0);
        let bx = vec![rng.gen_range(0.25..=3.0), rng.gen_range(0.25..=3.0)];
        let by = vec![rng.gen_range(0.25..=3.0), rng.gen_range(0.25..=3.0)];
        let inst = BilinearInstance::new(2, xs, ys, bx, by)?;
        out.push(dls_check("dls-random", format!("seed={seed} trial={trial}"), &inst));
    }
    let family = ModuliFamily::dyadic(FamilyKind::AllGaussian, q);
    let coeffs = generate(&CoeffSpec::RandomPhases { radius_sq: 40, seed })?;
    out.push(dls_check("dls-sieve-instance", format!("all Q={q} N=40"), &sieve_instance(&family, &coeffs)?));
    Ok(out)
}

pub fn coverage_checks(max_norm: i64) -> Result<(Vec<Check>, CoverageSets), HarnessError> {
    let diff = coverage_diff(max_norm)?;
    let param = enumerate_pyth_param(max_norm)?;
    let uncovered: Vec<_> = enumerate_square_norm(max_norm)?
        .into_iter()
        .filter(|&q| content(q) == 1 && !param.contains(&q))
        .collect();
    let primitive_missing: Vec<_> = diff.missing.iter().filter(|&&q| content(q) == 1).collect();
    let inst = format!("maxNorm={max_norm}");
    let checks = vec![
        Check::new("extraneous-empty", inst.clone(), "0", diff.extraneous.len().to_string(), diff.extraneous.is_empty()),
        Check::new(
            "missing-imprimitive",
            inst.clone(),
            "gcd(u,v) > 1 for all missing",
            format!("{} of {} primitive", primitive_missing.len(), diff.missing.len()),
            primitive_missing.is_empty(),
        ),
        Check::new("primitive-covered", inst, "0 uncovered", format!("{} uncovered", uncovered.len()), uncovered.is_empty()),
    ];
    let pairs = |v: &[GaussianInt]| v.iter().map(|q| (q.re, q.im)).collect();
    let sets = CoverageSets { max_norm, missing: pairs(&diff.missing), extraneous: pairs(&diff.extraneous) };
    Ok((checks, sets))
}

/// Theta identity for `Q' ∈ {1, 2, 5, 10}` and `θ ∈ {0, ±1/4, ±1/2}` plus 20 seeded values.
pub fn theta_checks(seed: u64) -> Result<Vec<Check>, HarnessError> {
    let mut rng = Pcg32::seed_from_u64(seed);
    let mut thetas = vec![0.0, 0.25, -0.25, 0.5, -0.5];
    thetas.extend((0..20).map(|_| rng.gen_range(-0.5..=0.5)));
    let mut out = Vec::new();
    for qp in [1.0, 2.0, 5.0, 10.0] {
        let cutoff = theta_cutoff(qp, TAIL_TOLERANCE);
        for &theta in &thetas {
            let t = theta_identity_check(qp, theta, cutoff)?;
            out.push(Check::new("theta-identity", format!("Q'={qp} theta={theta}"), "residual <= 1e-9", format!("{:e}", t.residual), t.residual <= 1e-9));
        }
    }
    Ok(out)
}

/// Weighted lattice sums before and after Poisson summation, `count` seeded
/// instances with moduli of norm at most `max_q`.
pub fn poisson_checks(max_q: f64, count: usize, seed: u64) -> Result<Vec<Check>, HarnessError> {
    let mut rng = Pcg32::seed_from_u64(seed);
    let kinds = [FamilyKind::AllGaussian, FamilyKind::NaturalIntegers, FamilyKind::SquareNorm];
    let mut out = Vec::new();
    for trial in 0..count {
        let q = rng.gen_range(2.0..=max_q.max(2.0)).floor();
        let moduli = ModuliFamily::dyadic(FamilyKind::AllGaussian, q).moduli();
        let q2 = moduli[rng.gen_range(0..moduli.len())];
        let reduced: Vec<_> = ResidueSystem::new(q2)?.reduced().collect();
        let r2 = reduced[rng.gen_range(0..reduced.len())];
        let inst = SpacingInstance::new(q2, r2)?;
        let kind = &kinds[trial % 3];
        let weight = if trial % 2 == 0 { WeightFunction::ExpLinear } else { WeightFunction::ExpSqrt };
        let scale = rng.gen_range(0.01..0.24);
        let post = weighted_lattice_sum(&inst, kind, weight, q, scale)?;
        let pre = pre_poisson_sum(&inst, kind, weight, q, scale)?;
        let rel = ((post.value - pre.value) / pre.value).abs();
        out.push(Check::new(
            "poisson-2d",
            format!("{kind} {weight:?} Q={q} q2={q2} r2={r2} scale={scale:.4}"),
            format!("{:.12e}", pre.value),
            format!("{:.12e} (rel {rel:e})", post.value),
            rel <= 1e-6,
        ));
    }
    Ok(out)
}

/// A seeded random fast-path instance: a family window inside `(0, max_norm]`
/// and random phases on `N(n) <= N`.
pub fn fastpath_instance(rng: &mut Pcg32, max_norm: i64, max_n: i64) -> (ModuliFamily, CoeffSpec) {
    let kinds = [FamilyKind::AllGaussian, FamilyKind::NaturalIntegers, FamilyKind::SquareNorm];
    let kind = kinds[rng.gen_range(0..3)].clone();
    let hi = rng.gen_range(2..=max_norm.max(2)) as f64;
    let lo = if rng.gen_bool(0.5) { 0.0 } else { hi / 2.0 };
    let n = rng.gen_range(1..=max_n);
    let spec = CoeffKind::Random.spec(n, rng.gen());
    (ModuliFamily::new(kind, Window::new(lo, hi)), spec)
}

/// Fast and direct sieve sums agree to `1e-6` relative.
pub fn fastpath_checks(max_norm: i64, max_n: i64, count: usize, seed: u64) -> Result<Vec<Check>, HarnessError> {
    let mut rng = Pcg32::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let (family, spec) = fastpath_instance(&mut rng, max_norm, max_n);
        let coeffs = generate(&spec)?;
        let naive = sieve_lhs(&family, &coeffs);
        let fast = sieve_lhs_fast(&family, &coeffs);
        let rel = if naive == 0.0 { fast.abs() } else { ((fast - naive) / naive).abs() };
        out.push(Check::new(
            "fastpath-agreement",
            format!("{} ({}, {}] N={}", family.kind, family.window.low_exclusive, family.window.high_inclusive, spec.radius_sq()),
            format!("{naive:.12e}"),
            format!("{fast:.12e} (rel {rel:e})"),
            rel <= 1e-6,
        ));
    }
    Ok(out)
}
