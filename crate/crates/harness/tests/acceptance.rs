//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p sieve-harness --release --test acceptance -- --nocapture`.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use gaussian_sieve::fourier::{
    congruence_bound_sweep, congruence_count, congruence_count_bound_check, congruence_count_structured,
    CongruenceCountInstance,
};
use gaussian_sieve::gaussian::{totient, ResidueSystem};
use gaussian_sieve::sieve::{generate, sieve_lhs, sieve_lhs_fast, CoeffSpec, FamilyKind, ModuliFamily, Window};
use gaussian_sieve::spacing::{distinct_points_in_disk, packing_bound, rational, SpacingInstance};
use gaussian_sieve::GaussianInt;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use sieve_harness::config::ExperimentConfig;
use sieve_harness::grid::run_sieve_grid;
use sieve_harness::report::Row;
use sieve_harness::slopes::{primary_ratio, slope_report};
use sieve_harness::verify::{self, Check};

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn all_passed(checks: &[Check], name: &str) -> (bool, usize) {
    let mine: Vec<_> = checks.iter().filter(|c| c.name == name).collect();
    (!mine.is_empty() && mine.iter().all(|c| c.passed), mine.len())
}

fn first_failure(checks: &[Check]) -> String {
    checks
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("; first failure {} {}: expected {}, got {}", c.name, c.instance, c.expected, c.got))
        .unwrap_or_default()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn spacing_and_identities() -> Vec<Outcome> {
    let (checks, took) = timed(|| verify::spacing_checks(40).unwrap());
    let (dichotomy, moduli) = all_passed(&checks, "spacing-dichotomy");
    let (identities, _) = all_passed(&checks, "kl-identities");
    vec![
        Outcome {
            id: 1,
            title: "spacing dichotomy, 2 <= N(q2) <= 40, coordinates in [-5, 5]",
            passed: dichotomy && took < Duration::from_secs(60),
            detail: format!("{moduli} moduli in {:.2}s{}", took.as_secs_f64(), first_failure(&checks)),
        },
        Outcome {
            id: 2,
            title: "k^2 + l^2 = N(r2)N(q2) and k - li = r2 conj(q2)",
            passed: identities,
            detail: format!("{moduli} moduli"),
        },
    ]
}

fn orthogonality() -> Outcome {
    let checks = verify::orthogonality_checks(100).unwrap();
    let (passed, n) = all_passed(&checks, "additive-orthogonality");
    Outcome { id: 3, title: "additive orthogonality, N(q) <= 100", passed, detail: format!("{n} moduli{}", first_failure(&checks)) }
}

fn delta_identity() -> Outcome {
    let delta = generate(&CoeffSpec::Delta { at: GaussianInt::new(2, -1), radius_sq: 10 }).unwrap();
    let mut worst = 0.0f64;
    for kind in [FamilyKind::AllGaussian, FamilyKind::NaturalIntegers, FamilyKind::SquareNorm] {
        let family = ModuliFamily::new(kind, Window::new(0.0, 200.0));
        let phi: u64 = family.moduli().iter().map(|&q| totient(q).unwrap()).sum();
        let lhs = sieve_lhs(&family, &delta);
        worst = worst.max(((lhs - phi as f64) / phi as f64).abs());
    }
    Outcome { id: 4, title: "delta identity, window cap 200, every family", passed: worst <= 1e-9, detail: format!("max rel error {worst:e}") }
}

fn fast_path() -> Outcome {
    let checks = verify::fastpath_checks(100, 400, 50, 7).unwrap();
    let (agree, n) = all_passed(&checks, "fastpath-agreement");
    let family = ModuliFamily::new(FamilyKind::AllGaussian, Window::new(0.0, 100.0));
    let coeffs = generate(&CoeffSpec::RandomPhases { radius_sq: 400, seed: 1 }).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (naive, fast) = pool.install(|| {
        let best = |f: &dyn Fn() -> f64| (0..3).map(|_| timed(f).1).min().unwrap();
        (best(&|| sieve_lhs(&family, &coeffs)), best(&|| sieve_lhs_fast(&family, &coeffs)))
    });
    let speedup = naive.as_secs_f64() / fast.as_secs_f64();
    Outcome {
        id: 5,
        title: "fast path agrees to 1e-6 on 50 instances and is >= 5x faster single-threaded",
        passed: agree && speedup >= 5.0,
        detail: format!("{n} instances; (0, 100], N = 400: direct {:.1}ms, fast {:.1}ms, {speedup:.1}x{}", naive.as_secs_f64() * 1e3, fast.as_secs_f64() * 1e3, first_failure(&checks)),
    }
}

fn gauss_sums() -> Outcome {
    let checks = verify::gauss_checks(60).unwrap();
    let (passed, n) = all_passed(&checks, "gauss-sum-modulus");
    Outcome { id: 6, title: "|tau(chi)|^2 = N(q) for proper chi, N(q) <= 60", passed, detail: format!("{n} moduli{}", first_failure(&checks)) }
}

fn double_large_sieve() -> Outcome {
    let checks = verify::dls_checks(20.0, 100, 2024).unwrap();
    let passed = checks.iter().all(|c| c.passed);
    let (_, random) = all_passed(&checks, "dls-random");
    Outcome {
        id: 7,
        title: "double large sieve: trivial, 100 random planar, sieve instance",
        passed,
        detail: format!("{} instances ({random} random){}", checks.len(), first_failure(&checks)),
    }
}

fn theta_and_poisson() -> Outcome {
    let mut checks = verify::theta_checks(2024).unwrap();
    checks.extend(verify::poisson_checks(20.0, 20, 5).unwrap());
    let (theta, nt) = all_passed(&checks, "theta-identity");
    let (poisson, np) = all_passed(&checks, "poisson-2d");
    Outcome {
        id: 8,
        title: "theta identity residual <= 1e-9, 2-D Poisson <= 1e-6 relative",
        passed: theta && poisson,
        detail: format!("{nt} theta cases, {np} Poisson instances{}", first_failure(&checks)),
    }
}

// Independent oracle: walks every (α, β) and tests divisibility of the difference.
fn count_oracle(u2: i64, x2: i64, y2: i64, gamma: i64, u: i64, v: i64) -> u64 {
    let mut hits = 0;
    for beta in -v..=v {
        for alpha in -u..=u {
            if (alpha * x2 - beta * y2 - gamma).rem_euclid(u2) == 0 {
                hits += 1;
            }
        }
    }
    hits
}

fn congruence_counts() -> Outcome {
    let mut rng = Pcg32::seed_from_u64(77);
    let mut mismatches = 0;
    let mut done = 0;
    while done < 200 {
        let u2 = rng.gen_range(1..=40);
        let (x2, y2, gamma) = (rng.gen_range(-60..=60), rng.gen_range(-60..=60), rng.gen_range(-80..=80));
        let (u, v) = (rng.gen_range(0..=20), rng.gen_range(0..=20));
        let Ok(inst) = CongruenceCountInstance::new(u2, x2, y2, gamma, u as f64, v as f64) else { continue };
        let want = count_oracle(u2, x2, y2, gamma, u, v);
        if congruence_count(&inst) != want || congruence_count_structured(&inst) != want || !congruence_count_bound_check(&inst) {
            mismatches += 1;
        }
        done += 1;
    }
    let sweep = congruence_bound_sweep(30, 15);
    Outcome {
        id: 9,
        title: "T_gamma matches oracle; bound holds for u2 <= 30, U, V <= 15",
        passed: mismatches == 0 && sweep.violations.is_empty(),
        detail: format!("{done} oracle instances, {mismatches} mismatches; sweep {} instances, {} violations", sweep.instances, sweep.violations.len()),
    }
}

fn packing() -> Outcome {
    let radii = [rational(1, 10), rational(1, 5), rational(2, 5)];
    let (mut cases, mut violations) = (0, 0);
    for q in 1..=20 {
        let window = ModuliFamily::dyadic(FamilyKind::AllGaussian, q as f64).moduli();
        for &q2 in &window {
            for r2 in ResidueSystem::new(q2).unwrap().reduced() {
                let inst = SpacingInstance::new(q2, r2).unwrap();
                for r in &radii {
                    let count = distinct_points_in_disk(&inst, &window, r).unwrap();
                    cases += 1;
                    if rational(count as i64, 1) > packing_bound(&inst, r) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        id: 10,
        title: "distinct f-points in D_R(0) <= 1 + 16 R^2 N(q2), Q <= 20",
        passed: violations == 0,
        detail: format!("{cases} cases, {violations} violations"),
    }
}

fn square_norm_audit() -> Outcome {
    let ((checks, sets), took) = timed(|| verify::coverage_checks(10_000).unwrap());
    Outcome {
        id: 11,
        title: "square-norm audit to 10^4: no extraneous, missing imprimitive, primitive covered",
        passed: checks.iter().all(|c| c.passed) && took < Duration::from_secs(30),
        detail: format!("{} missing, {} extraneous, {:.2}s{}", sets.missing.len(), sets.extraneous.len(), took.as_secs_f64(), first_failure(&checks)),
    }
}

fn ratio_slopes() -> Outcome {
    let config = ExperimentConfig {
        q_values: vec![2.0, 4.0, 8.0, 16.0],
        n_values: vec![4, 16, 64, 256, 1024],
        coeff_specs: vec!["random".into()],
        epsilon: 0.1,
        ..ExperimentConfig::default()
    };
    let (records, took) = timed(|| run_sieve_grid(&config).unwrap());
    let rows: Vec<Row> = records.iter().map(Row::from).collect();
    let fits = slope_report(&rows).unwrap();
    let mut parts = Vec::new();
    let mut passed = took < Duration::from_secs(600);
    for fit in fits.iter().filter(|f| f.column == primary_ratio(&f.family)) {
        passed &= fit.q_slope <= 0.1 && fit.n_slope <= 0.1;
        parts.push(format!("{} {}: Q {:+.3}, N {:+.3}", fit.family, fit.column, fit.q_slope, fit.n_slope));
    }
    Outcome {
        id: 12,
        title: "fitted log-log ratio slopes <= 0.1 in Q and N",
        passed: passed && parts.len() == 3,
        detail: format!("{} ({:.2}s)", parts.join("; "), took.as_secs_f64()),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    let grid = ExperimentConfig {
        q_values: vec![2.0, 4.0, 8.0],
        n_values: vec![4, 64, 256],
        coeff_specs: vec!["random".into(), "adversary".into()],
        seed: 42,
        ..ExperimentConfig::default()
    };
    fs::write(&config, serde_json::to_string(&grid).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "4", "8", "1"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_sieve"))
            .args(["run", "--config"])
            .arg(&config)
            .args(["--threads", threads, "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    Outcome {
        id: 13,
        title: "sieve run output byte-identical across runs and thread counts",
        passed: same,
        detail: format!("5 runs at 1, 2, 4, 8, 1 threads, {} bytes each", outputs[0].len()),
    }
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = spacing_and_identities();
    outcomes.push(orthogonality());
    outcomes.push(delta_identity());
    outcomes.push(fast_path());
    outcomes.push(gauss_sums());
    outcomes.push(double_large_sieve());
    outcomes.push(theta_and_poisson());
    outcomes.push(congruence_counts());
    outcomes.push(packing());
    outcomes.push(square_norm_audit());
    outcomes.push(ratio_slopes());
    outcomes.push(determinism());
    for o in &outcomes {
        println!("{} {:>2} {} :: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
