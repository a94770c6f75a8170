//! Single-threaded timing of the naive and transform-based sieve sums.

use std::time::Instant;

use gaussian_sieve::sieve::{generate, sieve_lhs, sieve_lhs_fast, CoeffSpec, FamilyKind, ModuliFamily, Window};

fn main() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let coeffs = generate(&CoeffSpec::RandomPhases { radius_sq: 400, seed: 1 }).unwrap();
    for window in [Window::new(0.0, 100.0), Window::new(50.0, 100.0)] {
        let fam = ModuliFamily::new(FamilyKind::AllGaussian, window);
        pool.install(|| {
            let t = Instant::now();
            let a = sieve_lhs(&fam, &coeffs);
            let naive = t.elapsed();
            let t = Instant::now();
            let b = sieve_lhs_fast(&fam, &coeffs);
            let fast = t.elapsed();
            println!(
                "{window:?}: naive {naive:?} fast {fast:?} speedup {:.1} rel {:.2e}",
                naive.as_secs_f64() / fast.as_secs_f64(),
                ((a - b) / a).abs()
            );
        });
    }
}
