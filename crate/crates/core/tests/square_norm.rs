use gaussian_sieve::gaussian::{is_perfect_square, GaussianInt};
use gaussian_sieve::sieve::{FamilyKind, ModuliFamily, Window};
use gaussian_sieve::square_norm::*;

#[test]
fn parametrization_is_sound() {
    for m in -18i64..=18 {
        for n in -18i64..=18 {
            let h = m * m + n * n;
            if h == 0 || h > 300 {
                continue;
            }
            let q = pyth_param(m, n);
            assert_eq!(q.norm(), h * h, "m={m} n={n}");
            assert!(is_perfect_square(q.norm()));
        }
    }
}

#[test]
fn primitive_moduli_are_covered() {
    let param = enumerate_pyth_param(10_000).unwrap();
    let primitive: Vec<_> = enumerate_square_norm(10_000).unwrap().into_iter().filter(|&q| content(q) == 1).collect();
    assert!(primitive.len() > 10);
    for q in primitive {
        assert!(param.binary_search_by_key(&(q.norm(), q.re, q.im), |g| (g.norm(), g.re, g.im)).is_ok(), "{q}");
    }
}

#[test]
fn missing_moduli_are_imprimitive() {
    let diff = coverage_diff(10_000).unwrap();
    assert!(diff.extraneous.is_empty(), "{:?}", diff.extraneous);
    assert!(!diff.missing.is_empty());
    for q in &diff.missing {
        assert!(content(*q) > 1, "{q}");
    }
    // Rational integers that are not a square or twice a square, and odd multiples like 3(3+4i).
    for q in [GaussianInt::new(3, 0), GaussianInt::new(5, 0), GaussianInt::new(6, 0), GaussianInt::new(9, 12)] {
        assert!(diff.missing.contains(&q), "{q}");
    }
    for q in [GaussianInt::new(4, 0), GaussianInt::new(8, 0), GaussianInt::new(6, 8)] {
        assert!(!diff.missing.contains(&q), "{q}");
    }
}

#[test]
fn family_uses_the_scan() {
    for cap in [1i64, 4, 25, 100, 2_500, 10_000] {
        let family = ModuliFamily::new(FamilyKind::SquareNorm, Window::new(0.0, cap as f64)).moduli();
        assert_eq!(family, enumerate_square_norm(cap).unwrap(), "cap {cap}");
    }
}
