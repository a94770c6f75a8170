//! The Bombieri–Iwaniec double large sieve in dimension 1 or 2, with strict
//! box and proximity conditions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::e;
use crate::error::{Error, Result};
use crate::gaussian::ResidueSystem;
use crate::sieve::{inner_sum, CoefficientSequence, ModuliFamily};
use crate::spacing::centered_residue;

/// Slack on the right-hand side of [`check_dls`].
pub const DLS_SLACK: f64 = 1e-9;

/// A finite point set in `ℝᴷ` with complex weights.
pub type WeightedPoints = Vec<(Vec<f64>, Complex64)>;

#[derive(Clone, Debug)]
pub struct BilinearInstance {
    pub dim: usize,
    pub points_x: WeightedPoints,
    pub points_y: WeightedPoints,
    pub box_x: Vec<f64>,
    pub box_y: Vec<f64>,
}

impl BilinearInstance {
    pub fn new(dim: usize, points_x: WeightedPoints, points_y: WeightedPoints, box_x: Vec<f64>, box_y: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidInstance(format!("dimension {dim} not in {{1, 2}}")));
        }
        for b in box_x.iter().chain(&box_y) {
            if !(b.is_finite() && *b > 0.0) {
                return Err(Error::InvalidInstance(format!("box side {b} must be positive")));
            }
        }
        if box_x.len() != dim || box_y.len() != dim {
            return Err(Error::InvalidInstance("box has the wrong dimension".into()));
        }
        for (p, c) in points_x.iter().chain(&points_y) {
            if p.len() != dim || p.iter().any(|t| !t.is_finite()) || !c.is_finite() {
                return Err(Error::InvalidInstance(format!("bad point {p:?} with weight {c}")));
            }
        }
        Ok(Self { dim, points_x, points_y, box_x, box_y })
    }
}

fn in_box(p: &[f64], sides: &[f64]) -> bool {
    p.iter().zip(sides).all(|(t, s)| t.abs() < *s)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(s, t)| s * t).sum()
}

/// `Σ_x Σ_y a(x)·b(y)·e(x·y)` over points strictly inside their boxes.
pub fn bilinear_form(inst: &BilinearInstance) -> Complex64 {
    let ys: Vec<_> = inst.points_y.iter().filter(|(p, _)| in_box(p, &inst.box_y)).collect();
    let rows: Vec<Complex64> = inst
        .points_x
        .par_iter()
        .filter(|(p, _)| in_box(p, &inst.box_x))
        .map(|(x, a)| a * ys.iter().map(|(y, b)| b * e(dot(x, y))).sum::<Complex64>())
        .collect();
    rows.into_iter().sum()
}

/// `Σ_{y, y'} |b(y)·b(y')|` over ordered pairs with `|y_k − y'_k| < 1/(2X_k)` for every `k`.
pub fn proximity_form(points: &WeightedPoints, opposite_box: &[f64]) -> f64 {
    let reach: Vec<f64> = opposite_box.iter().map(|s| 0.5 / s).collect();
    let rows: Vec<f64> = points
        .par_iter()
        .map(|(y, b)| {
            let near: f64 = points
                .iter()
                .filter(|(z, _)| y.iter().zip(z).zip(&reach).all(|((s, t), w)| (s - t).abs() < *w))
                .map(|(_, c)| c.norm())
                .sum();
            b.norm() * near
        })
        .collect();
    rows.into_iter().sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DlsCheck {
    pub lhs_squared: f64,
    pub rhs: f64,
}

impl DlsCheck {
    pub fn holds(&self) -> bool {
        self.lhs_squared <= self.rhs * (1.0 + DLS_SLACK)
    }
}

/// Both sides of `|B(a,b)|² <= (2π²)^K·Π(1 + X_kY_k)·B(b;X)·B(a;Y)`.
pub fn check_dls(inst: &BilinearInstance) -> DlsCheck {
    let lhs_squared = bilinear_form(inst).norm_sqr();
    let boxes: f64 = inst.box_x.iter().zip(&inst.box_y).map(|(x, y)| 1.0 + x * y).product();
    let rhs = (2.0 * PI * PI).powi(inst.dim as i32)
        * boxes
        * proximity_form(&inst.points_y, &inst.box_x)
        * proximity_form(&inst.points_x, &inst.box_y);
    DlsCheck { lhs_squared, rhs }
}

/// The sieve sum as a bilinear form: `X` is the coefficient support, `Y` the
/// points `(f(Re w/N(q)), f(−Im w/N(q)))` with `w = r·conj(q)`, weighted by
/// `conj(T(q, r))`, and the boxes are `√N` and `1/2`.
///
/// Strict boxes drop lattice points with `|s| = √N` and f-points with a
/// coordinate `−1/2`, so the form can differ from the sieve sum itself.
pub fn sieve_instance(family: &ModuliFamily, coeffs: &CoefficientSequence) -> Result<BilinearInstance> {
    let points_x = coeffs.support().map(|(n, a)| (vec![n.re as f64, n.im as f64], a)).collect();
    let mut points_y = Vec::new();
    for q in family.moduli() {
        let m = q.norm();
        for r in ResidueSystem::new(q)?.reduced() {
            let w = r * q.conj();
            let f1 = centered_residue(w.re, m) as f64 / m as f64;
            let f2 = centered_residue(-w.im, m) as f64 / m as f64;
            points_y.push((vec![f1, f2], inner_sum(q, r, coeffs)?.conj()));
        }
    }
    let side = (coeffs.radius_sq() as f64).sqrt();
    BilinearInstance::new(2, points_x, points_y, vec![side; 2], vec![0.5; 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_forms() {
        let one = vec![(vec![0.0], c(1.0, 0.0))];
        let inst = BilinearInstance::new(1, one.clone(), one.clone(), vec![1.0], vec![1.0]).unwrap();
        assert_relative_eq!(bilinear_form(&inst).re, 1.0);
        let empty = BilinearInstance::new(1, one, vec![], vec![1.0], vec![1.0]).unwrap();
        assert_eq!(bilinear_form(&empty), c(0.0, 0.0));
    }

    #[test]
    fn two_point_expansion() {
        let xs = vec![(vec![0.3, -0.7], c(1.0, 2.0)), (vec![1.1, 0.4], c(-0.5, 0.25))];
        let ys = vec![(vec![0.2, 0.1], c(0.0, 1.0)), (vec![-0.45, 0.3], c(2.0, -1.0))];
        let inst = BilinearInstance::new(2, xs.clone(), ys.clone(), vec![2.0, 2.0], vec![1.0, 1.0]).unwrap();
        let mut want = c(0.0, 0.0);
        for (x, a) in &xs {
            for (y, b) in &ys {
                let phase = 2.0 * PI * (x[0] * y[0] + x[1] * y[1]);
                want += a * b * c(phase.cos(), phase.sin());
            }
        }
        assert!((bilinear_form(&inst) - want).norm() <= 1e-12);
    }

    #[test]
    fn boxes_are_strict() {
        let xs = vec![(vec![1.0], c(1.0, 0.0)), (vec![0.0], c(1.0, 0.0))];
        let ys = vec![(vec![0.5], c(1.0, 0.0))];
        let inst = BilinearInstance::new(1, xs, ys, vec![1.0], vec![1.0]).unwrap();
        assert_relative_eq!(bilinear_form(&inst).re, 1.0);
    }

    #[test]
    fn proximity_examples() {
        let one = vec![(vec![0.0, 0.0], c(3.0, 4.0))];
        assert_relative_eq!(proximity_form(&one, &[1.0, 1.0]), 25.0);
        let far = vec![(vec![0.0, 0.0], c(1.0, 0.0)), (vec![5.0, 0.0], c(0.0, 2.0))];
        assert_relative_eq!(proximity_form(&far, &[1.0, 1.0]), 5.0);
        // Exactly 1/(2X) apart is not near.
        let edge = vec![(vec![0.0], c(1.0, 0.0)), (vec![0.5], c(1.0, 0.0))];
        assert_relative_eq!(proximity_form(&edge, &[1.0]), 2.0);
        assert_relative_eq!(proximity_form(&edge, &[0.9]), 4.0);
    }

    #[test]
    fn single_point_check() {
        let xs = vec![(vec![0.2], c(2.0, 0.0))];
        let ys = vec![(vec![0.1], c(0.0, 3.0))];
        let d = check_dls(&BilinearInstance::new(1, xs, ys, vec![1.0], vec![1.0]).unwrap());
        assert_relative_eq!(d.lhs_squared, 36.0, epsilon = 1e-12);
        assert_relative_eq!(d.rhs, 2.0 * PI * PI * 2.0 * 9.0 * 4.0, epsilon = 1e-9);
        assert!(d.holds());
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(BilinearInstance::new(3, vec![], vec![], vec![1.0; 3], vec![1.0; 3]).is_err());
        assert!(BilinearInstance::new(1, vec![], vec![], vec![0.0], vec![1.0]).is_err());
        assert!(BilinearInstance::new(1, vec![(vec![f64::NAN], c(1.0, 0.0))], vec![], vec![1.0], vec![1.0]).is_err());
    }
}
