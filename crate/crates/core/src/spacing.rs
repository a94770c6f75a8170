//! Exact spacing of the points `P(u, v) = (f((uk+vl)/N(q₂)), f((−vk+ul)/N(q₂)))`.
//!
//! Here `f(z) = {z + 1/2} − 1/2` is the signed fractional part, with range
//! `[−1/2, 1/2)`, and `k = x₂u₂ + y₂v₂`, `l = x₂v₂ − y₂u₂` come from a
//! modulus `q₂ = u₂ + v₂i` and a twist `r₂ = x₂ + y₂i` coprime to it.
//!
//! Every coordinate of `P(u, v)` is a rational with denominator dividing
//! `N(q₂)`. The public surface works in [`ExactRational`]; the exhaustive
//! scans compare integer numerators over that common denominator, which is the
//! same exact arithmetic without a heap allocation per operation.
//!
//! Two explicit constants stand in for the `≪` of the counting argument.
//!
//! * Packing, `1 + 16·R²·N(q₂)`. Distinct points are at distance at least
//!   `1/√N(q₂)` apart, so open disks of radius `ρ = 1/(2√N(q₂))` around them
//!   are disjoint. If `R < ρ` the disk `D_R(0)` holds at most one point.
//!   Otherwise those small disks lie in `D_{R+ρ}(0) ⊆ D_{2R}(0)`, and comparing
//!   areas gives at most `(2R/ρ)² = 16·R²·N(q₂)` points.
//! * Multiplicity, `4L + 4`. The canonical `q̃` with `N(q̃) <= LQ` in one class
//!   mod `q₂` are points of a square lattice of covolume `s² = N(q₂) > Q/2`
//!   inside the quarter disk `K` of radius `ρ = √(LQ)`. Cells of side `s`
//!   around them are disjoint and lie in the `s/√2`-neighborhood of `K`, whose
//!   area is at most `πρ²/4 + (2 + π/2)·ρ·s/√2 + π·s²/2`. Dividing by `s²` and
//!   using `(ρ/s)² < 2L` gives fewer than `πL/2 + 3.58·√L + π/2 <= 4L + 4`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::gaussian::{residue_key, GaussianInt};
use crate::sieve::{ModuliFamily, Window};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactRational = BigRational;

pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `f(z) = {z + 1/2} − 1/2 = z − ⌊z + 1/2⌋`.
pub fn frac_f(z: &ExactRational) -> ExactRational {
    let half = rational(1, 2);
    z - (z + half).floor()
}

/// Distance from `z` to the nearest integer.
pub fn dist_to_int(z: &ExactRational) -> ExactRational {
    frac_f(z).abs()
}

/// The `c ≡ a (mod m)` with `−m/2 <= c < m/2`, so that `f(a/m) = c/m`.
pub fn centered_residue(a: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    a - m * (2 * a + m).div_euclid(2 * m)
}

/// `(k, l)` with `k − l·i = r₂·conj(q₂)`.
pub fn kl_pair(q2: GaussianInt, r2: GaussianInt) -> Result<(i64, i64)> {
    SpacingInstance::new(q2, r2).map(|inst| (inst.k, inst.l))
}

/// A modulus `q₂`, a twist `r₂` coprime to it, and the derived `(k, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpacingInstance {
    pub q2: GaussianInt,
    pub r2: GaussianInt,
    pub k: i64,
    pub l: i64,
}

impl SpacingInstance {
    pub fn new(q2: GaussianInt, r2: GaussianInt) -> Result<Self> {
        if q2.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if !r2.is_coprime(q2) {
            return Err(Error::NotCoprime(r2.to_string(), q2.to_string()));
        }
        let (u2, v2, x2, y2) = (q2.re, q2.im, r2.re, r2.im);
        Ok(Self { q2, r2, k: x2 * u2 + y2 * v2, l: x2 * v2 - y2 * u2 })
    }

    /// `N(q₂)`, the common denominator of every coordinate.
    pub fn denominator(&self) -> i64 {
        self.q2.norm()
    }

    /// Unreduced numerators `(uk + vl, −vk + ul)`.
    pub fn arguments(&self, u: i64, v: i64) -> (i64, i64) {
        (u * self.k + v * self.l, -v * self.k + u * self.l)
    }

    /// Numerators of `P(u, v)` over `N(q₂)`.
    pub fn f_numerators(&self, u: i64, v: i64) -> (i64, i64) {
        let m = self.denominator();
        let (a, b) = self.arguments(u, v);
        (centered_residue(a, m), centered_residue(b, m))
    }

    /// `P(u, v)`, evaluated through [`frac_f`].
    pub fn f_point(&self, u: i64, v: i64) -> (ExactRational, ExactRational) {
        let m = self.denominator();
        let (a, b) = self.arguments(u, v);
        (frac_f(&rational(a, m)), frac_f(&rational(b, m)))
    }
}

/// `|P(u, v) − P(ũ, ṽ)|²`.
pub fn spacing_distance_sq(inst: &SpacingInstance, a: (i64, i64), b: (i64, i64)) -> ExactRational {
    let (p1, p2) = inst.f_point(a.0, a.1);
    let (t1, t2) = inst.f_point(b.0, b.1);
    let d1 = p1 - t1;
    let d2 = p2 - t2;
    &d1 * &d1 + &d2 * &d2
}

/// A pair of coordinates on which the spacing dichotomy failed.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacingViolation {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub divisible: bool,
    pub distance_sq: ExactRational,
}

/// Checks every `u, v, ũ, ṽ ∈ [−B, B]`: the squared distance is `0` exactly
/// when `q₂` divides `(u − ũ) + (v − ṽ)i`, and at least `1/N(q₂)` otherwise.
pub fn verify_spacing_lemma(q2: GaussianInt, r2: GaussianInt, bound: i64) -> Result<Vec<SpacingViolation>> {
    let inst = SpacingInstance::new(q2, r2)?;
    let m = inst.denominator() as i128;
    let coords: Vec<(i64, i64)> = (-bound..=bound).flat_map(|u| (-bound..=bound).map(move |v| (u, v))).collect();
    let points: Vec<(i64, i64)> = coords.iter().map(|&(u, v)| inst.f_numerators(u, v)).collect();
    let mut out = Vec::new();
    for (i, &a) in coords.iter().enumerate() {
        for (j, &b) in coords.iter().enumerate() {
            let d1 = (points[i].0 - points[j].0) as i128;
            let d2 = (points[i].1 - points[j].1) as i128;
            // distance² · N(q₂)²
            let scaled = d1 * d1 + d2 * d2;
            let divisible = GaussianInt::new(a.0 - b.0, a.1 - b.1).is_divisible_by(q2);
            let ok = if divisible { scaled == 0 } else { scaled >= m };
            if !ok {
                out.push(SpacingViolation { a, b, divisible, distance_sq: spacing_distance_sq(&inst, a, b) });
            }
        }
    }
    Ok(out)
}

/// Integers `a, b` and the shifted pair `x′ = x + a·u + b·v`, `y′ = y + a·v − b·u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueShift {
    pub a: i64,
    pub b: i64,
    pub x: i64,
    pub y: i64,
}

/// Moves `(x, y)` by multiples of `q₁` so that both coordinates of
/// `((xu+yv)/N(q₁), (xv−yu)/N(q₁))` sit as close to `target` as possible.
pub fn residue_shift(q1: GaussianInt, xy: (i64, i64), target: (&ExactRational, &ExactRational)) -> Result<ResidueShift> {
    if q1.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let (u, v, m) = (q1.re, q1.im, q1.norm());
    let (x, y) = xy;
    let p1 = rational(x * u + y * v, m);
    let p2 = rational(x * v - y * u, m);
    let a = nearest_int(&(target.0 - p1))?;
    let b = nearest_int(&(target.1 - p2))?;
    Ok(ResidueShift { a, b, x: x + a * u + b * v, y: y + a * v - b * u })
}

fn nearest_int(z: &ExactRational) -> Result<i64> {
    let n = (z + rational(1, 2)).floor().to_integer();
    i64::try_from(n).map_err(|_| Error::OutOfRange(format!("shift {z} does not fit in i64")))
}

/// `M(u, v) = [[u, v], [−v, u]]`.
pub fn rotation_matrix(u: i64, v: i64) -> Result<[[i64; 2]; 2]> {
    if u == 0 && v == 0 {
        return Err(Error::ZeroInput);
    }
    Ok([[u, v], [-v, u]])
}

/// `Mᵀ·M`.
pub fn gram(m: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut g = [[0; 2]; 2];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = m[0][i] * m[0][j] + m[1][i] * m[1][j];
        }
    }
    g
}

fn check_radius(r: &ExactRational) -> Result<()> {
    if r.is_positive() && *r < rational(1, 2) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("radius must lie in (0, 1/2), got {r}")))
    }
}

/// Whether `P(u, v)` lies in the closed disk `D_R(0)`.
pub fn f_point_in_disk(inst: &SpacingInstance, uv: (i64, i64), r: &ExactRational) -> Result<bool> {
    check_radius(r)?;
    let (f1, f2) = inst.f_point(uv.0, uv.1);
    Ok(&f1 * &f1 + &f2 * &f2 <= r * r)
}

/// Counts `q` of a family with `N(q) <= L·Q` whose point `P(q)` lies in `D_R(0)`.
///
/// `Q` is the upper end of the family's window; the lower end is ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskCountQuery {
    pub instance: SpacingInstance,
    pub family: ModuliFamily,
    pub l: f64,
    pub r: ExactRational,
}

pub fn disk_point_count(query: &DiskCountQuery) -> Result<usize> {
    check_radius(&query.r)?;
    if !(query.l >= 1.0) {
        return Err(Error::OutOfRange(format!("L must be at least 1, got {}", query.l)));
    }
    let cap = query.l * query.family.window.high_inclusive;
    let moduli = ModuliFamily::new(query.family.kind.clone(), Window::new(0.0, cap)).moduli();
    let mut count = 0;
    for q in moduli {
        if f_point_in_disk(&query.instance, (q.re, q.im), &query.r)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of distinct points `P(q)` in `D_R(0)` as `q` runs over `moduli`.
pub fn distinct_points_in_disk(inst: &SpacingInstance, moduli: &[GaussianInt], r: &ExactRational) -> Result<usize> {
    check_radius(r)?;
    let mut seen = BTreeSet::new();
    for q in moduli {
        if f_point_in_disk(inst, (q.re, q.im), r)? {
            seen.insert(inst.f_numerators(q.re, q.im));
        }
    }
    Ok(seen.len())
}

/// `1 + 16·R²·N(q₂)`.
pub fn packing_bound(inst: &SpacingInstance, r: &ExactRational) -> ExactRational {
    ExactRational::one() + rational(16 * inst.denominator(), 1) * r * r
}

/// Largest number of canonical moduli from `moduli` sharing one class mod `q₂`.
pub fn class_multiplicity(q2: GaussianInt, moduli: &[GaussianInt]) -> usize {
    let mut keys: Vec<(i64, i64)> = moduli.iter().map(|&q| residue_key(q, q2)).collect();
    keys.sort_unstable();
    keys.chunk_by(|a, b| a == b).map(<[_]>::len).max().unwrap_or(0)
}

/// `4L + 4`.
pub fn multiplicity_bound(l: u32) -> usize {
    4 * l as usize + 4
}

/// Both sides of the switch of lattices, over `ℒ`-parameters `|x̃|, |ỹ| <= W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwitchCounts {
    /// `Σ_{ℒ-points p} #{z ∈ ℤ² : |z − p| <= R}`.
    pub integer_near_lattice: usize,
    /// `Σ_{z ∈ ℤ²} #{ℒ-points p : |p − z| <= R}`.
    pub lattice_near_integer: usize,
    /// Whether each `ℒ`-point has exactly `[P ∈ D_R(0)]` integer neighbours.
    pub matches_f_points: bool,
}

impl SwitchCounts {
    pub fn holds(&self) -> bool {
        self.integer_near_lattice == self.lattice_near_integer && self.matches_f_points
    }
}

pub fn switch_lattice_counts(inst: &SpacingInstance, w: i64, r: &ExactRational) -> Result<SwitchCounts> {
    check_radius(r)?;
    let m = inst.denominator() as i128;
    let (rn, rd) = small_fraction(r)?;
    // |(a, b)/m − z|² <= R², cleared of denominators
    let near = |a: i64, b: i64, x: i64, y: i64| {
        let dx = a as i128 - x as i128 * m;
        let dy = b as i128 - y as i128 * m;
        (dx * dx + dy * dy) * rd * rd <= rn * rn * m * m
    };
    let params: Vec<(i64, i64)> = (-w..=w).flat_map(|s| (-w..=w).map(move |t| (s, t))).collect();
    let points: Vec<(i64, i64)> = params.iter().map(|&(s, t)| inst.arguments(s, t)).collect();
    let md = m as i64;

    let mut integer_near_lattice = 0;
    let mut matches_f_points = true;
    for (&(s, t), &(a, b)) in params.iter().zip(&points) {
        let mut here = 0;
        for x in a.div_euclid(md) - 1..=a.div_euclid(md) + 2 {
            for y in b.div_euclid(md) - 1..=b.div_euclid(md) + 2 {
                if near(a, b, x, y) {
                    here += 1;
                }
            }
        }
        integer_near_lattice += here;
        let inside = f_point_in_disk(inst, (s, t), r)?;
        matches_f_points &= here == usize::from(inside);
    }

    let lo_x = points.iter().map(|p| p.0.div_euclid(md)).min().unwrap_or(0) - 1;
    let hi_x = points.iter().map(|p| p.0.div_euclid(md)).max().unwrap_or(0) + 2;
    let lo_y = points.iter().map(|p| p.1.div_euclid(md)).min().unwrap_or(0) - 1;
    let hi_y = points.iter().map(|p| p.1.div_euclid(md)).max().unwrap_or(0) + 2;
    let mut lattice_near_integer = 0;
    for x in lo_x..=hi_x {
        for y in lo_y..=hi_y {
            lattice_near_integer += points.iter().filter(|&&(a, b)| near(a, b, x, y)).count();
        }
    }
    Ok(SwitchCounts { integer_near_lattice, lattice_near_integer, matches_f_points })
}

/// Whether the two counts of [`switch_lattice_counts`] agree.
pub fn switch_lattice_check(inst: &SpacingInstance, w: i64, r: &ExactRational) -> Result<bool> {
    switch_lattice_counts(inst, w, r).map(|c| c.holds())
}

fn small_fraction(r: &ExactRational) -> Result<(i128, i128)> {
    let conv = |n: &BigInt| {
        i64::try_from(n.clone())
            .map(i128::from)
            .map_err(|_| Error::OutOfRange(format!("radius {r} needs a denominator below 2^63")))
    };
    Ok((conv(r.numer())?, conv(r.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::ResidueSystem;
    use crate::sieve::FamilyKind;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn f_examples() {
        assert_eq!(frac_f(&rational(0, 1)), rational(0, 1));
        assert_eq!(frac_f(&rational(3, 4)), rational(-1, 4));
        assert_eq!(frac_f(&rational(1, 2)), rational(-1, 2));
        assert_eq!(frac_f(&rational(-1, 2)), rational(-1, 2));
        assert_eq!(frac_f(&rational(7, 3)), rational(1, 3));
        for a in -40..40 {
            for m in 1..12 {
                assert_eq!(rational(centered_residue(a, m), m), frac_f(&rational(a, m)), "{a}/{m}");
            }
        }
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_pair(g(2, 1), g(1, 0)).unwrap(), (2, 1));
        assert_eq!(kl_pair(g(1, 0), g(1, 0)).unwrap(), (1, 0));
        assert!(matches!(kl_pair(g(2, 1), g(0, 0)), Err(Error::NotCoprime(..))));
        assert_eq!(kl_pair(g(0, 0), g(1, 0)), Err(Error::ZeroModulus));
        assert_eq!(kl_pair(g(1, 0), g(0, 0)).unwrap(), (0, 0));
    }

    #[test]
    fn distance_examples() {
        let inst = SpacingInstance::new(g(2, 1), g(1, 0)).unwrap();
        assert_eq!(spacing_distance_sq(&inst, (1, 0), (0, 0)), rational(1, 5));
        assert_eq!(spacing_distance_sq(&inst, (1, 1), (0, 0)), rational(1, 5));
        assert_eq!(spacing_distance_sq(&inst, (3, 1), (1, 0)), rational(0, 1));
    }

    #[test]
    fn spacing_lemma_examples() {
        assert!(verify_spacing_lemma(g(2, 1), g(1, 0), 5).unwrap().is_empty());
        assert!(verify_spacing_lemma(g(1, 1), g(1, 0), 4).unwrap().is_empty());
        assert!(verify_spacing_lemma(g(3, 0), g(1, 1), 4).unwrap().is_empty());
    }

    #[test]
    fn integer_and_rational_distances_agree() {
        for q2 in [g(2, 1), g(3, 0), g(4, 1), g(1, 1)] {
            for r2 in ResidueSystem::new(q2).unwrap().reduced() {
                let inst = SpacingInstance::new(q2, r2).unwrap();
                let m = inst.denominator();
                for (u, v) in [(0, 0), (1, -2), (3, 3), (-4, 1)] {
                    let (n1, n2) = inst.f_numerators(u, v);
                    assert_eq!(inst.f_point(u, v), (rational(n1, m), rational(n2, m)));
                }
            }
        }
    }

    #[test]
    fn residue_shift_examples() {
        let q1 = g(3, 2);
        let (x, y) = (2, -1);
        let p1 = rational(x * 3 + y * 2, 13);
        let p2 = rational(x * 2 - y * 3, 13);
        let s = residue_shift(q1, (x, y), (&p1, &p2)).unwrap();
        assert_eq!((s.a, s.b, s.x, s.y), (0, 0, x, y));

        let t = rational(5, 7);
        let unit = residue_shift(g(1, 0), (4, 9), (&t, &t)).unwrap();
        assert_eq!((unit.x, unit.y), (1, -1));

        let (t1, t2) = (rational(17, 5), rational(-9, 4));
        let s = residue_shift(q1, (x, y), (&t1, &t2)).unwrap();
        let got1 = (rational(s.x * 3 + s.y * 2, 13) - &t1).abs();
        let got2 = (rational(s.x * 2 - s.y * 3, 13) - &t2).abs();
        let mut best1 = None::<ExactRational>;
        let mut best2 = None::<ExactRational>;
        for a in -3..=3 {
            let d1 = (rational(a, 1) + &p1 - &t1).abs();
            let d2 = (rational(a, 1) + &p2 - &t2).abs();
            best1 = Some(best1.map_or(d1.clone(), |b| b.min(d1)));
            best2 = Some(best2.map_or(d2.clone(), |b| b.min(d2)));
        }
        assert_eq!(Some(got1.clone()), best1);
        assert_eq!(Some(got2.clone()), best2);
        assert_eq!(got1, dist_to_int(&(&p1 - &t1)));
        assert_eq!(residue_shift(g(0, 0), (0, 0), (&t1, &t2)), Err(Error::ZeroModulus));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation_matrix(1, 0).unwrap(), [[1, 0], [0, 1]]);
        let m = rotation_matrix(0, 1).unwrap();
        assert_eq!(m, [[0, 1], [-1, 0]]);
        assert_eq!(gram(m), [[1, 0], [0, 1]]);
        assert_eq!(gram(rotation_matrix(2, 1).unwrap()), [[5, 0], [0, 5]]);
        assert_eq!(rotation_matrix(0, 0), Err(Error::ZeroInput));
    }

    #[test]
    fn disk_membership_examples() {
        let inst = SpacingInstance::new(g(2, 1), g(1, 0)).unwrap();
        let r = rational(2, 5);
        assert!(f_point_in_disk(&inst, (0, 0), &r).unwrap());
        assert!(!f_point_in_disk(&inst, (1, 0), &r).unwrap());
        // 1/5 <= (499/1000)²
        assert!(f_point_in_disk(&inst, (1, 0), &rational(499, 1000)).unwrap());
        assert!(f_point_in_disk(&inst, (1, 0), &rational(1, 2)).is_err());
        assert!(f_point_in_disk(&inst, (1, 0), &rational(0, 1)).is_err());
    }

    #[test]
    fn disk_count_examples() {
        let inst = SpacingInstance::new(g(2, 1), g(1, 0)).unwrap();
        let family = ModuliFamily::new(FamilyKind::AllGaussian, Window::dyadic(5.0));
        let tiny = DiskCountQuery { instance: inst, family: family.clone(), l: 4.0, r: rational(1, 1_000_000) };
        let multiples = ModuliFamily::new(FamilyKind::AllGaussian, Window::new(0.0, 20.0))
            .moduli()
            .into_iter()
            .filter(|q| q.is_divisible_by(g(2, 1)))
            .count();
        assert_eq!(disk_point_count(&tiny).unwrap(), multiples);

        let query = DiskCountQuery { instance: inst, family, l: 1.0, r: rational(1, 5) };
        let brute = (1..=2)
            .flat_map(|a| (0..=2).map(move |b| g(a, b)))
            .filter(|q| q.norm() <= 5)
            .filter(|q| {
                let (f1, f2) = inst.f_point(q.re, q.im);
                f1.clone() * f1 + f2.clone() * f2 <= rational(1, 25)
            })
            .count();
        assert_eq!(disk_point_count(&query).unwrap(), brute);

        let empty = ModuliFamily::new(FamilyKind::Custom { name: "none".into(), moduli: vec![] }, Window::dyadic(5.0));
        let none = DiskCountQuery { instance: inst, family: empty, l: 1.0, r: rational(1, 5) };
        assert_eq!(disk_point_count(&none).unwrap(), 0);
    }

    #[test]
    fn switch_examples() {
        let r = rational(1, 100);
        let inst = SpacingInstance::new(g(2, 1), g(1, 0)).unwrap();
        assert!(switch_lattice_check(&inst, 3, &r).unwrap());
        let unit = SpacingInstance::new(g(1, 0), g(1, 0)).unwrap();
        let c = switch_lattice_counts(&unit, 2, &rational(1, 3)).unwrap();
        assert!(c.holds());
        assert_eq!(c.integer_near_lattice, 25);
        let other = SpacingInstance::new(g(4, 3), g(2, 1)).unwrap();
        assert!(switch_lattice_check(&other, 6, &rational(2, 5)).unwrap());
    }

    #[test]
    fn multiplicity_examples() {
        let moduli = ModuliFamily::new(FamilyKind::AllGaussian, Window::new(0.0, 1.0)).moduli();
        assert_eq!(class_multiplicity(g(1, 0), &moduli), 1);
        assert_eq!(class_multiplicity(g(1, 0), &[]), 0);
        assert_eq!(multiplicity_bound(1), 8);
    }
}
