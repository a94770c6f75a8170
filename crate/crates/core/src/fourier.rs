//! Gaussian-weighted lattice sums, the theta identity and the congruence count
//! `T_γ(U, V)`.
//!
//! Infinite sums are truncated with explicit tail bounds. For a decreasing
//! summand `g` on `[c, ∞)`, `Σ_{n>c} g(n) <= ∫_c^∞ g`; the Gaussian integral is
//! bounded by `∫_c^∞ e^{−at²} dt <= e^{−ac²}/(2ac)`. Over the moduli, the
//! number of Gaussian integers of norm `n` is at most `4·d(n) <= 8√n`.

use std::f64::consts::PI;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;
use crate::sieve::{FamilyKind, ModuliFamily, Window};
use crate::spacing::{centered_residue, f_point_in_disk, ExactRational, SpacingInstance};

/// Tail budget used when a routine picks its own truncation.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// `∫_c^∞ e^{−a t²} dt <= e^{−a c²}/(2ac)` for `a, c > 0`.
fn gaussian_tail(a: f64, c: f64) -> f64 {
    (-a * c * c).exp() / (2.0 * a * c)
}

/// The two smooth weights `Φ` the counting arguments use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightFunction {
    /// `Φ(z) = e^{−πz}`.
    ExpLinear,
    /// `Φ(z) = e^{−√z}`.
    ExpSqrt,
}

impl WeightFunction {
    /// `Φ(z)` for `z >= 0`; negative arguments are treated as `0`.
    pub fn eval(self, z: f64) -> f64 {
        let z = z.max(0.0);
        match self {
            Self::ExpLinear => (-PI * z).exp(),
            Self::ExpSqrt => (-z.sqrt()).exp(),
        }
    }

    /// Bound for `Σ Φ(N(q)/Q)` over all nonzero `q` with `N(q) > c`, valid
    /// for `c >= Q`.
    pub fn tail_bound(self, q: f64, c: f64) -> f64 {
        debug_assert!(c >= q);
        match self {
            Self::ExpLinear => {
                let a = PI / q;
                8.0 * (-a * c).exp() * (c.sqrt() / a + 1.0 / (2.0 * a * a * c.sqrt()))
            }
            Self::ExpSqrt => {
                let s = (c / q).sqrt();
                16.0 * q.powf(1.5) * (-s).exp() * (s * s + 2.0 * s + 2.0)
            }
        }
    }

    /// Smallest doubling of `Q` whose tail bound is below `tol`.
    pub fn cutoff(self, q: f64, tol: f64) -> f64 {
        let mut c = q.max(1.0).ceil();
        while self.tail_bound(q, c) >= tol {
            c *= 2.0;
        }
        c
    }
}

/// Both sides of `Σ_u e^{−πu²/Q²}·e(uθ) = Q·Σ_γ e^{−π(γ−θ)²Q²}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Bound on the neglected terms of both sides together.
    pub tail: f64,
}

fn theta_tails(qp: f64, cutoff: i64) -> f64 {
    let c = cutoff as f64;
    let lhs = 2.0 * gaussian_tail(PI / (qp * qp), c);
    // |γ − θ| >= c + 1/2 once |γ| > c, and the terms decrease from c − 1/2 on
    let rhs = if c > 0.5 { 2.0 * qp * gaussian_tail(PI * qp * qp, c - 0.5) } else { f64::INFINITY };
    lhs + rhs
}

/// Smallest cutoff whose combined tail is below `tol`.
pub fn theta_cutoff(qp: f64, tol: f64) -> i64 {
    let mut c = 1;
    while theta_tails(qp, c) >= tol {
        c += 1;
    }
    c
}

pub fn theta_identity_check(qp: f64, theta: f64, cutoff: i64) -> Result<ThetaCheck> {
    if !(qp >= 1.0) || !(-0.5..=0.5).contains(&theta) {
        return Err(Error::OutOfRange(format!("need Q >= 1 and |θ| <= 1/2, got Q = {qp}, θ = {theta}")));
    }
    let tail = theta_tails(qp, cutoff);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::InsufficientCutoff { cutoff, tail });
    }
    let mut lhs = 1.0;
    for u in 1..=cutoff {
        let u = u as f64;
        lhs += 2.0 * (-PI * u * u / (qp * qp)).exp() * (2.0 * PI * u * theta).cos();
    }
    let mut rhs = 0.0;
    for g in -cutoff..=cutoff {
        let d = g as f64 - theta;
        rhs += (-PI * d * d * qp * qp).exp();
    }
    rhs *= qp;
    Ok(ThetaCheck { lhs, rhs, residual: (lhs - rhs).abs(), tail })
}

/// `T_γ(U, V) = #{|α| <= U, |β| <= V : αx₂ − βy₂ ≡ γ (mod u₂)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CongruenceCountInstance {
    pub u2: i64,
    pub x2: i64,
    pub y2: i64,
    pub gamma: i64,
    pub u: f64,
    pub v: f64,
}

impl CongruenceCountInstance {
    pub fn new(u2: i64, x2: i64, y2: i64, gamma: i64, u: f64, v: f64) -> Result<Self> {
        if u2 < 1 {
            return Err(Error::InvalidInstance(format!("u2 must be positive, got {u2}")));
        }
        if !(u >= 0.0 && v >= 0.0) {
            return Err(Error::InvalidInstance(format!("U and V must be nonnegative, got {u}, {v}")));
        }
        if !GaussianInt::new(x2, y2).is_coprime(GaussianInt::from_int(u2)) {
            return Err(Error::InvalidInstance(format!("{x2}+{y2}i is not coprime to {u2}")));
        }
        Ok(Self { u2, x2, y2, gamma, u, v })
    }

    /// `d = gcd(x₂, u₂)`, with `gcd(0, u₂) = u₂`.
    pub fn d(&self) -> i64 {
        self.x2.gcd(&self.u2)
    }

    pub fn x2_prime(&self) -> i64 {
        self.x2 / self.d()
    }

    pub fn u2_prime(&self) -> i64 {
        self.u2 / self.d()
    }

    fn ranges(&self) -> (i64, i64) {
        (self.u.floor() as i64, self.v.floor() as i64)
    }
}

/// Brute-force `T_γ(U, V)`.
pub fn congruence_count(inst: &CongruenceCountInstance) -> u64 {
    let (ua, vb) = inst.ranges();
    let mut count = 0;
    for alpha in -ua..=ua {
        for beta in -vb..=vb {
            if (alpha * inst.x2 - beta * inst.y2 - inst.gamma).rem_euclid(inst.u2) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Number of `t ∈ [−m, m]` with `t ≡ c (mod p)`.
fn count_in_class(m: i64, c: i64, p: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let first = -m + (c + m).rem_euclid(p);
    if first > m {
        0
    } else {
        ((m - first) / p + 1) as u64
    }
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// `T_γ(U, V)` through `β ≡ −ȳ₂γ (mod d)` and `α ≡ x̄₂′·(βy₂ + γ)/d (mod u₂′)`.
pub fn congruence_count_structured(inst: &CongruenceCountInstance) -> u64 {
    let (ua, vb) = inst.ranges();
    let (d, xp, up) = (inst.d(), inst.x2_prime(), inst.u2_prime());
    let beta0 = (-inverse_mod(inst.y2, d) * inst.gamma).rem_euclid(d);
    let x_inv = inverse_mod(xp, up);
    let first = -vb + (beta0 + vb).rem_euclid(d);
    let mut count = 0;
    let mut beta = first;
    while beta <= vb {
        let num = beta * inst.y2 + inst.gamma;
        debug_assert_eq!(num.rem_euclid(d), 0);
        let alpha0 = (x_inv * (num / d).rem_euclid(up)).rem_euclid(up);
        count += count_in_class(ua, alpha0, up);
        beta += d;
    }
    count
}

/// `(1 + 2V/d)·(1 + 2U/u₂′)`.
pub fn congruence_count_bound(inst: &CongruenceCountInstance) -> f64 {
    (1.0 + 2.0 * inst.v / inst.d() as f64) * (1.0 + 2.0 * inst.u / inst.u2_prime() as f64)
}

pub fn congruence_count_bound_check(inst: &CongruenceCountInstance) -> bool {
    // count·d·u₂′ <= (d + 2V)(u₂′ + 2U), free of divisions
    let (d, up) = (inst.d() as f64, inst.u2_prime() as f64);
    congruence_count(inst) as f64 * d * up <= (d + 2.0 * inst.v) * (up + 2.0 * inst.u)
}

/// Outcome of [`congruence_bound_sweep`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CongruenceSweep {
    pub instances: u64,
    pub violations: Vec<CongruenceCountInstance>,
}

/// Checks the structured bound for every `u₂ <= max_u2`, every admissible
/// `(x₂, y₂) mod u₂`, every `γ mod u₂` and every integer `U, V <= max_uv`.
///
/// For each `(u₂, x₂, y₂, V)` the counts for all `γ` are grown column by
/// column in `U`.
pub fn congruence_bound_sweep(max_u2: i64, max_uv: i64) -> CongruenceSweep {
    let mut sweep = CongruenceSweep::default();
    for u2 in 1..=max_u2 {
        for x2 in 0..u2 {
            for y2 in 0..u2 {
                let Ok(base) = CongruenceCountInstance::new(u2, x2, y2, 0, 0.0, 0.0) else {
                    continue;
                };
                let (d, up) = (base.d(), base.u2_prime());
                for v in 0..=max_uv {
                    let mut counts = vec![0u64; u2 as usize];
                    for u in 0..=max_uv {
                        let alphas: &[i64] = if u == 0 { &[0] } else { &[u, -u] };
                        for &alpha in alphas {
                            for beta in -v..=v {
                                counts[(alpha * x2 - beta * y2).rem_euclid(u2) as usize] += 1;
                            }
                        }
                        let bound = (d + 2 * v) * (up + 2 * u);
                        for (gamma, &c) in counts.iter().enumerate() {
                            sweep.instances += 1;
                            if c as i64 * d * up > bound {
                                let inst = CongruenceCountInstance { gamma: gamma as i64, u: u as f64, v: v as f64, ..base };
                                sweep.violations.push(inst);
                            }
                        }
                    }
                }
            }
        }
    }
    sweep
}

/// `R² = 4Q/N`, the squared disk radius attached to `(Q, N)`.
pub fn scale_for(q: f64, n: f64) -> f64 {
    4.0 * q / n
}

/// A truncated weighted sum over moduli with its certified tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedSum {
    pub value: f64,
    /// Bound on everything the truncation dropped.
    pub tail: f64,
    /// `R²·Σ_q Φ(N(q)/Q)`, the `α = β = 0` term.
    pub zero_frequency: f64,
    pub moduli: usize,
}

fn weighted_moduli(kind: &FamilyKind, weight: WeightFunction, q: f64, tol: f64) -> (Vec<GaussianInt>, f64) {
    let cutoff = weight.cutoff(q, tol);
    let moduli = ModuliFamily::new(kind.clone(), Window::new(0.0, cutoff)).moduli();
    (moduli, weight.tail_bound(q, cutoff))
}

/// `Σ_q Φ(N(q)/Q)` over the family, with its tail bound.
pub fn weight_mass(kind: &FamilyKind, weight: WeightFunction, q: f64) -> (f64, f64) {
    let (moduli, tail) = weighted_moduli(kind, weight, q, TAIL_TOLERANCE);
    (moduli.iter().map(|m| weight.eval(m.norm() as f64 / q)).sum(), tail)
}

/// Fractional coordinates `(A, B)` of the point attached to `q`, centred in `[−1/2, 1/2)`.
fn centred_point(inst: &SpacingInstance, q: GaussianInt) -> (f64, f64) {
    let m = inst.denominator();
    let (a, b) = inst.arguments(q.re, q.im);
    (centered_residue(a, m) as f64 / m as f64, centered_residue(b, m) as f64 / m as f64)
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("scale must be positive, got {scale}")))
    }
}

/// `R²·Σ_q Φ(N(q)/Q)·Σ_{α,β} e^{−π(α²+β²)R²}·e(αA_q + βB_q)` with `R² = scale`,
/// `A_q = (uk+vl)/N(q₂)` and `B_q = (−vk+ul)/N(q₂)`.
///
/// The frequency sum factors into one sum over `α` and one over `β`.
pub fn weighted_lattice_sum(
    inst: &SpacingInstance,
    kind: &FamilyKind,
    weight: WeightFunction,
    q: f64,
    scale: f64,
) -> Result<WeightedSum> {
    check_scale(scale)?;
    let r = scale.sqrt();
    let (moduli, q_tail) = weighted_moduli(kind, weight, q, TAIL_TOLERANCE);
    let a = PI * scale;
    let mut cutoff = 1.0;
    while 2.0 * gaussian_tail(a, cutoff) >= TAIL_TOLERANCE {
        cutoff += 1.0;
    }
    let freq_tail = 2.0 * gaussian_tail(a, cutoff);
    let freqs: Vec<(f64, f64)> = (1..=cutoff as i64).map(|k| (k as f64, (-a * (k * k) as f64).exp())).collect();
    let one_dim = |x: f64| 1.0 + 2.0 * freqs.iter().map(|&(k, w)| w * (2.0 * PI * k * x).cos()).sum::<f64>();
    // Σ_α e^{−πα²R²} <= 1 + 1/R
    let full = 1.0 + 1.0 / r;

    let mut value = 0.0;
    let mut mass = 0.0;
    for &m in &moduli {
        let phi = weight.eval(m.norm() as f64 / q);
        let (x, y) = centred_point(inst, m);
        value += phi * scale * one_dim(x) * one_dim(y);
        mass += phi;
    }
    let tail = mass * scale * (2.0 * full + freq_tail) * freq_tail + (1.0 + r).powi(2) * q_tail;
    Ok(WeightedSum { value, tail, zero_frequency: scale * mass, moduli: moduli.len() })
}

/// The same quantity before Poisson summation,
/// `Σ_q Φ(N(q)/Q)·Σ_{x,y} e^{−π((A_q−x)² + (B_q−y)²)/R²}`.
pub fn pre_poisson_sum(
    inst: &SpacingInstance,
    kind: &FamilyKind,
    weight: WeightFunction,
    q: f64,
    scale: f64,
) -> Result<WeightedSum> {
    check_scale(scale)?;
    let r = scale.sqrt();
    let (moduli, q_tail) = weighted_moduli(kind, weight, q, TAIL_TOLERANCE);
    let a = PI / scale;
    // |A − x| >= c − 1/2 for the dropped x, since |A| <= 1/2
    let mut c = 1.0;
    while 2.0 * gaussian_tail(a, c - 0.5) >= TAIL_TOLERANCE {
        c += 1.0;
    }
    let shift_tail = 2.0 * gaussian_tail(a, c - 0.5);
    let reach = c as i64;
    let one_dim = |x: f64| (-reach..=reach).map(|s| (-a * (x - s as f64).powi(2)).exp()).sum::<f64>();

    let mut value = 0.0;
    let mut mass = 0.0;
    for &m in &moduli {
        let phi = weight.eval(m.norm() as f64 / q);
        let (x, y) = centred_point(inst, m);
        value += phi * one_dim(x) * one_dim(y);
        mass += phi;
    }
    let tail = mass * (2.0 * (1.0 + r) + shift_tail) * shift_tail + (1.0 + r).powi(2) * q_tail;
    Ok(WeightedSum { value, tail, zero_frequency: scale * mass, moduli: moduli.len() })
}

/// Both sides of `#{q : P(q) ∈ D_R(0)} <= e^{2π}·Σ_q Φ(N(q)/Q)·G_q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominationCheck {
    pub count: usize,
    pub weighted: f64,
}

impl DominationCheck {
    pub fn holds(&self) -> bool {
        self.count as f64 <= self.weighted
    }
}

/// Counts moduli of the window `Q/2 < N(q) <= Q` whose point lies in `D_R(0)`
/// and compares with `e^{2π}` times the `e^{−πz}`-weighted Gaussian sum.
///
/// On the window `Φ(N(q)/Q) >= e^{−π}`, and for a point in `D_R(0)` the term
/// `x = y = 0` of the Gaussian sum is at least `e^{−π}`, so every counted
/// modulus contributes at least `e^{−2π}` to the weighted sum.
pub fn indicator_domination_check(
    inst: &SpacingInstance,
    kind: &FamilyKind,
    q: f64,
    r: &ExactRational,
) -> Result<DominationCheck> {
    let mut count = 0;
    for m in ModuliFamily::new(kind.clone(), Window::dyadic(q)).moduli() {
        if f_point_in_disk(inst, (m.re, m.im), r)? {
            count += 1;
        }
    }
    let r_f64 = num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
    let sum = pre_poisson_sum(inst, kind, WeightFunction::ExpLinear, q, r_f64 * r_f64)?;
    Ok(DominationCheck { count, weighted: (2.0 * PI).exp() * sum.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacing::rational;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn theta_examples() {
        let c = theta_cutoff(1.0, TAIL_TOLERANCE);
        let t = theta_identity_check(1.0, 0.0, c).unwrap();
        assert!((t.lhs - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(t.residual <= 1e-9);
        for (qp, theta) in [(2.0, 0.5), (5.0, 0.0), (5.0, -0.25)] {
            let t = theta_identity_check(qp, theta, theta_cutoff(qp, TAIL_TOLERANCE)).unwrap();
            assert!(t.residual <= 1e-9, "{qp} {theta}: {t:?}");
        }
        assert!(matches!(theta_identity_check(5.0, 0.0, 2), Err(Error::InsufficientCutoff { .. })));
        assert!(theta_identity_check(0.5, 0.0, 50).is_err());
    }

    #[test]
    fn congruence_examples() {
        let zero = CongruenceCountInstance::new(7, 3, 2, 0, 0.0, 0.0).unwrap();
        assert_eq!(congruence_count(&zero), 1);
        assert!(congruence_count_bound_check(&zero));
        let inst = CongruenceCountInstance::new(5, 1, 0, 2, 5.0, 5.0).unwrap();
        assert_eq!(congruence_count(&inst), 22);
        assert_eq!(congruence_count_structured(&inst), 22);
        assert_eq!(congruence_count_bound(&inst), 33.0);
        assert!(congruence_count_bound_check(&inst));
        let trivial = CongruenceCountInstance::new(1, 4, 9, 3, 2.5, 3.0).unwrap();
        assert_eq!(congruence_count(&trivial), 5 * 7);
        assert!(CongruenceCountInstance::new(4, 2, 2, 0, 1.0, 1.0).is_err());
        assert!(CongruenceCountInstance::new(0, 1, 0, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn structured_count_and_divisor_split() {
        let inst = CongruenceCountInstance::new(12, 8, 3, 7, 9.0, 6.0).unwrap();
        assert_eq!((inst.d(), inst.x2_prime(), inst.u2_prime()), (4, 2, 3));
        assert_eq!(congruence_count_structured(&inst), congruence_count(&inst));
        let zero_x = CongruenceCountInstance::new(9, 0, 2, 5, 4.0, 11.0).unwrap();
        assert_eq!(zero_x.d(), 9);
        assert_eq!(congruence_count_structured(&zero_x), congruence_count(&zero_x));
    }

    #[test]
    fn weights() {
        assert_eq!(WeightFunction::ExpLinear.eval(0.0), 1.0);
        assert!((WeightFunction::ExpSqrt.eval(4.0) - (-2.0f64).exp()).abs() < 1e-15);
        for w in [WeightFunction::ExpLinear, WeightFunction::ExpSqrt] {
            assert!(w.eval(0.5) > 0.0 && w.eval(1.0) > 0.0);
            let c = w.cutoff(10.0, 1e-12);
            assert!(w.tail_bound(10.0, c) < 1e-12);
        }
    }

    #[test]
    fn weighted_sum_examples() {
        let inst = SpacingInstance::new(g(2, 1), g(1, 0)).unwrap();
        let empty = FamilyKind::Custom { name: "none".into(), moduli: vec![] };
        let s = weighted_lattice_sum(&inst, &empty, WeightFunction::ExpLinear, 5.0, 0.1).unwrap();
        assert_eq!(s.value, 0.0);

        let (mass, _) = weight_mass(&FamilyKind::AllGaussian, WeightFunction::ExpLinear, 5.0);
        let s = weighted_lattice_sum(&inst, &FamilyKind::AllGaussian, WeightFunction::ExpLinear, 5.0, 0.1).unwrap();
        assert!(mass > 0.0 && (s.zero_frequency - 0.1 * mass).abs() < 1e-12);

        let pre = pre_poisson_sum(&inst, &FamilyKind::AllGaussian, WeightFunction::ExpLinear, 5.0, 0.1).unwrap();
        assert!(((s.value - pre.value) / pre.value).abs() < 1e-9, "{s:?} {pre:?}");
        assert!(s.tail < 1e-9 && pre.tail < 1e-9);
        assert!(weighted_lattice_sum(&inst, &FamilyKind::AllGaussian, WeightFunction::ExpLinear, 5.0, 0.0).is_err());
    }

    #[test]
    fn domination_examples() {
        let inst = SpacingInstance::new(g(3, 1), g(2, 3)).unwrap();
        let empty = FamilyKind::Custom { name: "none".into(), moduli: vec![] };
        let d = indicator_domination_check(&inst, &empty, 10.0, &rational(1, 5)).unwrap();
        assert_eq!((d.count, d.weighted), (0, 0.0));
        assert!(d.holds());
        let d = indicator_domination_check(&inst, &FamilyKind::AllGaussian, 10.0, &rational(2, 5)).unwrap();
        assert!(d.holds(), "{d:?}");
    }
}
