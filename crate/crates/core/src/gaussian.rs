//! Exact arithmetic in the Gaussian integers ℤ[i].
//!
//! Coordinates are stored as `i64`. Every operation is exact for inputs whose
//! coordinates are bounded by [`COORD_CAP`] in absolute value; intermediate
//! products are formed in `i128` where they could leave that range.
//!
//! Associates are identified through [`GaussianInt::canonical`], which picks the
//! unit multiple lying in the half-open first quadrant `re > 0, im >= 0`.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;

use crate::error::{Error, Result};

/// Largest coordinate magnitude for which arithmetic is guaranteed exact.
pub const COORD_CAP: i64 = 1 << 30;

/// An element `re + im·i` of ℤ[i].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

pub const ZERO: GaussianInt = GaussianInt::new(0, 0);
pub const ONE: GaussianInt = GaussianInt::new(1, 0);
pub const I: GaussianInt = GaussianInt::new(0, 1);
pub const UNITS: [GaussianInt; 4] = [
    GaussianInt::new(1, 0),
    GaussianInt::new(0, 1),
    GaussianInt::new(-1, 0),
    GaussianInt::new(0, -1),
];

impl GaussianInt {
    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    /// Constructor that enforces the exactness cap on both coordinates.
    pub fn checked(re: i64, im: i64) -> Result<Self> {
        for c in [re, im] {
            if c.abs() > COORD_CAP {
                return Err(Error::CoordinateRange(c));
            }
        }
        Ok(Self { re, im })
    }

    pub const fn from_int(n: i64) -> Self {
        Self { re: n, im: 0 }
    }

    /// `re² + im²`.
    pub fn norm(self) -> i64 {
        let n = (self.re as i128) * (self.re as i128) + (self.im as i128) * (self.im as i128);
        i64::try_from(n).expect("norm overflows i64; coordinates beyond the exactness cap")
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `g + conj(g) = 2·re`.
    pub fn trace(self) -> i64 {
        2 * self.re
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Unit multiple with `re > 0, im >= 0`; zero maps to zero.
    pub fn canonical(self) -> Self {
        let Self { re, im } = self;
        match (re.signum(), im.signum()) {
            (0, 0) => ZERO,
            (1, 0) | (1, 1) => self,
            // multiply by -i: (re, im) -> (im, -re)
            (_, 1) => Self::new(im, -re),
            // multiply by -1
            (-1, _) if im <= 0 => Self::new(-re, -im),
            // remaining: re >= 0, im < 0; multiply by i: (re, im) -> (-im, re)
            _ => Self::new(-im, re),
        }
    }

    /// Euclidean division: `self = quotient·q + remainder` with
    /// `norm(remainder) <= norm(q)/2`.
    ///
    /// Each coordinate of `self·conj(q)/norm(q)` is rounded to the nearest
    /// integer, ties toward −∞.
    pub fn div_rem(self, q: Self) -> Result<(Self, Self)> {
        if q.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let quot = if small(self) && small(q) {
            let n = q.norm();
            let num_re = self.re * q.re + self.im * q.im;
            let num_im = self.im * q.re - self.re * q.im;
            Self::new(round_half_down_i64(num_re, n), round_half_down_i64(num_im, n))
        } else {
            let n = q.norm() as i128;
            let (a_re, a_im) = (self.re as i128, self.im as i128);
            let (q_re, q_im) = (q.re as i128, q.im as i128);
            let num_re = a_re * q_re + a_im * q_im;
            let num_im = a_im * q_re - a_re * q_im;
            Self::new(round_half_down(num_re, n) as i64, round_half_down(num_im, n) as i64)
        };
        let rem = self - quot * q;
        Ok((quot, rem))
    }

    /// Whether `d` divides `self`. Only zero is divisible by zero.
    pub fn is_divisible_by(self, d: Self) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        if small(self) && small(d) {
            let n = d.norm();
            let re = self.re * d.re + self.im * d.im;
            let im = self.im * d.re - self.re * d.im;
            return re % n == 0 && im % n == 0;
        }
        let n = d.norm() as i128;
        let re = self.re as i128 * d.re as i128 + self.im as i128 * d.im as i128;
        let im = self.im as i128 * d.re as i128 - self.re as i128 * d.im as i128;
        re % n == 0 && im % n == 0
    }

    /// Euclidean gcd, returned as a canonical associate; `gcd(0, 0) = 0`.
    pub fn gcd(self, other: Self) -> Self {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let (_, r) = a.div_rem(b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.canonical()
    }

    pub fn is_coprime(self, other: Self) -> bool {
        self.gcd(other).is_unit()
    }

    /// Whether the norm is a perfect square (zero included).
    pub fn is_square_norm(self) -> bool {
        is_perfect_square(self.norm())
    }
}

/// Coordinates small enough that products of two such elements fit in `i64`.
fn small(g: GaussianInt) -> bool {
    const LIMIT: i64 = 1 << 30;
    g.re.abs() < LIMIT && g.im.abs() < LIMIT
}

fn round_half_down_i64(num: i64, den: i64) -> i64 {
    let top = 2 * num - den;
    let bot = 2 * den;
    -((-top).div_euclid(bot))
}

/// `round(num/den)` with ties toward −∞, for `den > 0`.
fn round_half_down(num: i128, den: i128) -> i128 {
    // ceil((2num - den) / 2den)
    let top = 2 * num - den;
    let bot = 2 * den;
    -((-top).div_euclid(bot))
}

pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = n.sqrt();
    r * r == n
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl From<i64> for GaussianInt {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// Class key of `g` modulo `q`: the pair `g·conj(q) mod norm(q)`.
///
/// Two elements share a key iff their difference is divisible by `q`, since
/// `(g - h)·conj(q) ≡ 0 (mod norm(q))` is equivalent to `q | g - h`.
pub fn residue_key(g: GaussianInt, q: GaussianInt) -> (i64, i64) {
    if small(g) && small(q) {
        let m = q.norm();
        let re = g.re * q.re + g.im * q.im;
        let im = g.im * q.re - g.re * q.im;
        return (re.rem_euclid(m), im.rem_euclid(m));
    }
    let m = q.norm() as i128;
    let re = g.re as i128 * q.re as i128 + g.im as i128 * q.im as i128;
    let im = g.im as i128 * q.re as i128 - g.re as i128 * q.im as i128;
    (re.rem_euclid(m) as i64, im.rem_euclid(m) as i64)
}

/// One representative per class of ℤ[i]/(q), in lexicographic order.
#[derive(Clone, Debug)]
pub struct ResidueSystem {
    modulus: GaussianInt,
    representatives: Vec<GaussianInt>,
    reduced: Vec<bool>,
    index: Vec<((i64, i64), usize)>,
}

/// Set of residue keys: a bitmap over `[0, M)²` for moderate `M`, hashed beyond.
enum KeySet {
    Dense { m: i64, bits: Vec<u64> },
    Sparse(HashSet<(i64, i64)>),
}

impl KeySet {
    const DENSE_LIMIT: i64 = 1 << 13;

    fn new(m: i64) -> Self {
        if m <= Self::DENSE_LIMIT {
            Self::Dense { m, bits: vec![0; ((m * m) as usize).div_ceil(64)] }
        } else {
            Self::Sparse(HashSet::with_capacity(m as usize))
        }
    }

    /// Returns true when the key was not yet present.
    fn insert(&mut self, key: (i64, i64)) -> bool {
        match self {
            Self::Dense { m, bits } => {
                let k = (key.0 * *m + key.1) as usize;
                let (word, bit) = (k / 64, 1u64 << (k % 64));
                let fresh = bits[word] & bit == 0;
                bits[word] |= bit;
                fresh
            }
            Self::Sparse(set) => set.insert(key),
        }
    }
}

impl ResidueSystem {
    pub fn new(q: GaussianInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let m = q.norm();
        let side = 2 * ceil_sqrt(m);
        let mut representatives = Vec::with_capacity(m as usize);
        let mut seen = KeySet::new(m);
        'scan: for x in 0..=side {
            for y in 0..=side {
                let g = GaussianInt::new(x, y);
                if seen.insert(residue_key(g, q)) {
                    representatives.push(g);
                    if representatives.len() as i64 == m {
                        break 'scan;
                    }
                }
            }
        }
        debug_assert_eq!(representatives.len() as i64, m);
        let reduced = representatives.iter().map(|r| r.is_coprime(q)).collect();
        let mut index: Vec<((i64, i64), usize)> = representatives
            .iter()
            .enumerate()
            .map(|(k, r)| (residue_key(*r, q), k))
            .collect();
        index.sort_unstable();
        Ok(Self { modulus: q, representatives, reduced, index })
    }

    pub fn modulus(&self) -> GaussianInt {
        self.modulus
    }

    pub fn representatives(&self) -> &[GaussianInt] {
        &self.representatives
    }

    pub fn reduced_flags(&self) -> &[bool] {
        &self.reduced
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Reduced representatives, in order.
    pub fn reduced(&self) -> impl Iterator<Item = GaussianInt> + '_ {
        self.representatives
            .iter()
            .zip(&self.reduced)
            .filter_map(|(r, &red)| red.then_some(*r))
    }

    /// Position of the class of `g` within [`Self::representatives`].
    pub fn class_of(&self, g: GaussianInt) -> usize {
        let key = residue_key(g, self.modulus);
        let pos = self.index.binary_search_by_key(&key, |&(k, _)| k).expect("every key has a class");
        self.index[pos].1
    }
}

fn ceil_sqrt(m: i64) -> i64 {
    let r = m.sqrt();
    if r * r == m {
        r
    } else {
        r + 1
    }
}

/// Number of reduced residue classes modulo `q`.
pub fn totient(q: GaussianInt) -> Result<u64> {
    let rs = ResidueSystem::new(q)?;
    Ok(rs.reduced_flags().iter().filter(|&&b| b).count() as u64)
}

/// All canonical divisors of `z`, sorted by `(norm, re, im)`.
pub fn divisors(z: GaussianInt) -> Result<Vec<GaussianInt>> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = z.norm();
    // A divisor's norm divides norm(z); only those norms are tried.
    let mut norms: Vec<i64> = (1..=n.sqrt())
        .filter(|d| n % d == 0)
        .flat_map(|d| [d, n / d])
        .collect();
    norms.sort_unstable();
    norms.dedup();
    let mut out = Vec::new();
    for nd in norms {
        for u in 1..=nd.sqrt() {
            let v2 = nd - u * u;
            if !is_perfect_square(v2) {
                continue;
            }
            let g = GaussianInt::new(u, v2.sqrt());
            if z.is_divisible_by(g) {
                out.push(g);
            }
        }
    }
    out.sort_by_key(|g| (g.norm(), g.re, g.im));
    Ok(out)
}

/// Canonical Gaussian integers with `low < norm <= high`, sorted by `(norm, re, im)`.
pub fn canonical_in_annulus(low: f64, high: f64) -> Vec<GaussianInt> {
    if high < 1.0 {
        return Vec::new();
    }
    let hi = high.floor() as i64;
    let mut out = Vec::new();
    for u in 1..=hi.sqrt() {
        for v in 0..=(hi - u * u).sqrt() {
            let g = GaussianInt::new(u, v);
            let n = g.norm() as f64;
            if n > low && n <= high {
                out.push(g);
            }
        }
    }
    out.sort_by_key(|g| (g.norm(), g.re, g.im));
    out
}
