use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gaussian::{canonical_in_annulus, GaussianInt};

/// Half-open norm window `low < N(q) <= high`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub low_exclusive: f64,
    pub high_inclusive: f64,
}

impl Window {
    pub fn new(low_exclusive: f64, high_inclusive: f64) -> Self {
        Self { low_exclusive, high_inclusive }
    }

    /// `Q/2 < N(q) <= Q`.
    pub fn dyadic(q: f64) -> Self {
        Self::new(q / 2.0, q)
    }

    pub fn contains(&self, norm: i64) -> bool {
        let n = norm as f64;
        n > self.low_exclusive && n <= self.high_inclusive
    }

    pub fn is_empty(&self) -> bool {
        self.high_inclusive < 1.0 || self.high_inclusive <= self.low_exclusive
    }

    /// Splits `(0, high]` into the dyadic windows `(high/2^{j+1}, high/2^j]`
    /// that can contain a norm `>= 1`, largest first.
    pub fn dyadic_cover(high: f64) -> Vec<Window> {
        let mut out = Vec::new();
        let mut hi = high;
        while hi >= 1.0 {
            out.push(Window::dyadic(hi));
            hi /= 2.0;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    AllGaussian,
    NaturalIntegers,
    SquareNorm,
    Custom { name: String, moduli: Vec<GaussianInt> },
}

impl FamilyKind {
    pub fn label(&self) -> &str {
        match self {
            Self::AllGaussian => "all",
            Self::NaturalIntegers => "natural",
            Self::SquareNorm => "square-norm",
            Self::Custom { name, .. } => name,
        }
    }

    fn admits(&self, q: GaussianInt) -> bool {
        match self {
            Self::AllGaussian => true,
            Self::NaturalIntegers => q.im == 0,
            Self::SquareNorm => q.is_square_norm(),
            Self::Custom { moduli, .. } => moduli.iter().any(|m| m.canonical() == q),
        }
    }

    /// Norm cap that a size parameter `Q` stands for.
    ///
    /// For Gaussian moduli `Q` bounds the norm; for natural and square-norm
    /// moduli it bounds `√N(q)`, so the norm cap is `Q²`.
    pub fn norm_cap(&self, q: f64) -> f64 {
        match self {
            Self::NaturalIntegers | Self::SquareNorm => q * q,
            Self::AllGaussian | Self::Custom { .. } => q,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::AllGaussian),
            "natural" => Ok(Self::NaturalIntegers),
            "square-norm" => Ok(Self::SquareNorm),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

/// A set of moduli: a kind predicate restricted to a norm window.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuliFamily {
    pub kind: FamilyKind,
    pub window: Window,
}

impl ModuliFamily {
    pub fn new(kind: FamilyKind, window: Window) -> Self {
        Self { kind, window }
    }

    /// The window `Q_n/2 < N(q) <= Q_n` with `Q_n = kind.norm_cap(q)`.
    pub fn dyadic(kind: FamilyKind, q: f64) -> Self {
        let cap = kind.norm_cap(q);
        Self::new(kind, Window::dyadic(cap))
    }

    /// Canonical, nonzero moduli in the window, sorted by `(norm, re, im)`.
    pub fn moduli(&self) -> Vec<GaussianInt> {
        if self.window.is_empty() {
            return Vec::new();
        }
        match &self.kind {
            FamilyKind::Custom { moduli, .. } => {
                let mut out: Vec<_> = moduli
                    .iter()
                    .filter(|m| !m.is_zero())
                    .map(|m| m.canonical())
                    .filter(|m| self.window.contains(m.norm()))
                    .collect();
                out.sort_by_key(|g| (g.norm(), g.re, g.im));
                out.dedup();
                out
            }
            FamilyKind::NaturalIntegers => {
                let lo = self.window.low_exclusive.max(0.0).sqrt().floor() as i64;
                let hi = self.window.high_inclusive.sqrt().floor() as i64 + 1;
                (lo.max(1)..=hi)
                    .map(GaussianInt::from_int)
                    .filter(|q| self.window.contains(q.norm()))
                    .collect()
            }
            kind => canonical_in_annulus(self.window.low_exclusive, self.window.high_inclusive)
                .into_iter()
                .filter(|&q| kind.admits(q))
                .collect(),
        }
    }
}
