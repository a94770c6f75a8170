use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use crate::characters::e;
use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;

/// Coefficients `a_n` supported on the disk `N(n) <= radius_sq`.
///
/// Entries cover every lattice point of the disk (zeros included), sorted
/// lexicographically by `(re, im)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSequence {
    radius_sq: i64,
    entries: Vec<(GaussianInt, Complex64)>,
    energy: f64,
}

/// Lattice points `n` with `N(n) <= radius_sq`, sorted by `(re, im)`.
pub fn disk_points(radius_sq: i64) -> Vec<GaussianInt> {
    let r = radius_sq.max(0).sqrt();
    let mut out = Vec::new();
    for s in -r..=r {
        let h = (radius_sq - s * s).sqrt();
        for t in -h..=h {
            out.push(GaussianInt::new(s, t));
        }
    }
    out
}

impl CoefficientSequence {
    /// Builds a sequence from a function on the disk.
    pub fn from_fn(radius_sq: i64, mut f: impl FnMut(GaussianInt) -> Complex64) -> Result<Self> {
        if radius_sq < 1 {
            return Err(Error::InvalidSpec(format!("radius_sq must be positive, got {radius_sq}")));
        }
        let entries: Vec<_> = disk_points(radius_sq).into_iter().map(|n| (n, f(n))).collect();
        Ok(Self::from_entries(radius_sq, entries))
    }

    fn from_entries(radius_sq: i64, entries: Vec<(GaussianInt, Complex64)>) -> Self {
        let energy = entries.iter().map(|(_, a)| a.norm_sqr()).sum();
        Self { radius_sq, entries, energy }
    }

    pub fn radius_sq(&self) -> i64 {
        self.radius_sq
    }

    pub fn entries(&self) -> &[(GaussianInt, Complex64)] {
        &self.entries
    }

    /// `Z = Σ |a_n|²`.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let entries = self.entries.iter().map(|&(n, a)| (n, a * c)).collect();
        Self::from_entries(self.radius_sq, entries)
    }

    /// Entries with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = (GaussianInt, Complex64)> + '_ {
        self.entries.iter().copied().filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
    }
}

/// Recipes for deterministic coefficient sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffSpec {
    AllOnes { radius_sq: i64 },
    Delta { at: GaussianInt, radius_sq: i64 },
    RandomPhases { radius_sq: i64, seed: u64 },
    /// `a_n = 1` exactly on the multiples of `modulus`.
    ProgressionAdversary { modulus: GaussianInt, radius_sq: i64 },
}

impl CoeffSpec {
    pub fn radius_sq(&self) -> i64 {
        match *self {
            Self::AllOnes { radius_sq }
            | Self::Delta { radius_sq, .. }
            | Self::RandomPhases { radius_sq, .. }
            | Self::ProgressionAdversary { radius_sq, .. } => radius_sq,
        }
    }

    /// Short label used in reports (`all-ones`, `delta`, `random`, `adversary`).
    pub fn kind(&self) -> CoeffKind {
        match self {
            Self::AllOnes { .. } => CoeffKind::AllOnes,
            Self::Delta { .. } => CoeffKind::Delta,
            Self::RandomPhases { .. } => CoeffKind::Random,
            Self::ProgressionAdversary { .. } => CoeffKind::Adversary,
        }
    }
}

/// The coefficient families exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffKind {
    AllOnes,
    Delta,
    Random,
    Adversary,
}

impl CoeffKind {
    pub const ALL: [CoeffKind; 4] = [Self::AllOnes, Self::Delta, Self::Random, Self::Adversary];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AllOnes => "all-ones",
            Self::Delta => "delta",
            Self::Random => "random",
            Self::Adversary => "adversary",
        }
    }

    /// Spec for a grid cell: delta sits at 1, the adversary uses modulus 1+i.
    pub fn spec(self, radius_sq: i64, seed: u64) -> CoeffSpec {
        match self {
            Self::AllOnes => CoeffSpec::AllOnes { radius_sq },
            Self::Delta => CoeffSpec::Delta { at: GaussianInt::new(1, 0), radius_sq },
            Self::Random => CoeffSpec::RandomPhases { radius_sq, seed },
            Self::Adversary => CoeffSpec::ProgressionAdversary { modulus: GaussianInt::new(1, 1), radius_sq },
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoeffKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-ones" | "ones" => Ok(Self::AllOnes),
            "delta" => Ok(Self::Delta),
            "random" => Ok(Self::Random),
            "adversary" => Ok(Self::Adversary),
            other => Err(Error::InvalidSpec(format!("unknown coefficient kind {other:?}"))),
        }
    }
}

/// Materializes a [`CoeffSpec`].
///
/// Random phases come from `Pcg32` (a 64-bit LCG state with the XSH-RR output
/// permutation; multiplier 6364136223846793005, increment 1442695040888963407),
/// consumed one `f64` per lattice point in sorted order. The sequence is
/// therefore identical across platforms for a fixed seed.
pub fn generate(spec: &CoeffSpec) -> Result<CoefficientSequence> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match *spec {
        CoeffSpec::AllOnes { radius_sq } => CoefficientSequence::from_fn(radius_sq, |_| one),
        CoeffSpec::Delta { at, radius_sq } => {
            if at.norm() > radius_sq {
                return Err(Error::InvalidSpec(format!("delta point {at} lies outside N(n) <= {radius_sq}")));
            }
            CoefficientSequence::from_fn(radius_sq, |n| if n == at { one } else { zero })
        }
        CoeffSpec::RandomPhases { radius_sq, seed } => {
            let mut rng = Pcg32::seed_from_u64(seed);
            CoefficientSequence::from_fn(radius_sq, |_| e(rng.gen::<f64>()))
        }
        CoeffSpec::ProgressionAdversary { modulus, radius_sq } => {
            if modulus.is_zero() {
                return Err(Error::InvalidSpec("adversary modulus must be nonzero".into()));
            }
            CoefficientSequence::from_fn(radius_sq, |n| if n.is_divisible_by(modulus) { one } else { zero })
        }
    }
}
