use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gaussian_sieve::sieve::{CoeffKind, FamilyKind, DEFAULT_EPSILON};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One dyadic window `cap/2 < N(q) <= cap`.
    #[default]
    Windowed,
    /// Every dyadic window below the cap, summed.
    Cumulative,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Windowed => "windowed",
            Self::Cumulative => "cumulative",
        }
    }
}

impl FromStr for Mode {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "windowed" => Ok(Self::Windowed),
            "cumulative" => Ok(Self::Cumulative),
            other => Err(HarnessError::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(HarnessError::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// A grid of experiments. Families and coefficient kinds use their CLI labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "all_families")]
    pub families: Vec<String>,
    #[serde(rename = "Qvalues", alias = "Q", default)]
    pub q_values: Vec<f64>,
    #[serde(rename = "Nvalues", alias = "N", default)]
    pub n_values: Vec<i64>,
    #[serde(rename = "coeffSpecs", alias = "coeff", default = "default_coeffs")]
    pub coeff_specs: Vec<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    /// Worker threads; 0 lets rayon decide.
    #[serde(default)]
    pub threads: usize,
    #[serde(rename = "outputPath", alias = "out", default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Fill `elapsed_ms`. Off by default so output bytes do not depend on timing.
    #[serde(default)]
    pub timings: bool,
}

fn all_families() -> Vec<String> {
    vec!["all".into(), "natural".into(), "square-norm".into()]
}

fn default_coeffs() -> Vec<String> {
    vec!["random".into()]
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_seed() -> u64 {
    42
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: all_families(),
            q_values: Vec::new(),
            n_values: Vec::new(),
            coeff_specs: default_coeffs(),
            epsilon: DEFAULT_EPSILON,
            seed: default_seed(),
            mode: Mode::Windowed,
            threads: 0,
            output_path: None,
            format: Format::Csv,
            timings: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn family_kinds(&self) -> Result<Vec<FamilyKind>, HarnessError> {
        self.families.iter().map(|f| f.parse().map_err(|e| HarnessError::Config(format!("{e}")))).collect()
    }

    pub fn coeff_kinds(&self) -> Result<Vec<CoeffKind>, HarnessError> {
        self.coeff_specs.iter().map(|c| c.parse().map_err(|e| HarnessError::Config(format!("{e}")))).collect()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.q_values.is_empty() || self.n_values.is_empty() {
            return Err(HarnessError::Config("Q and N values must be nonempty".into()));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(q.is_finite() && **q >= 1.0)) {
            return Err(HarnessError::Config(format!("Q = {q} is not >= 1")));
        }
        if let Some(n) = self.n_values.iter().find(|n| **n < 1) {
            return Err(HarnessError::Config(format!("N = {n} is not >= 1")));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(HarnessError::Config(format!("epsilon = {} is not >= 0", self.epsilon)));
        }
        if self.families.is_empty() || self.coeff_specs.is_empty() {
            return Err(HarnessError::Config("families and coefficient specs must be nonempty".into()));
        }
        self.family_kinds()?;
        self.coeff_kinds()?;
        Ok(())
    }
}
