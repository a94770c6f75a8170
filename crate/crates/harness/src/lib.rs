//! Grid runner, report writers and verification suites for the `sieve` binary.

pub mod config;
pub mod grid;
pub mod report;
pub mod slopes;
pub mod verify;

pub use config::{ExperimentConfig, Format, Mode};
pub use grid::run_sieve_grid;
pub use report::{write_records, CSV_HEADER};
pub use slopes::slope_report;
pub use verify::{run_verify_suite, Suite};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad flags or config file; exit code 2.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate grid: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Core(#[from] gaussian_sieve::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Degenerate(_) => 2,
            _ => 1,
        }
    }
}
