//! Scenario configuration, runners and writers behind the `cosserat-forms`
//! binary.

pub mod config;
pub mod output;
pub mod report;
pub mod scenarios;

pub use config::{parse_config, ConfigError, Scenario, ScenarioConfig};
pub use report::{Check, Report};
pub use scenarios::{run_scenario, run_scenario_with_grids, verify_all};

/// Failure of a scenario run, as opposed to a failed check.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] cosserat_core::Error),
}

impl RunError {
    /// Process exit code: 2 for i/o, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Io(_) => 2,
            RunError::Core(_) => 1,
        }
    }
}
