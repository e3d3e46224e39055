//! Scenario files, batch execution and run-directory reports.

pub mod config;
pub mod execute;
pub mod report;

pub use config::{parse_config, DataSpec, ScenarioKind, ScenarioSpec};
pub use execute::{execute, ExecStatus, Execution};
pub use report::{report, Check, DiagnosticsTable, Outcome, RunReport};

use crate::error::LabError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const RUNTIME: i32 = 3;
}

/// Exit code for an error: bad input is a validation failure, anything that
/// went wrong while computing or writing is a runtime abort.
pub fn exit_code(err: &LabError) -> i32 {
    match err {
        LabError::Config { .. }
        | LabError::Csv { .. }
        | LabError::NoSamples(_)
        | LabError::Snapshot(_)
        | LabError::Refused(_)
        | LabError::InvalidParameter(_)
        | LabError::InvalidGrid(_)
        | LabError::UnsupportedExponent(_)
        | LabError::ShellOutOfRange { .. }
        | LabError::DivergenceViolation { .. }
        | LabError::Degenerate(_) => exit::VALIDATION,
        _ => exit::RUNTIME,
    }
}
