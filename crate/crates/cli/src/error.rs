use std::fmt;

use assort_core::Error as CoreError;

/// Pipeline stage a failure is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Config,
    Generate,
    Label,
    Train,
    Eval,
    Io,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Generate => "generate",
            Stage::Label => "label",
            Stage::Train => "train",
            Stage::Eval => "eval",
            Stage::Io => "io",
        })
    }
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_TRAINING: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, thiserror::Error)]
#[error("error[{stage}]: {message}")]
pub struct CliError {
    pub stage: Stage,
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(stage: Stage, exit_code: i32, message: impl Into<String>) -> Self {
        Self {
            stage,
            exit_code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Stage::Config, EXIT_CONFIG, message)
    }

    /// Attributes a library error to a stage, choosing the exit code from
    /// the error kind first and the stage second.
    pub fn at(stage: Stage, err: CoreError) -> Self {
        let exit_code = match (&err, stage) {
            (CoreError::Io(_), _) | (CoreError::Parse { .. }, _) | (CoreError::VersionMismatch { .. }, _) => {
                EXIT_IO
            }
            (CoreError::NonConvergence { .. }, _) => EXIT_NON_CONVERGENCE,
            (_, Stage::Train | Stage::Eval) => EXIT_TRAINING,
            _ => EXIT_CONFIG,
        };
        Self::new(stage, exit_code, err.to_string())
    }

    pub fn io(err: std::io::Error) -> Self {
        Self::new(Stage::Io, EXIT_IO, err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
