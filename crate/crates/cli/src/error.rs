use thiserror::Error;

/// Exit status: all residuals pass.
pub const EXIT_PASS: i32 = 0;
/// Exit status: a residual or property exceeded its tolerance.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: bad configuration or a rejected construction.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown case `{0}` (see `list-cases`)")]
    UnknownCase(String),
    #[error("{0}")]
    Config(String),
    #[error("construction rejected: {0}")]
    Validation(dhmaps::Error),
    #[error(transparent)]
    Library(#[from] dhmaps::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}
