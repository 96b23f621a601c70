use std::fmt;
use std::path::Path;

/// CLI failure with its exit code: 2 usage/validation, 3 numerical, 1 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// Library error raised while handling `flag`.
    pub fn flag(flag: &str, err: smfbm::Error) -> Self {
        match err {
            smfbm::Error::Numerical(_) => CliError::Numerical(err.to_string()),
            smfbm::Error::Domain(m) => CliError::Usage(format!("{flag}: {m}")),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<smfbm::Error> for CliError {
    fn from(err: smfbm::Error) -> Self {
        match err {
            smfbm::Error::Numerical(_) => CliError::Numerical(err.to_string()),
            smfbm::Error::Domain(m) => CliError::Usage(m),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}
