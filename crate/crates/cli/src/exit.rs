use std::fmt;
use std::path::Path;

/// Exit codes: 1 malformed input, 2 invariant violation, 3 oracle failure,
/// 64 usage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Malformed = 1,
    Invariant = 2,
    Oracle = 3,
    Usage = 64,
}

#[derive(Debug)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    pub fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Malformed,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Invariant,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Usage,
            message: message.into(),
        }
    }

    pub fn oracle(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Oracle,
            message: message.into(),
        }
    }

    /// Classifies a library error raised while handling `path`. Bad
    /// parameters are usage errors, bad data is malformed input, and
    /// everything else violates an invariant of the design.
    pub fn from_core(path: &Path, err: spikemi::Error) -> Self {
        use spikemi::Error as E;
        let message = format!("{}: {err}", path.display());
        match err {
            E::InvalidParameter { .. } | E::InvalidWindow(_) | E::EmptyGrid => Self::usage(message),
            e if e.is_malformed() => Self::malformed(message),
            _ => Self::invariant(message),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::malformed(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
