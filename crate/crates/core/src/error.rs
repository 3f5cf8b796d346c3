use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by the command line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Usage,
    Domain,
    Io,
    Internal,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Usage => 1,
            ErrorCategory::Domain => 2,
            ErrorCategory::Io => 3,
            ErrorCategory::Internal => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is too small (need n >= 3)")]
    ModulusTooSmall(u64),
    #[error("modulus {0} must be odd")]
    EvenModulus(u64),
    #[error("{value} is not coprime to the modulus {modulus}")]
    NotCoprime { value: i128, modulus: u64 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("limit {limit} exceeds the configured bound {bound}")]
    LimitExceeded { limit: u64, bound: u64 },
    #[error("invalid base {0}: {1}")]
    InvalidBase(u64, &'static str),
    #[error("modulus {0} has no cyclic group of units mod-star")]
    NotCyclic(u64),
    #[error("modulus {0} is not classified (only odd moduli carry a cyclicity classification)")]
    NotClassified(u64),
    #[error("modulus {n} has the wrong shape: {expected}")]
    WrongShape { n: u64, expected: &'static str },
    #[error("square-root level {level} does not apply to n = {n}")]
    LevelInapplicable { n: u64, level: u8 },
    #[error("{b} is not a quadratic residue mod-star {n}")]
    NonResidue { b: u64, n: u64 },
    #[error("{b} is not a biquadratic residue mod-star {n}")]
    NotBiquadratic { b: u64, n: u64 },
    #[error("checkpoint {path}: row {row}: {reason}")]
    CheckpointCorrupt {
        path: PathBuf,
        row: usize,
        reason: String,
    },
    #[error("checkpoint {0} already exists; pass --resume to continue it")]
    CheckpointExists(PathBuf),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::CheckpointExists(_) => ErrorCategory::Usage,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::CheckpointCorrupt { .. } => {
                ErrorCategory::Io
            }
            Error::Consistency(_) => ErrorCategory::Internal,
            _ => ErrorCategory::Domain,
        }
    }
}
