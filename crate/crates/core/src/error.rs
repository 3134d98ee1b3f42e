//! Error and result types shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by analysis, augmentation, I/O and pipeline operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input data violates an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The STFT configuration is not supported (non-power-of-two frame,
    /// bad hop, window/hop pair without stable overlap-add).
    #[error("unsupported config: {0}")]
    UnsupportedConfig(String),

    /// An augmentation policy violates its own invariants.
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    /// Malformed file content; `offset` is the byte position of the defect.
    #[error("format error at byte {offset}: {message}")]
    FormatError { offset: u64, message: String },

    /// Structurally valid file in a codec we do not decode.
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    /// Bad key or value in a configuration file.
    #[error("config error: {0}")]
    ConfigError(String),

    /// Batch input directory contains nothing to process.
    #[error("no input files found under {0}")]
    EmptyInput(PathBuf),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
