use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path} is not valid {encoding} at byte {offset}")]
    Decode {
        path: PathBuf,
        encoding: &'static str,
        offset: usize,
    },

    #[error("{0} contains no sentences")]
    EmptyCorpus(PathBuf),

    #[error("no candidate punctuation to evaluate")]
    NoCandidates,

    #[error("missing resource: {0}")]
    MissingResource(String),

    #[error("no contextual predicate survives cutoff {cutoff} (highest count {max_count})")]
    EmptyRegistry { cutoff: u64, max_count: u64 },

    #[error("cannot train on an empty event set")]
    NoEvents,

    #[error("training diverged: non-finite value for feature {feature} at iteration {iteration}")]
    NonFinite { feature: String, iteration: usize },

    #[error("model format: {0}")]
    Format(String),

    #[error("unsupported model format version {found} (expected {expected})")]
    Version { found: String, expected: String },

    #[error("model registry fingerprint mismatch: file says {stored}, contents hash to {computed}")]
    Fingerprint { stored: String, computed: String },

    #[error("model was trained with `{model}` templates but `{requested}` was requested")]
    TemplateMismatch {
        model: &'static str,
        requested: &'static str,
    },

    #[error("lexicon checksum mismatch: model expects {expected}, supplied lexicons hash to {found}")]
    LexiconMismatch { expected: String, found: String },

    #[error("requested training size {size} exceeds the {available} available sentences")]
    SizeExceedsCorpus { size: usize, available: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::Write { .. } => 3,
            Error::Decode { .. }
            | Error::EmptyCorpus(_)
            | Error::Format(_)
            | Error::Version { .. }
            | Error::Fingerprint { .. } => 4,
            Error::NonFinite { .. } | Error::NoEvents | Error::EmptyRegistry { .. } => 5,
            Error::TemplateMismatch { .. }
            | Error::LexiconMismatch { .. }
            | Error::MissingResource(_) => 6,
            Error::NoCandidates | Error::SizeExceedsCorpus { .. } | Error::Invalid(_) => 1,
        }
    }
}
