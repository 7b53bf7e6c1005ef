use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values built over different variable tables were combined.
    #[error("mismatched variable tables: {0}")]
    RingMismatch(String),

    /// A precondition on the mathematical domain was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An x-exponent left the configured Laurent window during composition.
    #[error("x-exponent {exponent} exceeds the window cap {cap}")]
    ExponentCap { exponent: i64, cap: i64 },

    /// A configurable resource limit was hit; `detail` carries partial diagnostics.
    #[error("capacity exceeded in {phase}: {detail}")]
    Capacity { phase: &'static str, detail: String },

    /// Textual input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A composite that must be in normal form is not; this is an engine defect.
    #[error("normal-form violation: {0}")]
    NormalForm(String),

    /// A golden verification check diverged from its expected value.
    #[error("verification mismatch in {check}: {detail}")]
    Verification { check: String, detail: String },

    /// The caller cancelled a long-running computation.
    #[error("cancelled")]
    Cancelled,
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
