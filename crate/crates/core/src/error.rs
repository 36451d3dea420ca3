use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("expectation value has imaginary part {imag}; observable is not Hermitian")]
    ComplexExpectation { imag: f64 },

    #[error("operator is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("malformed context: {0}")]
    MalformedContext(String),

    #[error("target must be +1 or -1, got {0}")]
    InvalidTarget(i64),

    #[error("labels must differ for an exchange")]
    SameLabel,

    #[error("assignment has no entry for {0}")]
    MissingEntry(String),

    #[error("transmissivity must lie in [0, 1], got {0}")]
    TransmissivityOutOfRange(f64),

    #[error("{what}: computed {computed}, expected {expected}")]
    Inconsistent {
        what: String,
        computed: f64,
        expected: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
