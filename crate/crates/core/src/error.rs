use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the codec, decoder and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field degree p={0} (expected 2..=12)")]
    FieldDegree(u32),
    #[error("polynomial {poly:#x} does not have degree {p}")]
    PolyDegree { poly: u32, p: u32 },
    #[error("polynomial {poly:#x} is reducible: divisible by {factor:#x}")]
    ReduciblePoly { poly: u32, factor: u32 },
    #[error("symbol value {value} outside field of order {q}")]
    SymbolRange { value: usize, q: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("edge weight must be nonzero")]
    ZeroWeight,

    #[error("infeasible graph: variable degree {dv} with {checks} checks and {vars} variables")]
    InfeasibleDegree { dv: usize, checks: usize, vars: usize },
    #[error("parity-check matrix has rank {rank} < {checks}; reseed the edge weights")]
    RankDeficient { rank: usize, checks: usize },
    #[error("duplicate edge between check {check} and variable {var}")]
    DuplicateEdge { check: usize, var: usize },
    #[error("missing incoming message from variable {var} at check {check}")]
    MissingMessage { check: usize, var: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("bit sequence of length {len} is not a multiple of {p}")]
    BitLength { len: usize, p: u32 },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input (configuration, file
    /// contents) rather than a runtime failure.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Parse { .. })
    }
}
