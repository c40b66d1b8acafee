use thiserror::Error;

/// Errors surfaced by configuration, generation and solver stages.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates an invariant (non-positive count,
    /// spreading factor larger than the array, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A requested scenario cannot be realized (e.g. more paths than grid
    /// cells, delays that cannot be made distinct).
    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    /// No PN sequence of the requested family/length/index exists in the
    /// built-in polynomial table.
    #[error("unsupported PN sequence: {0}")]
    UnsupportedSequence(String),

    /// Dimension mismatch between measurement data and codebook/system.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Solver input is empty or contains non-finite values.
    #[error("bad solver input: {0}")]
    BadSolverInput(String),

    /// File I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Parse failure for a config, codebook or path-set file.
    #[error("parse error: {0}")]
    Parse(String),
}
