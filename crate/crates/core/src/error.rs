use thiserror::Error;

/// Error type shared by all engines.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally invalid input (malformed pairing, size mismatch, bad block sizes).
    #[error("validation error: {0}")]
    Validation(String),

    /// Arguments outside an operation's documented domain.
    #[error("argument error: {0}")]
    Argument(String),

    /// Two kernels do not live on the same grid.
    #[error("grid mismatch: {0}")]
    Grid(String),

    /// Operator applied outside its domain (e.g. inverse number operator on a nonzero mean).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Contraction-word decomposition failed (crossing or non-respectful pairing).
    #[error("decomposition error: {0}")]
    Decomposition(String),

    /// Input degenerated to zero where a nonzero value is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Exact integer arithmetic overflowed the configured width.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A complexity guard refused the computation.
    #[error("resource guard: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for guard errors that signal "input too large", as opposed to invalid input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
