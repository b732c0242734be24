//! Error type shared by every module in the crate.
//!
//! All fallible operations return [`ToolkitError`], which carries a coarse
//! [`ErrorKind`] for programmatic matching, a human-readable message, and a
//! list of key/value context pairs (grid sizes, tolerances, offending values)
//! so that a failure deep inside a quadrature loop still tells the caller
//! what was being integrated and how far the computation got.

use std::fmt;

/// Coarse classification of toolkit failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// A semigroup operation was asked to run backwards in time.
    ///
    /// Decaying states evolve under a one-parameter semigroup defined for
    /// `t >= 0` only; requests with `t < 0` are a domain error, not a value
    /// to be extrapolated.
    SemigroupDomain,
    /// An iterative or adaptive numerical process failed to reach its
    /// tolerance (quadrature self-convergence, root refinement, winding
    /// stabilization).
    NonConvergence,
    /// Model parameters violate a documented precondition (non-positive
    /// width, pole on the physical half-line, non-Hermitian Hamiltonian, ...).
    InvalidModel,
    /// An internal mathematical invariant failed after construction; this
    /// indicates a bug or inconsistent input rather than a bad parameter.
    InvariantViolation,
    /// Reading or writing external data failed.
    Io,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ErrorKind::SemigroupDomain => "semigroup-domain",
            ErrorKind::NonConvergence => "non-convergence",
            ErrorKind::InvalidModel => "invalid-model",
            ErrorKind::InvariantViolation => "invariant-violation",
            ErrorKind::Io => "io",
        };
        f.write_str(name)
    }
}

/// Error carrying a kind, a message, and structured context.
#[derive(Debug, Clone)]
pub struct ToolkitError {
    kind: ErrorKind,
    message: String,
    context: Vec<(String, String)>,
}

impl ToolkitError {
    /// Creates an error of the given kind with a non-empty message.
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty(), "error messages must not be empty");
        ToolkitError {
            kind,
            message,
            context: Vec::new(),
        }
    }

    /// Shorthand for [`ErrorKind::SemigroupDomain`].
    pub fn semigroup_domain(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::SemigroupDomain, message)
    }

    /// Shorthand for [`ErrorKind::NonConvergence`].
    pub fn non_convergence(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::NonConvergence, message)
    }

    /// Shorthand for [`ErrorKind::InvalidModel`].
    pub fn invalid_model(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvalidModel, message)
    }

    /// Shorthand for [`ErrorKind::InvariantViolation`].
    pub fn invariant_violation(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvariantViolation, message)
    }

    /// Shorthand for [`ErrorKind::Io`].
    pub fn io(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Io, message)
    }

    /// Attaches a key/value context pair and returns the error.
    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.context.push((key.into(), value.to_string()));
        self
    }

    /// The coarse classification of this error.
    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    /// The human-readable message (without context pairs).
    pub fn message(&self) -> &str {
        &self.message
    }

    /// The attached context pairs, in insertion order.
    pub fn context(&self) -> &[(String, String)] {
        &self.context
    }
}

impl fmt::Display for ToolkitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)?;
        for (key, value) in &self.context {
            write!(f, " [{key}={value}]")?;
        }
        Ok(())
    }
}

impl std::error::Error for ToolkitError {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, ToolkitError>;
