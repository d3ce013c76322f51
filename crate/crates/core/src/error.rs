//! Error type shared by all analysis stages.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands have different orders.
    #[error("matrix order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// A float-backend value met an exact-backend value (or vice versa).
    /// Backends are never promoted silently.
    #[error("numeric backend mismatch: operands must both be float or both be exact")]
    BackendMismatch,

    /// An entry grid is not square.
    #[error("row {row} has {len} entries, expected {expected} (matrix must be square)")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },

    /// No entries were given; the order must be positive.
    #[error("matrix must have positive order")]
    EmptyMatrix,

    /// The eigenvalue iteration did not converge.
    #[error(
        "eigenvalue iteration failed to converge for order {order} \
         (residual tolerance reached: {achieved_tolerance:.3e})"
    )]
    EigenvalueConvergence {
        order: usize,
        achieved_tolerance: f64,
    },

    /// A singular value decomposition failed.
    #[error("singular value decomposition failed for a {order}x{order} matrix")]
    DecompositionFailure { order: usize },

    /// A rank sequence increased between consecutive powers; exact ranks can
    /// never do that, so the float rank tolerance is misconfigured.
    #[error(
        "rank sequence is not monotone at power {power} for eigenvalue {eigenvalue}: q = {q:?}; \
         adjust the rank tolerance or switch to the exact backend"
    )]
    NonMonotoneRanks {
        eigenvalue: String,
        power: usize,
        q: Vec<usize>,
    },

    /// A block count came out negative. Exact Weyr sequences are convex, so
    /// this signals rank-tolerance misconfiguration on the float backend.
    #[error(
        "rank sequence is not convex at block size {m} for eigenvalue {eigenvalue}: q = {q:?}; \
         adjust the rank tolerance or switch to the exact backend"
    )]
    ConvexityViolation {
        eigenvalue: String,
        m: usize,
        q: Vec<usize>,
    },

    /// Exact analysis needs the caller to supply the spectrum.
    #[error("exact-backend analysis requires a user-supplied spectrum")]
    MissingExactSpectrum,

    /// The user-supplied spectrum does not account for the whole matrix.
    #[error(
        "user-supplied spectrum is incomplete: algebraic multiplicities sum to {found} \
         but the order is {order}"
    )]
    IncompleteSpectrum { found: usize, order: usize },

    /// A user-supplied spectrum was given for a float-backend matrix.
    #[error("a user-supplied spectrum is only consumed by the exact backend")]
    UnexpectedSpectrum,

    /// The Hamiltonian of a GKLS model is not Hermitian.
    #[error(
        "hamiltonian is not hermitian: max entry deviation {deviation:.3e} \
         exceeds tolerance {tolerance:.3e} (inputs are rejected, not symmetrized)"
    )]
    NonHermitian { deviation: f64, tolerance: f64 },

    /// A jump rate is not a positive real number.
    #[error("jump rate {index} must be a positive real number, got {rate}")]
    NonPositiveRate { index: usize, rate: String },

    /// The declared system dimension does not match the matrix order.
    #[error("system dimension {system_dimension} implies order {expected}, matrix has order {order}")]
    SystemDimensionMismatch {
        system_dimension: usize,
        expected: usize,
        order: usize,
    },

    /// An exact scalar literal could not be parsed.
    #[error("cannot parse exact scalar {input:?}: {reason}")]
    ScalarParse { input: String, reason: String },
}
