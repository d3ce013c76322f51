//! Jordan-structure analysis of evolution generators.
//!
//! The headline quantity is the *index of cyclicity* η of a square complex
//! matrix `L`: the largest geometric multiplicity over the spectrum,
//!
//! ```text
//! η = max over eigenvalues λ of dim ker(L − λI)
//! ```
//!
//! which equals the largest per-eigenvalue Jordan block count. For a quantum
//! evolution generator (a Lindbladian acting on vectorized density matrices)
//! η is the minimal number of distinct observables needed for stroboscopic
//! tomography, to be compared against the N²−1 observables of static
//! tomography.
//!
//! The crate computes η by two independent routes and cross-checks them:
//!
//! * the definitional route: one kernel dimension per distinct eigenvalue;
//! * the Jordan route: the Weyr rank sequence `q_k(λ) = rank((L − λI)^k)`,
//!   whose second difference `q_{m−1} − 2 q_m + q_{m+1}` counts the Jordan
//!   blocks of each size `m`.
//!
//! Two numeric backends are supported. The float backend works on measured
//! data: eigenvalues come from a Schur decomposition, ranks from singular
//! value thresholds, and every rank decision is recorded with a confidence
//! flag. The exact backend works over Gaussian rationals, makes the Jordan
//! structure decidable, and requires the caller to supply the (exact)
//! eigenvalues.
//!
//! ```
//! use cyclicity_core::{analyze, AnalysisConfig, ComplexMatrix};
//!
//! // diag(0, -2, -2, 0): two eigenvalues, each with a two-dimensional kernel
//! let l = ComplexMatrix::diagonal_float(&[0.0, -2.0, -2.0, 0.0]);
//! let report = analyze(&l, &AnalysisConfig::default()).unwrap();
//! assert_eq!(report.eta_from_blocks, 2);
//! assert_eq!(report.eta_from_kernels, 2);
//! assert!(report.agreement);
//! ```

pub mod cyclicity;
pub mod error;
pub mod lindblad;
pub mod matrix;
pub mod scalar;
pub mod spectral;
pub mod weyr;

pub use cyclicity::{
    analyze, kernel_dimension, AnalysisConfig, CyclicityReport, Diagnostics, EigenvalueAnalysis,
    ScalarRepr,
};
pub use error::Error;
pub use lindblad::{
    apply_generator, build_superoperator, trace_check, GKLSModel, JumpOperator, Superoperator,
    TraceCheck,
};
pub use matrix::{Backend, ComplexMatrix, ComplexVector};
pub use scalar::{ComplexScalar, GaussianRational};
pub use spectral::{cluster, eigenvalues, EigenvalueCluster, Spectrum};
pub use weyr::{block_counts, rank_decision, rank_of, weyr_sequence};
pub use weyr::{JordanStructure, RankDecision, RankPolicy, WeyrProfile};

/// Convenience alias for results carrying this crate's [`Error`].
pub type Result<T> = std::result::Result<T, Error>;

pub use num_complex::Complex64;
