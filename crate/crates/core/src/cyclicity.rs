//! The index of cyclicity, computed by two routes and cross-checked.
//!
//! Route one (definitional): η is the largest kernel dimension
//! `n − rank(L − λI)` over the distinct eigenvalues λ. Route two (Jordan):
//! η is the largest per-eigenvalue total block count `Σ_m N(m, λ)` from the
//! Weyr rank sequences. The two are equal in exact arithmetic; on the float
//! backend their disagreement — and any convexity violation on the way — is
//! the primary numerical-health signal, so both routes always run and the
//! report carries both values plus every rank decision they rested on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::{Backend, ComplexMatrix};
use crate::scalar::{ComplexScalar, GaussianRational};
use crate::spectral::{self, Spectrum};
use crate::weyr::{self, RankDecision, RankPolicy};
use crate::Result;

/// Tuning knobs for one analysis run.
///
/// The invariant from the interface layer holds here too: an exact-backend
/// matrix requires `user_spectrum` (exact eigenvalues are not computed), and
/// a float-backend matrix must not carry one.
#[derive(Clone, Debug, Default)]
pub struct AnalysisConfig {
    /// Relative rank tolerance; `None` uses [`RankPolicy::for_order`].
    pub rank_rel_tol: Option<f64>,
    /// Eigenvalue clustering tolerance; `None` uses
    /// [`spectral::default_cluster_tol`]. Float backend only.
    pub cluster_tol: Option<f64>,
    /// Distinct exact eigenvalues, required for exact-backend matrices.
    /// Duplicates are merged; completeness is verified against the order.
    pub user_spectrum: Option<Vec<GaussianRational>>,
    /// When the matrix is a superoperator on an N-dimensional system, the
    /// system dimension N. Enables the static-tomography observable count
    /// N²−1 in the report; never inferred from the order alone.
    pub system_dimension: Option<usize>,
}

/// Backend-independent scalar representation used in reports: a `[re, im]`
/// pair for float values, the canonical rational string for exact values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Float([f64; 2]),
    Exact(String),
}

impl From<&ComplexScalar> for ScalarRepr {
    fn from(s: &ComplexScalar) -> Self {
        match s {
            ComplexScalar::Float(z) => ScalarRepr::Float([z.re, z.im]),
            ComplexScalar::Exact(g) => ScalarRepr::Exact(g.to_string()),
        }
    }
}

impl fmt::Display for ScalarRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarRepr::Float([re, im]) => write!(f, "{re}{im:+}i"),
            ScalarRepr::Exact(s) => f.write_str(s),
        }
    }
}

/// Everything the analysis established about one distinct eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueAnalysis {
    pub representative: ScalarRepr,
    /// `n − q_s`: total dimension of this eigenvalue's blocks.
    pub algebraic_multiplicity: usize,
    /// `q_0 − q_1`: number of blocks / independent eigenvectors.
    pub geometric_multiplicity: usize,
    /// The rank sequence `q_0, …, q_{s+1}`, kept in full so the block
    /// counts can be re-derived without rerunning the analysis.
    pub weyr_sequence: Vec<usize>,
    /// Block size ↦ count, positive counts only.
    pub block_counts: BTreeMap<usize, usize>,
    /// Σ_m N(m, λ), the Jordan-route per-eigenvalue value.
    pub total_blocks: usize,
    /// `n − rank(L − λI)` from the definitional route's own rank decision.
    pub kernel_dimension: usize,
    /// Smallest singular value of `L − λI` (float backend only): how close
    /// the representative is to a true eigenvalue.
    pub spectral_residual: Option<f64>,
    /// One decision per Weyr power, in order of increasing power.
    pub rank_decisions: Vec<RankDecision>,
    /// The definitional route's rank decision.
    pub kernel_rank_decision: RankDecision,
    /// True when any rank decision above was low-confidence.
    pub low_confidence: bool,
}

/// Run-level tolerances and health flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rank_rel_tol: f64,
    /// Clustering tolerance actually used (float backend only).
    pub cluster_tol: Option<f64>,
    /// Largest spectral residual over all representatives (float only).
    pub max_spectral_residual: Option<f64>,
    /// True when any rank decision anywhere was low-confidence.
    pub low_confidence: bool,
}

/// The full analysis result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub order: usize,
    pub backend: String,
    /// Per-eigenvalue analyses, sorted by representative (re, then im).
    pub eigenvalues: Vec<EigenvalueAnalysis>,
    /// η by the Jordan route: max over λ of Σ_m N(m, λ).
    pub eta_from_blocks: usize,
    /// η by the definitional route: max over λ of dim ker(L − λI).
    pub eta_from_kernels: usize,
    /// The two routes agree. Always true on the exact backend; on the float
    /// backend a disagreement signals rank-tolerance trouble.
    pub agreement: bool,
    /// Every eigenvalue attaining the Jordan-route maximum.
    pub argmax_eigenvalues: Vec<ScalarRepr>,
    pub system_dimension: Option<usize>,
    /// N²−1 when the input is tagged as a superoperator on an N-dimensional
    /// system: the observable count static tomography would need.
    pub static_observable_count: Option<usize>,
    pub diagnostics: Diagnostics,
}

/// `dim ker(L − λI) = n − rank(L − λI)`: the geometric multiplicity of λ.
pub fn kernel_dimension(
    l: &ComplexMatrix,
    lambda: &ComplexScalar,
    policy: &RankPolicy,
) -> Result<usize> {
    let shifted = l.shift(lambda)?;
    Ok(l.order() - weyr::rank_of(&shifted, policy)?)
}

/// Computes the index of cyclicity of `l` by both routes and assembles the
/// comparison report. See the module docs for the route definitions.
pub fn analyze(l: &ComplexMatrix, config: &AnalysisConfig) -> Result<CyclicityReport> {
    let n = l.order();
    if let Some(sys) = config.system_dimension {
        if sys * sys != n {
            return Err(Error::SystemDimensionMismatch {
                system_dimension: sys,
                expected: sys * sys,
                order: n,
            });
        }
    }
    let policy = RankPolicy {
        rel_tol: config
            .rank_rel_tol
            .unwrap_or_else(|| RankPolicy::for_order(n).rel_tol),
    };

    let (analyses, cluster_tol) = match l.backend() {
        Backend::Float => {
            if config.user_spectrum.is_some() {
                return Err(Error::UnexpectedSpectrum);
            }
            let tol = config
                .cluster_tol
                .unwrap_or_else(|| spectral::default_cluster_tol(l.fro_norm()));
            let raw = spectral::eigenvalues(l)?;
            let spectrum = spectral::cluster(&raw, tol);
            (analyze_float_spectrum(l, &spectrum, &policy)?, Some(tol))
        }
        Backend::Exact => {
            let values = config
                .user_spectrum
                .as_ref()
                .ok_or(Error::MissingExactSpectrum)?;
            (analyze_exact_spectrum(l, values, &policy)?, None)
        }
    };

    let eta_from_blocks = analyses.iter().map(|a| a.total_blocks).max().unwrap_or(0);
    let eta_from_kernels = analyses
        .iter()
        .map(|a| a.kernel_dimension)
        .max()
        .unwrap_or(0);
    let argmax_eigenvalues = analyses
        .iter()
        .filter(|a| a.total_blocks == eta_from_blocks)
        .map(|a| a.representative.clone())
        .collect();
    let max_spectral_residual = analyses
        .iter()
        .filter_map(|a| a.spectral_residual)
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |m| m.max(r)))
        });
    let low_confidence = analyses.iter().any(|a| a.low_confidence);

    Ok(CyclicityReport {
        order: n,
        backend: match l.backend() {
            Backend::Float => "float".to_string(),
            Backend::Exact => "exact".to_string(),
        },
        eigenvalues: analyses,
        eta_from_blocks,
        eta_from_kernels,
        agreement: eta_from_blocks == eta_from_kernels,
        argmax_eigenvalues,
        system_dimension: config.system_dimension,
        static_observable_count: config.system_dimension.map(|sys| sys * sys - 1),
        diagnostics: Diagnostics {
            rank_rel_tol: policy.rel_tol,
            cluster_tol,
            max_spectral_residual,
            low_confidence,
        },
    })
}

fn analyze_one(
    l: &ComplexMatrix,
    lambda: &ComplexScalar,
    policy: &RankPolicy,
    spectral_residual: Option<f64>,
) -> Result<EigenvalueAnalysis> {
    // Jordan route: rank sequence, then block counts.
    let profile = weyr::weyr_sequence(l, lambda, policy)?;
    let structure = weyr::block_counts(&profile)?;
    let total_blocks: usize = structure.block_counts.values().sum();

    // Definitional route: one fresh rank of the shifted matrix.
    let shifted = l.shift(lambda)?;
    let kernel_rank_decision = weyr::rank_decision(&shifted, policy)?;
    let kernel_dimension = l.order() - kernel_rank_decision.rank;

    let low_confidence =
        profile.has_low_confidence() || kernel_rank_decision.low_confidence;

    Ok(EigenvalueAnalysis {
        representative: ScalarRepr::from(lambda),
        algebraic_multiplicity: structure.algebraic_multiplicity,
        geometric_multiplicity: structure.geometric_multiplicity,
        weyr_sequence: profile.q.clone(),
        block_counts: structure.block_counts,
        total_blocks,
        kernel_dimension,
        spectral_residual,
        rank_decisions: profile.rank_decisions,
        kernel_rank_decision,
        low_confidence,
    })
}

fn analyze_float_spectrum(
    l: &ComplexMatrix,
    spectrum: &Spectrum,
    policy: &RankPolicy,
) -> Result<Vec<EigenvalueAnalysis>> {
    let mut out = Vec::with_capacity(spectrum.clusters.len());
    for cluster in &spectrum.clusters {
        let lambda = ComplexScalar::Float(cluster.representative);
        let shifted = l.shift(&lambda)?;
        let residual = smallest_singular_value(&shifted)?;
        out.push(analyze_one(l, &lambda, policy, Some(residual))?);
    }
    Ok(out)
}

fn analyze_exact_spectrum(
    l: &ComplexMatrix,
    values: &[GaussianRational],
    policy: &RankPolicy,
) -> Result<Vec<EigenvalueAnalysis>> {
    let mut distinct: Vec<GaussianRational> = values.to_vec();
    distinct.sort_by(|a, b| a.sort_cmp(b));
    distinct.dedup();

    let mut out = Vec::with_capacity(distinct.len());
    for value in &distinct {
        let lambda = ComplexScalar::Exact(value.clone());
        out.push(analyze_one(l, &lambda, policy, None)?);
    }

    // An eigenvalue list that misses part of the spectrum leaves algebraic
    // multiplicities that cannot sum to the order.
    let found: usize = out.iter().map(|a| a.algebraic_multiplicity).sum();
    if found != l.order() {
        return Err(Error::IncompleteSpectrum {
            found,
            order: l.order(),
        });
    }
    Ok(out)
}

fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    let dense = m.as_float().expect("float backend");
    let svd = dense
        .to_dmatrix()
        .try_svd(false, false, f64::EPSILON, 100 * dense.n)
        .ok_or(Error::DecompositionFailure { order: dense.n })?;
    Ok(svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Backend;
    use num_traits::One;

    fn fscalar(x: f64) -> ComplexScalar {
        ComplexScalar::from(x)
    }

    fn policy(n: usize) -> RankPolicy {
        RankPolicy::for_order(n)
    }

    #[test]
    fn kernel_dimension_examples() {
        let i3 = ComplexMatrix::identity(3, Backend::Float);
        assert_eq!(kernel_dimension(&i3, &fscalar(1.0), &policy(3)).unwrap(), 3);

        let j4 = ComplexMatrix::jordan_block(4, &fscalar(0.0));
        assert_eq!(kernel_dimension(&j4, &fscalar(0.0), &policy(4)).unwrap(), 1);

        let l = ComplexMatrix::direct_sum(&[
            ComplexMatrix::jordan_block(2, &fscalar(0.0)),
            ComplexMatrix::jordan_block(1, &fscalar(0.0)),
        ])
        .unwrap();
        assert_eq!(kernel_dimension(&l, &fscalar(0.0), &policy(3)).unwrap(), 2);
    }

    #[test]
    fn identity_is_maximally_degenerate() {
        let l = ComplexMatrix::identity(4, Backend::Float);
        let report = analyze(&l, &AnalysisConfig::default()).unwrap();
        assert_eq!(report.eta_from_blocks, 4);
        assert_eq!(report.eta_from_kernels, 4);
        assert!(report.agreement);
        assert_eq!(report.argmax_eigenvalues, vec![ScalarRepr::Float([1.0, 0.0])]);
        assert_eq!(report.eigenvalues.len(), 1);
        assert_eq!(report.eigenvalues[0].block_counts, BTreeMap::from([(1, 4)]));
    }

    #[test]
    fn single_jordan_block_has_eta_one() {
        let l = ComplexMatrix::jordan_block(4, &fscalar(0.5));
        let report = analyze(&l, &AnalysisConfig::default()).unwrap();
        assert_eq!(report.eta_from_blocks, 1);
        assert_eq!(report.eta_from_kernels, 1);
        assert!(report.agreement);
        assert_eq!(report.eigenvalues[0].block_counts, BTreeMap::from([(4, 1)]));
        assert_eq!(report.eigenvalues[0].algebraic_multiplicity, 4);
        assert_eq!(report.eigenvalues[0].geometric_multiplicity, 1);
    }

    #[test]
    fn dephasing_diagonal_has_eta_two() {
        // Brute-force oracle for a diagonal matrix: the kernel dimension at λ
        // is the number of diagonal entries equal to λ.
        let diag = [0.0, -2.0, -2.0, 0.0];
        let l = ComplexMatrix::diagonal_float(&diag);
        let brute = |lambda: f64| diag.iter().filter(|d| **d == lambda).count();
        assert_eq!(brute(0.0), 2);
        assert_eq!(brute(-2.0), 2);

        let config = AnalysisConfig {
            system_dimension: Some(2),
            ..Default::default()
        };
        let report = analyze(&l, &config).unwrap();
        assert_eq!(report.eta_from_blocks, 2);
        assert_eq!(report.eta_from_kernels, 2);
        assert!(report.agreement);
        assert_eq!(report.static_observable_count, Some(3));
        assert_eq!(report.eigenvalues.len(), 2);
        assert_eq!(report.argmax_eigenvalues.len(), 2);
        for a in &report.eigenvalues {
            assert_eq!(a.kernel_dimension, 2);
            assert_eq!(a.total_blocks, 2);
        }
    }

    #[test]
    fn exact_backend_requires_and_checks_spectrum() {
        let l = ComplexMatrix::identity(3, Backend::Exact);
        assert_eq!(
            analyze(&l, &AnalysisConfig::default()),
            Err(Error::MissingExactSpectrum)
        );

        let config = AnalysisConfig {
            user_spectrum: Some(vec![GaussianRational::one()]),
            ..Default::default()
        };
        let report = analyze(&l, &config).unwrap();
        assert_eq!(report.eta_from_blocks, 3);
        assert!(report.agreement);

        // diag(2, 2, 5) with only λ = 2 supplied: multiplicities sum to 2 ≠ 3.
        let d = ComplexMatrix::diagonal(&[
            ComplexScalar::Exact(GaussianRational::from_integer(2)),
            ComplexScalar::Exact(GaussianRational::from_integer(2)),
            ComplexScalar::Exact(GaussianRational::from_integer(5)),
        ])
        .unwrap();
        let config = AnalysisConfig {
            user_spectrum: Some(vec![GaussianRational::from_integer(2)]),
            ..Default::default()
        };
        assert_eq!(
            analyze(&d, &config),
            Err(Error::IncompleteSpectrum { found: 2, order: 3 })
        );
    }

    #[test]
    fn float_backend_rejects_user_spectrum() {
        let l = ComplexMatrix::identity(2, Backend::Float);
        let config = AnalysisConfig {
            user_spectrum: Some(vec![GaussianRational::one()]),
            ..Default::default()
        };
        assert_eq!(analyze(&l, &config), Err(Error::UnexpectedSpectrum));
    }

    #[test]
    fn system_dimension_must_match_order() {
        let l = ComplexMatrix::identity(3, Backend::Float);
        let config = AnalysisConfig {
            system_dimension: Some(2),
            ..Default::default()
        };
        assert_eq!(
            analyze(&l, &config),
            Err(Error::SystemDimensionMismatch {
                system_dimension: 2,
                expected: 4,
                order: 3
            })
        );
    }

    #[test]
    fn scaling_does_not_change_eta() {
        let l = ComplexMatrix::direct_sum(&[
            ComplexMatrix::jordan_block(2, &fscalar(1.0)),
            ComplexMatrix::jordan_block(1, &fscalar(1.0)),
            ComplexMatrix::jordan_block(2, &fscalar(-1.0)),
        ])
        .unwrap();
        let base = analyze(&l, &AnalysisConfig::default()).unwrap();
        for c in [2.0, -0.5, 10.0] {
            let scaled = l.scale(&fscalar(c)).unwrap();
            let report = analyze(&scaled, &AnalysisConfig::default()).unwrap();
            assert_eq!(report.eta_from_blocks, base.eta_from_blocks, "c = {c}");
            assert_eq!(report.eta_from_kernels, base.eta_from_kernels, "c = {c}");
        }
    }

    #[test]
    fn exact_similarity_preserves_the_report_counts() {
        let two = ComplexScalar::Exact(GaussianRational::from_integer(2));
        let five = ComplexScalar::Exact(GaussianRational::from_integer(5));
        let j = ComplexMatrix::direct_sum(&[
            ComplexMatrix::jordan_block(2, &two),
            ComplexMatrix::jordan_block(1, &two),
            ComplexMatrix::jordan_block(1, &five),
        ])
        .unwrap();
        let spectrum = vec![
            GaussianRational::from_integer(2),
            GaussianRational::from_integer(5),
        ];
        let config = AnalysisConfig {
            user_spectrum: Some(spectrum),
            ..Default::default()
        };

        // shear conjugation: P = I + (1/3)·E_{0,3}, P⁻¹ = I − (1/3)·E_{0,3}
        let mut p = ComplexMatrix::identity(4, Backend::Exact);
        let mut pinv = ComplexMatrix::identity(4, Backend::Exact);
        if let (ComplexMatrix::Exact(mp), ComplexMatrix::Exact(mpi)) = (&mut p, &mut pinv) {
            mp.set(0, 3, GaussianRational::from_ratio(1, 3));
            mpi.set(0, 3, GaussianRational::from_ratio(-1, 3));
        }
        let conjugated = p.matmul(&j).unwrap().matmul(&pinv).unwrap();

        let direct = analyze(&j, &config).unwrap();
        let transformed = analyze(&conjugated, &config).unwrap();
        assert_eq!(direct.eta_from_blocks, 2);
        assert_eq!(direct.eta_from_blocks, transformed.eta_from_blocks);
        assert_eq!(direct.eta_from_kernels, transformed.eta_from_kernels);
        for (a, b) in direct.eigenvalues.iter().zip(&transformed.eigenvalues) {
            assert_eq!(a.block_counts, b.block_counts);
            assert_eq!(a.weyr_sequence, b.weyr_sequence);
        }
    }
}
