//! Matrix representations of Kossakowski–Lindblad generators.
//!
//! A [`GKLSModel`] holds the standard data of a Markovian master equation:
//! a Hermitian Hamiltonian `H` and weighted jump operators `(V_j, γ_j)`,
//! generating
//!
//! ```text
//! 𝓛[ρ] = −i(Hρ − ρH) + Σ_j γ_j (V_j ρ V_j† − ½(V_j†V_j ρ + ρ V_j†V_j))
//! ```
//!
//! [`build_superoperator`] turns that action into an N²×N² matrix acting on
//! column-stacked states, via `vec(AXB) = (Bᵀ ⊗ A)·vec(X)`:
//!
//! ```text
//! L = −i(I⊗H − Hᵀ⊗I) + Σ_j γ_j (conj(V_j)⊗V_j − ½ I⊗(V_j†V_j) − ½ (V_j†V_j)ᵀ⊗I)
//! ```
//!
//! [`apply_generator`] evaluates the action directly, without building the
//! matrix; the two must agree on every basis matrix unit, which is the
//! oracle pinning the sign and factor conventions above.

use num_complex::Complex64;
use num_traits::One;

use crate::error::Error;
use crate::matrix::{Backend, ComplexMatrix};
use crate::scalar::{ComplexScalar, GaussianRational};
use crate::Result;

/// One jump operator with its positive rate. The rate is kept outside the
/// operator (not absorbed into it) so models stay human-auditable.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpOperator {
    pub operator: ComplexMatrix,
    pub rate: ComplexScalar,
}

/// Hamiltonian plus weighted jump operators on an N-dimensional system.
#[derive(Clone, Debug, PartialEq)]
pub struct GKLSModel {
    hamiltonian: ComplexMatrix,
    jumps: Vec<JumpOperator>,
}

impl GKLSModel {
    /// Validates and wraps the model data.
    ///
    /// The Hamiltonian must be Hermitian: exactly on the exact backend,
    /// within max entry deviation `1e-10 · ‖H‖_F` on the float backend.
    /// Failing inputs are rejected, not symmetrized. Rates must be positive
    /// reals on the same backend as the operators.
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<JumpOperator>) -> Result<Self> {
        let n = hamiltonian.order();
        let backend = hamiltonian.backend();

        let deviation = hamiltonian.max_abs_diff(&hamiltonian.adjoint())?;
        let tolerance = match backend {
            Backend::Float => 1e-10 * hamiltonian.fro_norm(),
            Backend::Exact => 0.0,
        };
        if deviation > tolerance {
            return Err(Error::NonHermitian {
                deviation,
                tolerance,
            });
        }

        for (index, jump) in jumps.iter().enumerate() {
            if jump.operator.backend() != backend || jump.rate.backend() != backend {
                return Err(Error::BackendMismatch);
            }
            if jump.operator.order() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: jump.operator.order(),
                });
            }
            let positive_real = match &jump.rate {
                ComplexScalar::Float(z) => z.im == 0.0 && z.re > 0.0,
                ComplexScalar::Exact(g) => {
                    use num_traits::Signed;
                    g.is_real() && g.re().is_positive()
                }
            };
            if !positive_real {
                return Err(Error::NonPositiveRate {
                    index,
                    rate: jump.rate.to_string(),
                });
            }
        }

        Ok(Self { hamiltonian, jumps })
    }

    pub fn dimension(&self) -> usize {
        self.hamiltonian.order()
    }

    pub fn backend(&self) -> Backend {
        self.hamiltonian.backend()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }
}

/// An N²×N² generator matrix acting on column-stacked N×N states.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    pub matrix: ComplexMatrix,
    pub source_dimension: usize,
}

impl Superoperator {
    pub fn order(&self) -> usize {
        self.matrix.order()
    }
}

fn minus_i(backend: Backend) -> ComplexScalar {
    match backend {
        Backend::Float => ComplexScalar::Float(Complex64::new(0.0, -1.0)),
        Backend::Exact => ComplexScalar::Exact(-GaussianRational::i()),
    }
}

fn half(backend: Backend) -> ComplexScalar {
    match backend {
        Backend::Float => ComplexScalar::Float(Complex64::new(0.5, 0.0)),
        Backend::Exact => ComplexScalar::Exact(GaussianRational::from_ratio(1, 2)),
    }
}

/// Builds the matrix representation of the generator in the column-stacking
/// convention. The result satisfies
/// `matrix · vec(ρ) = vec(apply_generator(model, ρ))` for every state ρ.
pub fn build_superoperator(model: &GKLSModel) -> Result<Superoperator> {
    let n = model.dimension();
    let backend = model.backend();
    let id = ComplexMatrix::identity(n, backend);
    let h = &model.hamiltonian;

    // −i(I⊗H − Hᵀ⊗I)
    let commutator_part = id
        .kron(h)?
        .sub(&h.transpose().kron(&id)?)?
        .scale(&minus_i(backend))?;

    let mut total = commutator_part;
    for jump in &model.jumps {
        let v = &jump.operator;
        let vdv = v.adjoint().matmul(v)?;
        // conj(V)⊗V − ½ I⊗(V†V) − ½ (V†V)ᵀ⊗I
        let hop = v.conj().kron(v)?;
        let left = id.kron(&vdv)?.scale(&half(backend))?;
        let right = vdv.transpose().kron(&id)?.scale(&half(backend))?;
        let dissipator = hop.sub(&left)?.sub(&right)?;
        total = total.add(&dissipator.scale(&jump.rate)?)?;
    }

    Ok(Superoperator {
        matrix: total,
        source_dimension: n,
    })
}

/// Evaluates `𝓛[ρ]` directly from the model data, without building the
/// superoperator. This is the independent oracle for [`build_superoperator`].
pub fn apply_generator(model: &GKLSModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = model.dimension();
    if rho.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: rho.order(),
        });
    }
    let backend = model.backend();
    let h = &model.hamiltonian;

    // −i(Hρ − ρH)
    let commutator = h.matmul(rho)?.sub(&rho.matmul(h)?)?;
    let mut total = commutator.scale(&minus_i(backend))?;

    for jump in &model.jumps {
        let v = &jump.operator;
        let vdag = v.adjoint();
        let vdv = vdag.matmul(v)?;
        // VρV† − ½(V†Vρ + ρV†V)
        let hop = v.matmul(rho)?.matmul(&vdag)?;
        let anticommutator = vdv.matmul(rho)?.add(&rho.matmul(&vdv)?)?;
        let dissipator = hop.sub(&anticommutator.scale(&half(backend))?)?;
        total = total.add(&dissipator.scale(&jump.rate)?)?;
    }
    Ok(total)
}

/// Result of the trace-preservation diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceCheck {
    /// Largest |entry| of the row vector `vec(I)† · S`.
    pub max_residual: f64,
    /// Pass threshold: `1e-10 · ‖S‖_F` (float) or exact zero (exact).
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks that the dual action annihilates the identity: a trace-preserving
/// generator satisfies `vec(I_N)† · S = 0`. Every [`build_superoperator`]
/// output passes by construction, so a failure here is a regression tripwire
/// for externally supplied superoperators.
pub fn trace_check(s: &Superoperator) -> TraceCheck {
    let n = s.source_dimension;
    let order = s.matrix.order();

    // vec(I_N) has ones exactly at the indices k·N + k.
    let diag_indices: Vec<usize> = (0..n).map(|k| k * n + k).collect();
    match &s.matrix {
        ComplexMatrix::Float(m) => {
            let mut max_residual = 0.0f64;
            for j in 0..order {
                let mut acc = Complex64::new(0.0, 0.0);
                for &i in &diag_indices {
                    acc += *m.get(i, j);
                }
                max_residual = max_residual.max(acc.norm());
            }
            let tolerance = 1e-10 * s.matrix.fro_norm();
            TraceCheck {
                max_residual,
                tolerance,
                pass: max_residual <= tolerance,
            }
        }
        ComplexMatrix::Exact(m) => {
            use num_traits::Zero;
            let mut max_residual = 0.0f64;
            let mut all_zero = true;
            for j in 0..order {
                let mut acc = GaussianRational::zero();
                for &i in &diag_indices {
                    acc = acc + m.get(i, j).clone();
                }
                if !acc.is_zero() {
                    all_zero = false;
                }
                max_residual = max_residual.max(acc.approx().norm());
            }
            TraceCheck {
                max_residual,
                tolerance: 0.0,
                pass: all_zero,
            }
        }
    }
}

/// σ_z-like diagonal, handy for dephasing models and tests.
pub fn pauli_z(backend: Backend) -> ComplexMatrix {
    match backend {
        Backend::Float => ComplexMatrix::diagonal_float(&[1.0, -1.0]),
        Backend::Exact => ComplexMatrix::diagonal(&[
            ComplexScalar::Exact(GaussianRational::one()),
            ComplexScalar::Exact(-GaussianRational::one()),
        ])
        .expect("fixed diagonal"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dephasing_model(backend: Backend) -> GKLSModel {
        let rate = match backend {
            Backend::Float => ComplexScalar::from(1.0),
            Backend::Exact => ComplexScalar::Exact(GaussianRational::one()),
        };
        GKLSModel::new(
            ComplexMatrix::zeros(2, backend),
            vec![JumpOperator {
                operator: pauli_z(backend),
                rate,
            }],
        )
        .unwrap()
    }

    /// Column-stacks the generator's action on every matrix unit into the
    /// superoperator it implies. Independent of `build_superoperator`.
    fn superoperator_from_action(model: &GKLSModel) -> ComplexMatrix {
        let n = model.dimension();
        let backend = model.backend();
        let mut out = ComplexMatrix::zeros(n * n, backend);
        for j in 0..n {
            for i in 0..n {
                let col = j * n + i;
                let unit = ComplexMatrix::matrix_unit(n, i, j, backend);
                let image = apply_generator(model, &unit).unwrap();
                let vec = image.vectorize();
                for row in 0..n * n {
                    if let (ComplexMatrix::Float(m), ComplexScalar::Float(z)) =
                        (&mut out, vec.get(row))
                    {
                        m.set(row, col, z);
                    } else if let (ComplexMatrix::Exact(m), ComplexScalar::Exact(g)) =
                        (&mut out, vec.get(row))
                    {
                        m.set(row, col, g);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn no_dynamics_builds_zero() {
        let model = GKLSModel::new(ComplexMatrix::zeros(2, Backend::Float), vec![]).unwrap();
        let s = build_superoperator(&model).unwrap();
        assert!(s.matrix.is_zero());
        let check = trace_check(&s);
        assert!(check.pass);
        assert_eq!(check.max_residual, 0.0);
    }

    #[test]
    fn dephasing_superoperator_matches_action_oracle() {
        // 𝓛[ρ] = σ_z ρ σ_z − ρ maps E_ij to (s_i s_j − 1) E_ij, so the
        // column-stacked matrix is diag(0, −2, −2, 0). Derived before the
        // build: the action oracle produces it entry by entry.
        let model = dephasing_model(Backend::Float);
        let oracle = superoperator_from_action(&model);
        assert_eq!(
            oracle.max_abs_diff(&ComplexMatrix::diagonal_float(&[0.0, -2.0, -2.0, 0.0]))
                .unwrap(),
            0.0
        );

        let s = build_superoperator(&model).unwrap();
        assert_eq!(s.matrix.max_abs_diff(&oracle).unwrap(), 0.0);
        assert!(trace_check(&s).pass);
    }

    #[test]
    fn dephasing_superoperator_is_exact_on_the_exact_backend() {
        let model = dephasing_model(Backend::Exact);
        let s = build_superoperator(&model).unwrap();
        let oracle = superoperator_from_action(&model);
        assert_eq!(s.matrix, oracle);

        let minus_two = ComplexScalar::Exact(GaussianRational::from_integer(-2));
        let zero = ComplexScalar::Exact(GaussianRational::from_integer(0));
        let expected =
            ComplexMatrix::diagonal(&[zero.clone(), minus_two.clone(), minus_two, zero]).unwrap();
        assert_eq!(s.matrix, expected);
        assert!(trace_check(&s).pass);
    }

    #[test]
    fn hamiltonian_only_model_matches_action_oracle() {
        // H = diag(1, −1): 𝓛[E_01] = −2i·E_01, 𝓛[E_10] = 2i·E_10,
        // diagonal units map to zero.
        let h = ComplexMatrix::diagonal_float(&[1.0, -1.0]);
        let model = GKLSModel::new(h, vec![]).unwrap();

        let e01 = ComplexMatrix::matrix_unit(2, 0, 1, Backend::Float);
        let image = apply_generator(&model, &e01).unwrap();
        assert_eq!(
            image.max_abs_diff(&e01.scale(&ComplexScalar::Float(c(0.0, -2.0))).unwrap())
                .unwrap(),
            0.0
        );
        let e10 = ComplexMatrix::matrix_unit(2, 1, 0, Backend::Float);
        let image = apply_generator(&model, &e10).unwrap();
        assert_eq!(
            image.max_abs_diff(&e10.scale(&ComplexScalar::Float(c(0.0, 2.0))).unwrap())
                .unwrap(),
            0.0
        );
        for (i, j) in [(0, 0), (1, 1)] {
            let unit = ComplexMatrix::matrix_unit(2, i, j, Backend::Float);
            assert!(apply_generator(&model, &unit).unwrap().is_zero());
        }

        let s = build_superoperator(&model).unwrap();
        let oracle = superoperator_from_action(&model);
        assert_eq!(s.matrix.max_abs_diff(&oracle).unwrap(), 0.0);
    }

    #[test]
    fn identity_state_commutes_with_any_hamiltonian() {
        let h = ComplexMatrix::from_rows_float(vec![
            vec![c(1.0, 0.0), c(0.5, 0.25)],
            vec![c(0.5, -0.25), c(-2.0, 0.0)],
        ])
        .unwrap();
        let model = GKLSModel::new(h, vec![]).unwrap();
        let rho = ComplexMatrix::identity(2, Backend::Float)
            .scale(&ComplexScalar::from(0.5))
            .unwrap();
        assert!(apply_generator(&model, &rho).unwrap().is_zero());
    }

    #[test]
    fn dephasing_action_on_coherence() {
        let model = dephasing_model(Backend::Float);
        let e01 = ComplexMatrix::matrix_unit(2, 0, 1, Backend::Float);
        let image = apply_generator(&model, &e01).unwrap();
        let expected = e01.scale(&ComplexScalar::from(-2.0)).unwrap();
        assert_eq!(image.max_abs_diff(&expected).unwrap(), 0.0);
    }

    #[test]
    fn generator_preserves_hermiticity() {
        let h = ComplexMatrix::from_rows_float(vec![
            vec![c(0.3, 0.0), c(0.1, -0.7)],
            vec![c(0.1, 0.7), c(-0.3, 0.0)],
        ])
        .unwrap();
        let v = ComplexMatrix::from_rows_float(vec![
            vec![c(0.2, 0.1), c(1.0, 0.0)],
            vec![c(0.0, -0.4), c(0.5, 0.5)],
        ])
        .unwrap();
        let model = GKLSModel::new(
            h,
            vec![JumpOperator {
                operator: v,
                rate: ComplexScalar::from(0.7),
            }],
        )
        .unwrap();

        let rho = ComplexMatrix::from_rows_float(vec![
            vec![c(0.6, 0.0), c(0.2, 0.3)],
            vec![c(0.2, -0.3), c(0.4, 0.0)],
        ])
        .unwrap();
        let image = apply_generator(&model, &rho).unwrap();
        assert!(image.max_abs_diff(&image.adjoint()).unwrap() < 1e-14);

        // trace preservation of the action
        assert!(image.trace().approx().norm() < 1e-14);
    }

    #[test]
    fn identity_superoperator_fails_trace_check() {
        let s = Superoperator {
            matrix: ComplexMatrix::identity(4, Backend::Float),
            source_dimension: 2,
        };
        assert!(!trace_check(&s).pass);
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let h = ComplexMatrix::from_rows_float(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            GKLSModel::new(h, vec![]),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn nonpositive_or_complex_rates_are_rejected() {
        let h = ComplexMatrix::zeros(2, Backend::Float);
        for rate in [
            ComplexScalar::from(0.0),
            ComplexScalar::from(-1.0),
            ComplexScalar::Float(c(1.0, 0.5)),
        ] {
            let jumps = vec![JumpOperator {
                operator: pauli_z(Backend::Float),
                rate,
            }];
            assert!(matches!(
                GKLSModel::new(h.clone(), jumps),
                Err(Error::NonPositiveRate { index: 0, .. })
            ));
        }
    }

    #[test]
    fn built_superoperators_are_rank_deficient() {
        // Trace preservation forces a left kernel, so a stationary state
        // exists and the λ = 0 cluster is never empty.
        let model = dephasing_model(Backend::Float);
        let s = build_superoperator(&model).unwrap();
        let policy = crate::weyr::RankPolicy::for_order(4);
        assert!(crate::weyr::rank_of(&s.matrix, &policy).unwrap() < 4);
    }
}
