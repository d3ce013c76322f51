//! Spectrum computation and eigenvalue clustering for the float backend.
//!
//! Raw eigenvalues come from a complex Schur decomposition. Floating-point
//! arithmetic smears degenerate eigenvalues — a defective eigenvalue of a
//! size-p block perturbs at magnitude ~ε^(1/p) — so raw values are grouped
//! into distinct-eigenvalue clusters by single-linkage chaining: two values
//! share a cluster when a chain of pairwise distances ≤ tol connects them.
//! The cluster representative is the arithmetic mean of its members, which
//! cancels first-order smear and is what every later shift uses.
//!
//! Exact-backend matrices never pass through this module: their eigenvalues
//! must be user-supplied (see [`crate::AnalysisConfig`]).

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::ComplexMatrix;
use crate::Result;

/// A group of numerically indistinguishable eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueCluster {
    /// Arithmetic mean of the members.
    pub representative: Complex64,
    /// Raw eigenvalues in the cluster, sorted by (re, im).
    pub members: Vec<Complex64>,
    /// Largest distance from a member to the representative.
    pub cluster_radius: f64,
}

impl EigenvalueCluster {
    /// Number of raw eigenvalues in the cluster.
    pub fn algebraic_multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// The clustered spectrum of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Clusters sorted by representative (re, then im).
    pub clusters: Vec<EigenvalueCluster>,
    /// Order of the source matrix; multiplicities sum to this.
    pub order: usize,
    /// Clustering tolerance that produced this grouping.
    pub tolerance: f64,
}

/// Default clustering tolerance: `1e-8 · max(1, ‖A‖_F)`.
pub fn default_cluster_tol(fro_norm: f64) -> f64 {
    1e-8 * fro_norm.max(1.0)
}

/// Raw eigenvalues (with repetition, length n) of a float-backend matrix.
///
/// Any algorithm meeting the residual contract — smallest singular value of
/// `A − λI` below `1e-8 · ‖A‖_F` for every returned λ — is acceptable here;
/// the current implementation is a complex Schur decomposition. Convergence
/// failure is reported with the loosest deflation tolerance attempted.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let dense = a.as_float().ok_or(Error::MissingExactSpectrum)?;
    let n = dense.n;
    if n == 1 {
        return Ok(vec![*dense.get(0, 0)]);
    }
    let m = dense.to_dmatrix();
    // Deflation tolerance ladder: strictest first, relaxing only on failure.
    let mut achieved = f64::EPSILON;
    for eps in [f64::EPSILON, 1e-13, 1e-11] {
        achieved = eps;
        if let Some(schur) = m.clone().try_schur(eps, 2000 * n) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::EigenvalueConvergence {
        order: n,
        achieved_tolerance: achieved,
    })
}

/// Groups raw eigenvalues into distinct-eigenvalue clusters.
///
/// Single-linkage: values chained by pairwise distances ≤ `tol` share a
/// cluster. Output order is deterministic (clusters sorted by representative,
/// members sorted within each cluster), so shuffled input yields an identical
/// [`Spectrum`].
pub fn cluster(values: &[Complex64], tol: f64) -> Spectrum {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(values[i]);
    }

    let mut clusters: Vec<EigenvalueCluster> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|mut members| {
            members.sort_by(cmp_complex);
            let sum: Complex64 = members.iter().sum();
            let representative = sum / members.len() as f64;
            let cluster_radius = members
                .iter()
                .map(|m| (m - representative).norm())
                .fold(0.0, f64::max);
            EigenvalueCluster {
                representative,
                members,
                cluster_radius,
            }
        })
        .collect();
    clusters.sort_by(|a, b| cmp_complex(&a.representative, &b.representative));

    Spectrum {
        clusters,
        order: n,
        tolerance: tol,
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Backend;
    use crate::scalar::ComplexScalar;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(cmp_complex);
        v
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let a = ComplexMatrix::diagonal_float(&[1.0, 2.0, 3.0]);
        let evs = sorted(eigenvalues(&a).unwrap());
        for (ev, expected) in evs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((ev - Complex64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn triangular_matrix_spectrum_is_its_diagonal() {
        let j = ComplexMatrix::jordan_block(3, &ComplexScalar::from(7.0));
        let evs = eigenvalues(&j).unwrap();
        assert_eq!(evs.len(), 3);
        for ev in evs {
            assert!((ev - Complex64::new(7.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn random_matrix_eigenvalues_satisfy_residual_bound() {
        let mut seed = 0x853C49E6748FEA9Bu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let rows: Vec<Vec<Complex64>> = (0..5)
            .map(|_| (0..5).map(|_| Complex64::new(next(), next())).collect())
            .collect();
        let a = ComplexMatrix::from_rows_float(rows).unwrap();
        let bound = 1e-8 * a.fro_norm();
        let m = a.as_float().unwrap().to_dmatrix();
        for lambda in eigenvalues(&a).unwrap() {
            let shifted = &m - nalgebra::DMatrix::<Complex64>::identity(5, 5) * lambda;
            let svd = shifted.svd(false, false);
            let smin = svd
                .singular_values
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            assert!(smin <= bound, "residual {smin:e} exceeds {bound:e}");
        }
    }

    #[test]
    fn eigenvalues_reject_exact_backend() {
        let a = ComplexMatrix::identity(2, Backend::Exact);
        assert_eq!(eigenvalues(&a), Err(Error::MissingExactSpectrum));
    }

    #[test]
    fn clusters_nearby_values() {
        let values = [
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + 1e-12, 0.0),
            Complex64::new(5.0, 0.0),
        ];
        let spectrum = cluster(&values, 1e-9);
        assert_eq!(spectrum.clusters.len(), 2);
        assert_eq!(spectrum.clusters[0].algebraic_multiplicity(), 2);
        assert_eq!(spectrum.clusters[1].algebraic_multiplicity(), 1);
        assert!((spectrum.clusters[1].representative - Complex64::new(5.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn zero_tolerance_keeps_singletons() {
        let values = [
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(6.0, 0.0),
        ];
        let spectrum = cluster(&values, 0.0);
        assert_eq!(spectrum.clusters.len(), 3);
        assert!(spectrum
            .clusters
            .iter()
            .all(|c| c.algebraic_multiplicity() == 1));
    }

    #[test]
    fn perturbed_conjugate_pair_splits_fifty_fifty() {
        // 100 noisy copies of ±i: 50 near +i, 50 near −i, noise 1e-11.
        let mut seed = 0xDA3E39CB94B95BDBu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            ((seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2e-11
        };
        let mut values = Vec::new();
        for k in 0..100 {
            let base = if k % 2 == 0 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            };
            values.push(base + Complex64::new(next(), next()));
        }
        let spectrum = cluster(&values, 1e-9);
        assert_eq!(spectrum.clusters.len(), 2);
        assert_eq!(spectrum.clusters[0].algebraic_multiplicity(), 50);
        assert_eq!(spectrum.clusters[1].algebraic_multiplicity(), 50);
        assert!((spectrum.clusters[0].representative - Complex64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((spectrum.clusters[1].representative - Complex64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn multiplicities_sum_to_input_length() {
        let values: Vec<Complex64> = (0..17)
            .map(|k| Complex64::new((k % 5) as f64 * 0.37, (k % 3) as f64))
            .collect();
        let spectrum = cluster(&values, 1e-6);
        let total: usize = spectrum
            .clusters
            .iter()
            .map(|c| c.algebraic_multiplicity())
            .sum();
        assert_eq!(total, values.len());
    }

    #[test]
    fn clustering_is_permutation_invariant() {
        let values: Vec<Complex64> = (0..12)
            .map(|k| Complex64::new((k % 4) as f64, (k % 2) as f64 * 0.5))
            .collect();
        let mut shuffled = values.clone();
        shuffled.reverse();
        shuffled.swap(0, 5);
        shuffled.swap(2, 9);
        assert_eq!(cluster(&values, 1e-9), cluster(&shuffled, 1e-9));
    }
}
