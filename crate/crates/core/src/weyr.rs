//! Rank sequences and Jordan block-count profiles.
//!
//! For a matrix `L` and eigenvalue λ the Weyr rank sequence is
//! `q_k(λ) = rank((L − λI)^k)`, with `q_0 = n` (the identity's rank; the
//! block-count formula needs `q_{m−1}` at `m = 1`). The sequence is
//! nonincreasing and convex, stabilizes by `k = n`, and its second
//! difference counts Jordan blocks:
//!
//! ```text
//! N(m, λ) = q_{m−1}(λ) − 2 q_m(λ) + q_{m+1}(λ)
//! ```
//!
//! `N(m, λ)` is the number of λ-blocks of dimension m ≥ 1. Indices past the
//! stored sequence read as the stabilized value, so no spurious blocks
//! appear beyond the stabilization index.
//!
//! Ranks are the sole numerical primitive of the whole construction. On the
//! float backend they come from singular values thresholded at
//! `τ = rel_tol · σ_max`, and every decision records the spectrum gap it
//! rested on: a decision is flagged low-confidence when any singular value
//! falls within a factor of 10 of the threshold. On the exact backend ranks
//! come from fraction-free Gaussian elimination over Gaussian integers
//! (denominators cleared per row), which is exact and always confident.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::{ComplexMatrix, Dense};
use crate::scalar::{ComplexScalar, GaussianRational};
use crate::Result;

/// Relative tolerance for float-backend rank decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankPolicy {
    /// A singular value counts toward the rank when it exceeds
    /// `rel_tol · σ_max`. Ignored by the exact backend.
    pub rel_tol: f64,
}

impl RankPolicy {
    /// Default policy for an order-n matrix: `max(1e-10, n·ε)`. Powers of a
    /// shifted matrix amplify tolerance sensitivity, so the default leans
    /// loose rather than tight.
    pub fn for_order(n: usize) -> Self {
        Self {
            rel_tol: (n as f64 * f64::EPSILON).max(1e-10),
        }
    }
}

/// One rank decision with the singular-value gap that justified it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    /// Absolute threshold `rel_tol · σ_max`; absent on the exact backend.
    pub threshold: Option<f64>,
    /// Smallest singular value counted toward the rank, if any.
    pub smallest_accepted: Option<f64>,
    /// Largest singular value rejected as noise, if any.
    pub largest_rejected: Option<f64>,
    /// True when a singular value lies within 10× of the threshold on
    /// either side, i.e. the gap the decision rests on is narrow.
    pub low_confidence: bool,
}

impl RankDecision {
    fn exact(rank: usize) -> Self {
        Self {
            rank,
            threshold: None,
            smallest_accepted: None,
            largest_rejected: None,
            low_confidence: false,
        }
    }
}

/// Numerical (float) or exact rank of a matrix.
pub fn rank_of(a: &ComplexMatrix, policy: &RankPolicy) -> Result<usize> {
    Ok(rank_decision(a, policy)?.rank)
}

/// Rank plus the diagnostics behind the decision.
pub fn rank_decision(a: &ComplexMatrix, policy: &RankPolicy) -> Result<RankDecision> {
    match a {
        ComplexMatrix::Float(m) => float_rank(m, policy),
        ComplexMatrix::Exact(m) => Ok(RankDecision::exact(exact_rank(m))),
    }
}

fn float_rank(m: &Dense<num_complex::Complex64>, policy: &RankPolicy) -> Result<RankDecision> {
    let n = m.n;
    let svd = m
        .to_dmatrix()
        .try_svd(false, false, f64::EPSILON, 100 * n)
        .ok_or(Error::DecompositionFailure { order: n })?;
    let mut sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sigma.sort_by(|a, b| b.total_cmp(a));

    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(RankDecision {
            rank: 0,
            threshold: Some(0.0),
            smallest_accepted: None,
            largest_rejected: None,
            low_confidence: false,
        });
    }
    let threshold = policy.rel_tol * sigma_max;
    let rank = sigma.iter().take_while(|s| **s > threshold).count();
    let smallest_accepted = (rank > 0).then(|| sigma[rank - 1]);
    let largest_rejected = (rank < n).then(|| sigma[rank]);
    let low_confidence = smallest_accepted.is_some_and(|s| s < 10.0 * threshold)
        || largest_rejected.is_some_and(|s| s > threshold / 10.0);
    Ok(RankDecision {
        rank,
        threshold: Some(threshold),
        smallest_accepted,
        largest_rejected,
        low_confidence,
    })
}

// ── exact rank: fraction-free elimination over Gaussian integers ──

#[derive(Clone, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn one() -> Self {
        Self {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    /// Division known to be exact: `(a+bi)/(c+di) = (a+bi)(c−di)/(c²+d²)`.
    fn exact_div(&self, rhs: &Self) -> Self {
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let num = self.mul(&Self {
            re: rhs.re.clone(),
            im: -rhs.im.clone(),
        });
        let (qr, rr) = num.re.div_rem(&den);
        let (qi, ri) = num.im.div_rem(&den);
        assert!(
            rr.is_zero() && ri.is_zero(),
            "fraction-free elimination produced a non-exact quotient"
        );
        Self { re: qr, im: qi }
    }
}

/// Clears the denominators of one row of Gaussian rationals, scaling the row
/// by the lcm of all denominators. Row scaling preserves rank.
fn clear_row(row: &[&GaussianRational]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for e in row {
        l = l.lcm(e.re().denom());
        l = l.lcm(e.im().denom());
    }
    row.iter()
        .map(|e| GaussInt {
            re: e.re().numer() * (&l / e.re().denom()),
            im: e.im().numer() * (&l / e.im().denom()),
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination with row and column
/// pivoting. Every intermediate entry is a minor of the cleared matrix, so
/// the division by the previous pivot is exact.
fn exact_rank(m: &Dense<GaussianRational>) -> usize {
    let n = m.n;
    let mut rows: Vec<Vec<GaussInt>> = (0..n)
        .map(|i| {
            let row: Vec<&GaussianRational> = (0..n).map(|j| m.get(i, j)).collect();
            clear_row(&row)
        })
        .collect();

    let mut prev = GaussInt::one();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for i in (rank + 1)..n {
            for j in (col + 1)..n {
                let t = rows[rank][col]
                    .mul(&rows[i][j])
                    .sub(&rows[i][col].mul(&rows[rank][j]));
                rows[i][j] = t.exact_div(&prev);
            }
            rows[i][col] = GaussInt::zero();
        }
        prev = rows[rank][col].clone();
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

// ── rank sequences ──

/// The rank sequence of one eigenvalue, stored through its first repeated
/// value: `q = [q_0, …, q_s, q_{s+1}]` with `q_s = q_{s+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeyrProfile {
    pub eigenvalue: ComplexScalar,
    pub q: Vec<usize>,
    /// One decision per computed power, `k = 1, …, s+1`.
    pub rank_decisions: Vec<RankDecision>,
}

impl WeyrProfile {
    /// Order of the source matrix (`q_0`).
    pub fn order(&self) -> usize {
        self.q[0]
    }

    /// Smallest k with `q_k = q_{k+1}`.
    pub fn stabilization_index(&self) -> usize {
        self.q.len() - 2
    }

    /// `q_k`, reading indices beyond the stored range as the stabilized value.
    pub fn q_at(&self, k: usize) -> usize {
        let last = self.q.len() - 1;
        self.q[k.min(last)]
    }

    /// True when any underlying rank decision was flagged low-confidence.
    pub fn has_low_confidence(&self) -> bool {
        self.rank_decisions.iter().any(|d| d.low_confidence)
    }
}

/// Computes `q_k = rank((L − λI)^k)` for `k = 0, 1, …` until the sequence
/// repeats. Powers are formed by repeated multiplication (every intermediate
/// power is needed anyway). A λ outside the spectrum yields the valid
/// profile `q = [n, n]`.
pub fn weyr_sequence(
    l: &ComplexMatrix,
    lambda: &ComplexScalar,
    policy: &RankPolicy,
) -> Result<WeyrProfile> {
    let n = l.order();
    let shifted = l.shift(lambda)?;
    let mut q = vec![n];
    let mut rank_decisions = Vec::new();
    let mut power = shifted.clone();
    loop {
        let decision = rank_decision(&power, policy)?;
        let rank = decision.rank;
        rank_decisions.push(decision);
        let prev = *q.last().expect("q starts nonempty");
        if rank > prev {
            q.push(rank);
            return Err(Error::NonMonotoneRanks {
                eigenvalue: lambda.to_string(),
                power: q.len() - 1,
                q,
            });
        }
        q.push(rank);
        if rank == prev {
            return Ok(WeyrProfile {
                eigenvalue: lambda.clone(),
                q,
                rank_decisions,
            });
        }
        power = power.matmul(&shifted)?;
    }
}

/// Jordan block counts for one eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanStructure {
    pub eigenvalue: ComplexScalar,
    /// `m ↦ N(m, λ)`, holding exactly the block sizes with a positive count.
    pub block_counts: BTreeMap<usize, usize>,
    /// Number of blocks = number of independent eigenvectors = `q_0 − q_1`.
    pub geometric_multiplicity: usize,
    /// Total dimension of the blocks = `q_0 − q_s`.
    pub algebraic_multiplicity: usize,
}

impl JordanStructure {
    /// Σ_m N(m, λ): the per-eigenvalue block count the index of cyclicity
    /// maximizes over.
    pub fn total_blocks(&self) -> usize {
        self.geometric_multiplicity
    }

    pub fn largest_block(&self) -> usize {
        self.block_counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// Second-differences a rank sequence into block counts:
/// `N(m, λ) = q_{m−1} − 2 q_m + q_{m+1}` for m ≥ 1.
///
/// A negative count means the sequence is not convex, which exact ranks can
/// never produce; it is reported as an error (with the offending m and the
/// whole sequence) rather than clamped, because clamping would fabricate a
/// Jordan structure.
pub fn block_counts(profile: &WeyrProfile) -> Result<JordanStructure> {
    let q = &profile.q;
    for k in 1..q.len() {
        if q[k] > q[k - 1] {
            return Err(Error::NonMonotoneRanks {
                eigenvalue: profile.eigenvalue.to_string(),
                power: k,
                q: q.clone(),
            });
        }
    }

    let mut counts = BTreeMap::new();
    for m in 1..=profile.stabilization_index().max(1) {
        let n_m = profile.q_at(m - 1) as isize - 2 * profile.q_at(m) as isize
            + profile.q_at(m + 1) as isize;
        if n_m < 0 {
            return Err(Error::ConvexityViolation {
                eigenvalue: profile.eigenvalue.to_string(),
                m,
                q: q.clone(),
            });
        }
        if n_m > 0 {
            counts.insert(m, n_m as usize);
        }
    }

    let geometric = profile.q_at(0) - profile.q_at(1);
    let algebraic = profile.q_at(0) - *q.last().expect("profile sequence nonempty");
    debug_assert_eq!(counts.values().sum::<usize>(), geometric);
    debug_assert_eq!(counts.iter().map(|(m, c)| m * c).sum::<usize>(), algebraic);

    Ok(JordanStructure {
        eigenvalue: profile.eigenvalue.clone(),
        block_counts: counts,
        geometric_multiplicity: geometric,
        algebraic_multiplicity: algebraic,
    })
}
