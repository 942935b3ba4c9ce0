//! Entanglement test for two qudits from correlated MUB measurements.
//!
//! For basis `i` of a MUB family on `H_A`, the correlation observable has `D`
//! outcomes
//!
//! ```text
//! Q_d = sum_s |s:i><s:i| ⊗ |s+d:i*><s+d:i*|      (d = 0..D-1, s+d mod D)
//! ```
//!
//! where `|t:i*>` is the entrywise conjugate of `|t:i>`. On a product state the
//! largest outcome probability of `Q` is at most that of basis `i` on `H_A`, so
//! every separable state satisfies `sum_i M_inf(Q^(i)) <= 1 + sqrt(D + 1)`.
//! The maximally entangled state reaches `D + 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64};
use crate::mub::MubFamily;
use crate::quantum::{check_dim, haar_random_pure_with, random_simplex_weights, seeded_rng, State, ASSERT_TOL};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationObservable {
    pub dim: usize,
    pub basis_index: usize,
    /// `Q_0 .. Q_{D-1}` on the `D^2`-dimensional space.
    pub elements: Vec<ComplexMatrix>,
}

impl CorrelationObservable {
    /// `max(||sum_d Q_d - 1||_F, max_d ||Q_d^2 - Q_d||_F)`
    pub fn pvm_residual(&self) -> f64 {
        let n = self.dim * self.dim;
        let mut sum = ComplexMatrix::zeros(n, n);
        let mut worst = 0.0_f64;
        for q in &self.elements {
            sum = &sum + q;
            worst = worst.max((&(q * q) - q).frobenius_norm());
        }
        worst.max((&sum - &ComplexMatrix::identity(n)).frobenius_norm())
    }

    /// `max_d tr(rho Q_d)`
    pub fn m_infinity(&self, rho: &State) -> Result<f64> {
        check_dim(self.dim * self.dim, rho.dim())?;
        Ok(self.elements.iter().map(|q| rho.rho().trace_product_re(q)).fold(f64::NEG_INFINITY, f64::max))
    }
}

pub fn correlation_observables(f: &MubFamily) -> Result<Vec<CorrelationObservable>> {
    let d = f.dim;
    if f.bases.iter().any(|b| b.rows() != d || b.cols() != d) {
        return Err(Error::Malformed(format!("MUB family bases are not {d}x{d}")));
    }
    Ok((0..f.num_bases())
        .map(|i| {
            let a: Vec<ComplexMatrix> = (0..d).map(|s| ComplexMatrix::projector(&f.vector(i, s))).collect();
            let b: Vec<ComplexMatrix> = a.iter().map(ComplexMatrix::conj).collect();
            let elements = (0..d)
                .map(|shift| {
                    let mut q = ComplexMatrix::zeros(d * d, d * d);
                    for s in 0..d {
                        q = &q + &kron(&a[s], &b[(s + shift) % d]);
                    }
                    q
                })
                .collect();
            CorrelationObservable { dim: d, basis_index: i, elements }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    EntangledDetected,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub dim: usize,
    pub per_basis_m_inf: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub verdict: Verdict,
}

pub fn separability_statistic(rho: &State, f: &MubFamily) -> Result<SeparabilityReport> {
    check_dim(f.dim * f.dim, rho.dim())?;
    statistic_for_observables(rho, &correlation_observables(f)?)
}

/// Same statistic for precomputed observables; `rhs` uses their common dimension.
pub fn statistic_for_observables(rho: &State, observables: &[CorrelationObservable]) -> Result<SeparabilityReport> {
    let dim = observables.first().ok_or(Error::EmptyInput)?.dim;
    let per_basis_m_inf = observables.iter().map(|o| o.m_infinity(rho)).collect::<Result<Vec<_>>>()?;
    let lhs: f64 = per_basis_m_inf.iter().sum();
    let rhs = crate::bounds::mub_bound(dim);
    let verdict = if lhs > rhs + ASSERT_TOL { Verdict::EntangledDetected } else { Verdict::Inconclusive };
    Ok(SeparabilityReport { dim, per_basis_m_inf, lhs, rhs, verdict })
}

/// `(1/sqrt D) sum_k |k>|k>`
pub fn max_entangled_state(dim: usize) -> Result<State> {
    if dim < 2 {
        return Err(Error::BadDim(dim));
    }
    let amp = 1.0 / (dim as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); dim * dim];
    for k in 0..dim {
        v[k * dim + k] = C64::new(amp, 0.0);
    }
    State::pure(v)
}

/// Mixture of `num_terms` products of Haar-random pure states with
/// Dirichlet(1, ..., 1) weights.
pub fn random_separable(dim: usize, num_terms: usize, seed: u64) -> Result<State> {
    random_separable_with(dim, num_terms, &mut seeded_rng(seed, 0))
}

pub fn random_separable_with<R: Rng + ?Sized>(dim: usize, num_terms: usize, rng: &mut R) -> Result<State> {
    if num_terms == 0 {
        return Err(Error::EmptyInput);
    }
    let terms: Vec<State> = (0..num_terms)
        .map(|_| {
            let a = haar_random_pure_with(dim, rng);
            let b = haar_random_pure_with(dim, rng);
            a.tensor(&b)
        })
        .collect();
    if num_terms == 1 {
        return Ok(terms.into_iter().next().expect("one term"));
    }
    let weights = random_simplex_weights(num_terms, rng);
    let parts: Vec<(f64, &State)> = weights.into_iter().zip(&terms).collect();
    State::mixture(&parts)
}

/// Partial trace over the second factor of a `D x D` bipartite state.
pub fn reduced_first(rho: &State, dim: usize) -> Result<ComplexMatrix> {
    check_dim(dim * dim, rho.dim())?;
    let r = rho.rho();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| (0..dim).map(|k| r[(i * dim + k, j * dim + k)]).sum()))
}

/// Partial trace over the first factor.
pub fn reduced_second(rho: &State, dim: usize) -> Result<ComplexMatrix> {
    check_dim(dim * dim, rho.dim())?;
    let r = rho.rho();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| (0..dim).map(|k| r[(k * dim + i, k * dim + j)]).sum()))
}
