//! Block dilations of effects into projections, and the Gram-matrix bound.
//!
//! For effects `A_1..A_m` on `H` (dimension `d`) the enlarged space is
//! `K = H ⊕ H ⊕ ... ⊕ H` with `m + 1` blocks. Projection `P_k` lives on blocks
//! `{0, k}`:
//!
//! ```text
//! (P_k)_00 = A_k    (P_k)_0k = (P_k)_k0 = sqrt(A_k (1 - A_k))    (P_k)_kk = 1 - A_k
//! ```
//!
//! and `<psi|P_k|psi> = <Omega|A_k|Omega>` for `psi = Omega ⊕ 0 ⊕ ... ⊕ 0`.
//!
//! The Gram matrix of the normalized vectors `psi_k = P_k psi / ||P_k psi||`
//! has top eigenvalue `Lambda >= sum_k <psi|P_k|psi>`, and
//! `Lambda <= 1 + (sum_{i != j} |G_ij|^2)^{1/2}`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inner, offdiag_frobenius, vec_norm, ComplexMatrix, C64};
use crate::quantum::{check_dim, Effect, ASSERT_TOL};

pub const IDEMPOTENCY_TOL: f64 = 1e-9;
pub const PRESERVATION_TOL: f64 = 1e-10;
/// `||P_j psi||` at or below this counts as `P_j psi = 0`.
pub const NULL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub m: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationResult {
    pub blocks: Blocks,
    pub projections: Vec<ComplexMatrix>,
}

impl DilationResult {
    pub fn big_dim(&self) -> usize {
        self.projections.first().map_or(0, ComplexMatrix::rows)
    }

    /// `Omega ⊕ 0 ⊕ ... ⊕ 0`
    pub fn embed(&self, omega: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.blocks.d, omega.len())?;
        let mut psi = vec![C64::new(0.0, 0.0); self.big_dim()];
        psi[..omega.len()].copy_from_slice(omega);
        Ok(psi)
    }

    /// `max_k ||P_k^2 - P_k||_F`
    pub fn idempotency_residual(&self) -> f64 {
        self.projections.iter().map(|p| (&(p * p) - p).frobenius_norm()).fold(0.0, f64::max)
    }

    /// `max_k ||P_k - P_k^dagger||_F`
    pub fn hermiticity_residual(&self) -> f64 {
        self.projections.iter().map(|p| (p - &p.adjoint()).frobenius_norm()).fold(0.0, f64::max)
    }

    /// `max_k |<psi|P_k|psi> - <Omega|A_k|Omega>|` for the embedded `omega`.
    pub fn preservation_residual(&self, effects: &[Effect], omega: &[C64]) -> Result<f64> {
        check_dim(self.projections.len(), effects.len())?;
        let psi = self.embed(omega)?;
        Ok(self
            .projections
            .iter()
            .zip(effects)
            .map(|(p, a)| (p.expectation(&psi).re - a.op().expectation(omega).re).abs())
            .fold(0.0, f64::max))
    }
}

/// `(A, sqrt(A(1 - A)), 1 - A)` from one spectral decomposition of `A`.
///
/// The spectrum is clamped into `[0, 1]` and values within rounding noise of
/// 0 or 1 are snapped, so the three blocks commute exactly and the dilated
/// operator is idempotent to machine precision.
fn effect_blocks(a: &Effect) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let eig = a.eig();
    let floor = eig.noise_floor();
    let snap = |l: f64| {
        if l <= floor {
            0.0
        } else if l >= 1.0 - floor {
            1.0
        } else {
            l
        }
    };
    let diag = eig.map(snap);
    let off = eig.map(|l| {
        let x = snap(l);
        (x * (1.0 - x)).sqrt()
    });
    let comp = eig.map(|l| 1.0 - snap(l));
    (diag, off, comp)
}

/// Places the blocks of effect `a` into a `(m+1)d` square matrix on blocks `{0, k}`.
fn dilated(a: &Effect, k: usize, m: usize) -> ComplexMatrix {
    let d = a.dim();
    let (diag, off, comp) = effect_blocks(a);
    let mut p = ComplexMatrix::zeros((m + 1) * d, (m + 1) * d);
    p.set_block(0, 0, &diag);
    p.set_block(k * d, 0, &off);
    p.set_block(0, k * d, &off);
    p.set_block(k * d, k * d, &comp);
    p
}

/// The two projections on `H ⊕ H ⊕ H` for a pair of effects: `A` pairs block 0
/// with block 1, `B` pairs block 0 with block 2.
pub fn dilate_pair(a: &Effect, b: &Effect) -> Result<DilationResult> {
    check_dim(a.dim(), b.dim())?;
    Ok(DilationResult { blocks: Blocks { m: 2, d: a.dim() }, projections: vec![dilated(a, 1, 2), dilated(b, 2, 2)] })
}

/// `m` projections on `m + 1` copies of `H`; effect `k` (1-based) pairs block 0
/// with block `k`.
pub fn dilate_multi(effects: &[Effect]) -> Result<DilationResult> {
    let d = effects.first().ok_or(Error::EmptyInput)?.dim();
    let m = effects.len();
    let projections = effects
        .iter()
        .enumerate()
        .map(|(i, a)| check_dim(d, a.dim()).map(|_| dilated(a, i + 1, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DilationResult { blocks: Blocks { m, d }, projections })
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub g: ComplexMatrix,
    /// `||P_i psi||`
    pub source_norms: Vec<f64>,
}

/// `G_ij = <psi|P_i P_j|psi> / (||P_i psi|| ||P_j psi||)`.
pub fn gram_matrix(projections: &[ComplexMatrix], psi: &[C64]) -> Result<GramMatrix> {
    if projections.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut vectors = Vec::with_capacity(projections.len());
    let mut source_norms = Vec::with_capacity(projections.len());
    for (j, p) in projections.iter().enumerate() {
        check_dim(p.cols(), psi.len())?;
        let v = p.mul_vec(psi);
        let n = vec_norm(&v);
        if n <= NULL_TOL {
            return Err(Error::NullProjection(j));
        }
        vectors.push(v.into_iter().map(|z| z / n).collect::<Vec<_>>());
        source_norms.push(n);
    }
    let m = vectors.len();
    let mut g = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        g[(i, i)] = C64::new(1.0, 0.0);
        for j in (i + 1)..m {
            let z = inner(&vectors[i], &vectors[j]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
        }
    }
    Ok(GramMatrix { g, source_norms })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Record {
    /// `sum_i <psi|P_i|psi>`
    pub sum_probs: f64,
    /// Top eigenvalue of the Gram matrix.
    pub lambda: f64,
    /// `1 + offdiag_frobenius(G)`
    pub frob_bound: f64,
    /// `sum_probs <= lambda` within tolerance.
    pub holds: bool,
    /// `lambda <= frob_bound` within tolerance.
    pub chain_holds: bool,
    /// Indices with `P_j psi = 0`, left out of the Gram matrix.
    pub dropped: Vec<usize>,
}

/// Checks `sum_i <psi|P_i|psi> <= Lambda(psi) <= 1 + offdiag_frobenius(G)`.
pub fn lemma1_check(projections: &[ComplexMatrix], psi: &[C64]) -> Result<Lemma1Record> {
    let mut kept = Vec::with_capacity(projections.len());
    let mut dropped = Vec::new();
    let mut sum_probs = 0.0;
    for (j, p) in projections.iter().enumerate() {
        check_dim(p.cols(), psi.len())?;
        let v = p.mul_vec(psi);
        sum_probs += inner(psi, &v).re;
        if vec_norm(&v) <= NULL_TOL {
            dropped.push(j);
        } else {
            kept.push(p.clone());
        }
    }
    if !dropped.is_empty() {
        warn!("lemma check: dropping null projections {dropped:?}");
    }
    let (lambda, frob_bound) = if kept.is_empty() {
        (0.0, 1.0)
    } else {
        let gram = gram_matrix(&kept, psi)?;
        let lambda = hermitian_eig(&gram.g, ASSERT_TOL)?.max_eigenvalue();
        (lambda, 1.0 + offdiag_frobenius(&gram.g))
    };
    Ok(Lemma1Record {
        sum_probs,
        lambda,
        frob_bound,
        holds: sum_probs <= lambda + ASSERT_TOL,
        chain_holds: lambda <= frob_bound + ASSERT_TOL,
        dropped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossOverlap {
    /// `|<Omega|AB|Omega>| / (||A^{1/2} Omega|| ||B^{1/2} Omega||)`
    pub overlap: f64,
    /// `||A^{1/2} B^{1/2}||`
    pub norm_bound: f64,
    pub holds: bool,
}

pub fn cross_overlap_bound(a: &Effect, b: &Effect, omega: &[C64]) -> Result<CrossOverlap> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), omega.len())?;
    let na = vec_norm(&a.sqrt().mul_vec(omega));
    let nb = vec_norm(&b.sqrt().mul_vec(omega));
    if na <= NULL_TOL || nb <= NULL_TOL {
        return Err(Error::NullVector);
    }
    let amp = inner(&a.op().mul_vec(omega), &b.op().mul_vec(omega));
    let overlap = amp.norm() / (na * nb);
    let norm_bound = crate::bounds::cross_norm(a, b)?;
    Ok(CrossOverlap { overlap, norm_bound, holds: overlap <= norm_bound + ASSERT_TOL })
}
