//! Mutually unbiased bases in dimension 2 and in odd prime dimensions.
//!
//! Bases are stored as unitary matrices whose columns are the basis vectors.
//! The computational basis always comes first.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, C64};
use crate::quantum::{Effect, Pvm};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MubFamily {
    pub dim: usize,
    pub bases: Vec<ComplexMatrix>,
}

impl MubFamily {
    /// Family for any supported dimension: 2 or an odd prime.
    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(mub_qubit()),
            d if is_prime(d) => mub_odd_prime(d),
            d => Err(Error::BadDim(d)),
        }
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn vector(&self, basis: usize, outcome: usize) -> Vec<C64> {
        self.bases[basis].column(outcome)
    }

    /// The rank-one measurement in basis `i`.
    pub fn pvm(&self, basis: usize) -> Result<Pvm> {
        Pvm::from_basis(&self.bases[basis])
    }

    /// Same measurement with every vector entrywise conjugated.
    pub fn conj_pvm(&self, basis: usize) -> Result<Pvm> {
        Pvm::from_basis(&self.bases[basis].conj())
    }

    /// Largest `||B^dagger B - 1||_F` over the bases.
    pub fn unitarity_deviation(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| (&(&b.adjoint() * b) - &ComplexMatrix::identity(b.cols())).frobenius_norm())
            .fold(0.0, f64::max)
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The three Pauli eigenbases: Z, X, Y.
pub fn mub_qubit() -> MubFamily {
    let s = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    let z = ComplexMatrix::identity(2);
    let x = ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).expect("2x2");
    let y = ComplexMatrix::new(2, 2, vec![r(s), r(s), C64::new(0.0, s), C64::new(0.0, -s)]).expect("2x2");
    MubFamily { dim: 2, bases: vec![z, x, y] }
}

/// `p + 1` bases for an odd prime `p`: the computational basis, then for each
/// `j = 0..p` the basis with vectors `|t:j> = p^{-1/2} sum_k w^{j k^2 + t k} |k>`,
/// `w = exp(2 pi i / p)`.
pub fn mub_odd_prime(p: usize) -> Result<MubFamily> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let norm = 1.0 / (p as f64).sqrt();
    let mut bases = vec![ComplexMatrix::identity(p)];
    for j in 0..p {
        bases.push(ComplexMatrix::from_fn(p, p, |k, t| {
            // exponent reduced mod p before scaling keeps the phase exact
            let e = (j * k % p * k + t * k) % p;
            C64::from_polar(norm, 2.0 * PI * e as f64 / p as f64)
        }));
    }
    Ok(MubFamily { dim: p, bases })
}

/// `max | |<s:j|t:i>| - 1/sqrt(D) |` over vectors from distinct bases.
pub fn verify_mub(f: &MubFamily) -> f64 {
    let target = 1.0 / (f.dim as f64).sqrt();
    let mut worst = 0.0_f64;
    for (i, a) in f.bases.iter().enumerate() {
        for b in f.bases.iter().skip(i + 1) {
            for s in 0..a.cols() {
                let u = a.column(s);
                for t in 0..b.cols() {
                    worst = worst.max((inner(&u, &b.column(t)).norm() - target).abs());
                }
            }
        }
    }
    worst
}

/// One rank-one projection per basis, `P_i = |s_i:i><s_i:i|`.
pub fn mub_projector_picks(f: &MubFamily, picks: &[usize]) -> Result<Vec<Effect>> {
    if picks.len() != f.num_bases() {
        return Err(Error::DimMismatch { expected: f.num_bases(), found: picks.len() });
    }
    picks
        .iter()
        .enumerate()
        .map(|(basis, &s)| {
            if s >= f.dim {
                return Err(Error::IndexOutOfRange { index: s, len: f.dim });
            }
            Effect::projector(&f.vector(basis, s))
        })
        .collect()
}
