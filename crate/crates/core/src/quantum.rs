//! States, effects and POVMs, plus seeded samplers and the exact
//! `max_rho sum_i <A_i>_rho` oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, inner, vec_norm, ComplexMatrix, EigenDecomposition, MatrixJson, C64};

/// Tolerance applied when validating user-supplied operators.
pub const CONSTRUCTION_TOL: f64 = 1e-6;
/// Tolerance for internal consistency assertions.
pub const ASSERT_TOL: f64 = 1e-9;

/// Density operator.
#[derive(Clone, Debug)]
pub struct State {
    rho: ComplexMatrix,
    pure: Option<Vec<C64>>,
}

impl State {
    /// Validates trace, hermiticity and positivity at [`CONSTRUCTION_TOL`].
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        rho.ensure_square()?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > CONSTRUCTION_TOL || tr.im.abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eig(&rho, CONSTRUCTION_TOL).map_err(|e| match e {
            Error::NotHermitian { deviation } => {
                Error::InvalidState(format!("not Hermitian (deviation {deviation:e})"))
            }
            other => other,
        })?;
        if eig.min_eigenvalue() < -CONSTRUCTION_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                eig.min_eigenvalue()
            )));
        }
        Ok(State { rho: rho.hermitian_part(), pure: None })
    }

    /// Pure state `|v><v|`; `v` must be unit within [`CONSTRUCTION_TOL`] and is renormalized.
    pub fn pure(v: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&v);
        if v.is_empty() || (norm - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::NotUnit { norm });
        }
        let v: Vec<C64> = v.into_iter().map(|z| z / norm).collect();
        Ok(State { rho: ComplexMatrix::projector(&v), pure: Some(v) })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        State { rho: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), pure: None }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// The state vector, when the state was constructed pure.
    pub fn pure_vector(&self) -> Option<&[C64]> {
        self.pure.as_deref()
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.rho.trace_product_re(&self.rho)
    }

    /// Convex combination `sum_k w_k rho_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &State)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyInput)?.1;
        let mut rho = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in parts {
            check_dim(first.dim(), s.dim())?;
            rho = &rho + &s.rho.scale_real(*w);
        }
        State::new(rho)
    }

    pub fn tensor(&self, other: &State) -> State {
        let pure = match (&self.pure, &other.pure) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()),
            _ => None,
        };
        State { rho: linalg::kron(&self.rho, &other.rho), pure }
    }
}

/// Positive operator `0 <= A <= 1`.
#[derive(Clone, Debug)]
pub struct Effect {
    op: ComplexMatrix,
    eig: EigenDecomposition,
    sqrt: ComplexMatrix,
}

impl Effect {
    /// Validates `0 <= A <= 1` at [`CONSTRUCTION_TOL`].
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        op.ensure_square()?;
        let eig = hermitian_eig(&op, CONSTRUCTION_TOL).map_err(|e| match e {
            Error::NotHermitian { deviation } => {
                Error::InvalidEffect(format!("not Hermitian (deviation {deviation:e})"))
            }
            other => other,
        })?;
        let (lo, hi) = (eig.min_eigenvalue(), eig.max_eigenvalue());
        if lo < -CONSTRUCTION_TOL || hi > 1.0 + CONSTRUCTION_TOL {
            return Err(Error::InvalidEffect(format!("spectrum [{lo:e}, {hi}] is not inside [0, 1]")));
        }
        let sqrt = linalg::psd_sqrt_from_eig(&eig, CONSTRUCTION_TOL)?;
        Ok(Effect { op: op.hermitian_part(), eig, sqrt })
    }

    /// Rank-one projection onto the normalized `v`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        let norm = vec_norm(v);
        if norm == 0.0 {
            return Err(Error::NullVector);
        }
        let u: Vec<C64> = v.iter().map(|z| z / norm).collect();
        Effect::new(ComplexMatrix::projector(&u))
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// `A^{1/2}`
    pub fn sqrt(&self) -> &ComplexMatrix {
        &self.sqrt
    }

    /// Whether `A^2 = A` within `tol` (Frobenius).
    pub fn is_projection(&self, tol: f64) -> bool {
        (&(&self.op * &self.op) - &self.op).frobenius_norm() <= tol
    }
}

/// Family of effects summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    effects: Vec<Effect>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = effects.first().ok_or(Error::EmptyPovm)?.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &effects {
            check_dim(dim, e.dim())?;
            sum = &sum + e.op();
        }
        let deviation = (&sum - &ComplexMatrix::identity(dim)).frobenius_norm();
        if deviation > CONSTRUCTION_TOL {
            return Err(Error::IncompletePovm { deviation });
        }
        let labels = match labels {
            Some(l) if l.len() != effects.len() => {
                return Err(Error::Malformed(format!("{} labels for {} effects", l.len(), effects.len())))
            }
            Some(l) => l,
            None => (0..effects.len()).map(|i| i.to_string()).collect(),
        };
        Ok(Povm { effects, labels })
    }

    /// Rank-one PVM whose outcomes are the columns of `basis`.
    pub fn from_basis(basis: &ComplexMatrix) -> Result<Self> {
        let effects = (0..basis.cols())
            .map(|c| Effect::projector(&basis.column(c)))
            .collect::<Result<Vec<_>>>()?;
        Povm::new(effects, None)
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

/// POVM whose elements are mutually orthogonal projections.
#[derive(Clone, Debug)]
pub struct Pvm(Povm);

impl Pvm {
    pub fn new(povm: Povm) -> Result<Self> {
        let e = povm.effects();
        for (i, a) in e.iter().enumerate() {
            if !a.is_projection(CONSTRUCTION_TOL) {
                return Err(Error::NotPvm(format!("element {i} is not idempotent")));
            }
            for (j, b) in e.iter().enumerate().skip(i + 1) {
                if (a.op() * b.op()).frobenius_norm() > CONSTRUCTION_TOL {
                    return Err(Error::NotPvm(format!("elements {i} and {j} are not orthogonal")));
                }
            }
        }
        Ok(Pvm(povm))
    }

    pub fn from_basis(basis: &ComplexMatrix) -> Result<Self> {
        Pvm::new(Povm::from_basis(basis)?)
    }

    pub fn povm(&self) -> &Povm {
        &self.0
    }
}

impl std::ops::Deref for Pvm {
    type Target = Povm;

    fn deref(&self) -> &Povm {
        &self.0
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}

/// Raw `Re tr(rho A)`, not clamped.
pub fn probability(a: &Effect, rho: &State) -> Result<f64> {
    check_dim(a.dim(), rho.dim())?;
    Ok(rho.rho().trace_product_re(a.op()))
}

/// Probability clamped into `[0, 1]` for display.
pub fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `max_i <P_i>_rho`
pub fn m_infinity(p: &Povm, rho: &State) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptyPovm);
    }
    p.effects()
        .iter()
        .map(|e| probability(e, rho))
        .try_fold(f64::NEG_INFINITY, |m, x| x.map(|x| m.max(x)))
}

/// Exact supremum of `sum_i <A_i>_rho` over all states: the top eigenvalue of
/// `sum_i A_i`, attained at its eigenvector.
pub fn max_sum_oracle(effects: &[Effect]) -> Result<(f64, State)> {
    let dim = effects.first().ok_or(Error::EmptyInput)?.dim();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for e in effects {
        check_dim(dim, e.dim())?;
        sum = &sum + e.op();
    }
    let eig = hermitian_eig(&sum, linalg::HERMITIAN_TOL)?;
    let state = State::pure(eig.top_vector())?;
    Ok((eig.max_eigenvalue(), state))
}

/// Deterministic RNG for stream `stream` of a seeded campaign.
///
/// Distinct streams of the same seed are independent ChaCha streams, so
/// results never depend on how trials are scheduled.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-distributed unit vector.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let n = vec_norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&cols).expect("dim >= 1")
}

/// Haar-random pure state, deterministic in `seed`.
pub fn haar_random_pure(dim: usize, seed: u64) -> State {
    let mut rng = seeded_rng(seed, 0);
    haar_random_pure_with(dim, &mut rng)
}

pub fn haar_random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> State {
    let v = haar_vector(dim, rng);
    State { rho: ComplexMatrix::projector(&v), pure: Some(v) }
}

/// Random density matrix of the given rank, from the partial trace of a Haar
/// pure state on `dim * rank`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<State> {
    random_density_with(dim, rank, &mut seeded_rng(seed, 0))
}

pub fn random_density_with<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<State> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    if rank == 1 {
        return Ok(haar_random_pure_with(dim, rng));
    }
    // amplitudes psi[i * rank + k] for system index i and ancilla index k
    let psi = haar_vector(dim * rank, rng);
    let rho = ComplexMatrix::from_fn(dim, dim, |i, j| {
        (0..rank).map(|k| psi[i * rank + k] * psi[j * rank + k].conj()).sum()
    });
    let tr = rho.trace().re;
    Ok(State { rho: rho.hermitian_part().scale_real(1.0 / tr), pure: None })
}

/// Random effect `U diag(u) U^dagger`. Each eigenvalue is uniform on `[0, 1]`
/// except that a fifth of them are pinned to exactly 0 or 1, so projections and
/// rank-deficient effects show up regularly.
pub fn random_effect_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Effect {
    let u = haar_unitary(dim, rng);
    let spectrum: Vec<f64> = (0..dim)
        .map(|_| {
            let x: f64 = rng.random();
            if rng.random_bool(0.2) {
                x.round()
            } else {
                x
            }
        })
        .collect();
    let op = &(&u * &ComplexMatrix::from_real_diag(&spectrum)) * &u.adjoint();
    Effect::new(op).expect("spectrum lies in [0, 1]")
}

/// Rank-one projection onto a Haar-random vector.
pub fn random_rank_one_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (Vec<C64>, Effect) {
    let v = haar_vector(dim, rng);
    let e = Effect::projector(&v).expect("unit vector");
    (v, e)
}

/// Random `n`-outcome POVM: `S^{-1/2} B_k S^{-1/2}` for random positive `B_k`
/// with `S = sum_k B_k`.
pub fn random_povm_with<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Result<Povm> {
    if n == 0 {
        return Err(Error::EmptyPovm);
    }
    let raw: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
            &g * &g.adjoint()
        })
        .collect();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for b in &raw {
        sum = &sum + b;
    }
    let inv_sqrt = hermitian_eig(&sum, linalg::HERMITIAN_TOL)?.map(|l| 1.0 / l.sqrt());
    let effects = raw
        .iter()
        .map(|b| Effect::new((&(&inv_sqrt * b) * &inv_sqrt).hermitian_part()))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(effects, None)
}

/// Dirichlet(1, ..., 1) weights.
pub fn random_simplex_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[derive(Serialize, Deserialize)]
struct TaggedMatrix {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(flatten)]
    matrix: MatrixJson,
}

fn untag(t: TaggedMatrix, expected: &str) -> Result<ComplexMatrix> {
    match t.kind.as_deref() {
        None => {}
        Some(k) if k == expected => {}
        Some(k) => return Err(Error::Malformed(format!("expected kind \"{expected}\", found \"{k}\""))),
    }
    ComplexMatrix::try_from(t.matrix)
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TaggedMatrix { kind: Some("state".into()), matrix: self.rho.clone().into() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = TaggedMatrix::deserialize(d)?;
        untag(t, "state").and_then(State::new).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Effect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TaggedMatrix { kind: Some("effect".into()), matrix: self.op.clone().into() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Effect {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = TaggedMatrix::deserialize(d)?;
        untag(t, "effect").and_then(Effect::new).map_err(serde::de::Error::custom)
    }
}

/// File format for effect lists and POVMs: `{"effects": [...], "labels": [...]}`.
///
/// Completeness is not required here; use [`EffectSet::into_povm`] when it is.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EffectSet {
    pub effects: Vec<Effect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl EffectSet {
    pub fn into_povm(self) -> Result<Povm> {
        Povm::new(self.effects, self.labels)
    }
}

impl From<&Povm> for EffectSet {
    fn from(p: &Povm) -> Self {
        EffectSet { effects: p.effects.clone(), labels: Some(p.labels.clone()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket0() -> Vec<C64> {
        vec![c(1.0, 0.0), c(0.0, 0.0)]
    }

    fn ket_plus() -> Vec<C64> {
        vec![c(S, 0.0), c(S, 0.0)]
    }

    fn trine() -> Vec<Effect> {
        (0..3)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                let v = [c((th / 2.0).cos(), 0.0), c((th / 2.0).sin(), 0.0)];
                Effect::new(ComplexMatrix::projector(&v).scale_real(2.0 / 3.0)).unwrap()
            })
            .collect()
    }

    #[test]
    fn probability_examples() {
        let id = Effect::new(ComplexMatrix::identity(3)).unwrap();
        let rho = haar_random_pure(3, 11);
        assert!((probability(&id, &rho).unwrap() - 1.0).abs() < 1e-12);

        let p0 = Effect::projector(&ket0()).unwrap();
        let plus = State::pure(ket_plus()).unwrap();
        assert!((probability(&p0, &plus).unwrap() - 0.5).abs() < 1e-15);

        let t = &trine()[0];
        assert!((probability(t, &State::maximally_mixed(2)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn probability_dim_mismatch() {
        let p0 = Effect::projector(&ket0()).unwrap();
        let err = probability(&p0, &State::maximally_mixed(3)).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn m_infinity_examples() {
        let z = Povm::from_basis(&ComplexMatrix::identity(2)).unwrap();
        let zero = State::pure(ket0()).unwrap();
        assert!((m_infinity(&z, &zero).unwrap() - 1.0).abs() < 1e-15);

        let z4 = Povm::from_basis(&ComplexMatrix::identity(4)).unwrap();
        assert!((m_infinity(&z4, &State::maximally_mixed(4)).unwrap() - 0.25).abs() < 1e-15);

        let x_basis = ComplexMatrix::from_real_rows(&[&[S, S], &[S, -S]]).unwrap();
        let x = Povm::from_basis(&x_basis).unwrap();
        assert!((m_infinity(&x, &zero).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let bad_trace = ComplexMatrix::from_real_diag(&[0.5, 0.4]);
        assert!(matches!(State::new(bad_trace), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_real_diag(&[1.1, -0.1]);
        assert!(matches!(State::new(negative), Err(Error::InvalidState(_))));
        let almost = ComplexMatrix::from_real_diag(&[1.0 + 5e-7, -5e-7]);
        assert!(State::new(almost).is_ok());

        let too_big = ComplexMatrix::from_real_diag(&[1.01, 0.0]);
        assert!(matches!(Effect::new(too_big), Err(Error::InvalidEffect(_))));

        let halves = vec![
            Effect::new(ComplexMatrix::from_real_diag(&[0.5, 0.5])).unwrap(),
            Effect::new(ComplexMatrix::from_real_diag(&[0.5, 0.4999])).unwrap(),
        ];
        assert!(matches!(Povm::new(halves, None), Err(Error::IncompletePovm { .. })));
        assert!(matches!(Povm::new(vec![], None), Err(Error::EmptyPovm)));
    }

    #[test]
    fn trine_is_a_povm_but_not_a_pvm() {
        let p = Povm::new(trine(), None).unwrap();
        assert!(matches!(Pvm::new(p), Err(Error::NotPvm(_))));
        assert!(Pvm::from_basis(&ComplexMatrix::identity(3)).is_ok());
    }

    #[test]
    fn haar_determinism_and_dim_one() {
        let a = haar_random_pure(5, 42);
        let b = haar_random_pure(5, 42);
        assert_eq!(a.rho(), b.rho());
        assert_eq!(a.pure_vector(), b.pure_vector());
        assert_ne!(haar_random_pure(5, 43).rho(), a.rho());

        let one = haar_random_pure(1, 9);
        assert!((one.rho()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn haar_first_moment() {
        let n = 10_000;
        let mean: f64 = (0..n).map(|s| haar_random_pure(2, s).rho()[(0, 0)].re).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
    }

    #[test]
    fn random_density_properties() {
        let pure = random_density(4, 1, 3).unwrap();
        assert!((pure.purity() - 1.0).abs() <= 1e-9);
        for seed in 0..200 {
            let rho = random_density(2, 2, seed).unwrap();
            let eig = hermitian_eig(rho.rho(), 1e-12).unwrap();
            assert!(eig.min_eigenvalue() > 0.0);
            assert!((rho.rho().trace().re - 1.0).abs() <= 1e-12);
            let r3 = random_density(5, 3, seed).unwrap();
            assert!((r3.rho().trace().re - 1.0).abs() <= 1e-12);
            let ev = hermitian_eig(r3.rho(), 1e-12).unwrap().eigenvalues;
            assert_eq!(ev.iter().filter(|&&l| l > 1e-9).count(), 3);
        }
        assert!(matches!(random_density(3, 0, 1), Err(Error::BadRank { .. })));
        assert!(matches!(random_density(3, 4, 1), Err(Error::BadRank { .. })));
    }

    #[test]
    fn random_povm_is_complete() {
        let mut rng = seeded_rng(5, 0);
        let p = random_povm_with(4, 6, &mut rng).unwrap();
        let rho = random_density(4, 2, 8).unwrap();
        let total: f64 = p.effects().iter().map(|e| probability(e, &rho).unwrap()).sum();
        assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn oracle_examples() {
        let pvm = Povm::from_basis(&ComplexMatrix::identity(3)).unwrap();
        let (v, _) = max_sum_oracle(pvm.effects()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let pair = [Effect::projector(&ket0()).unwrap(), Effect::projector(&ket_plus()).unwrap()];
        let (v, arg) = max_sum_oracle(&pair).unwrap();
        assert!((v - (1.0 + S)).abs() < 1e-12);
        let lhs: f64 = pair.iter().map(|e| probability(e, &arg).unwrap()).sum();
        assert!((lhs - v).abs() <= 1e-9);

        // one vector from each Pauli eigenbasis
        let mub3 = [
            Effect::projector(&ket0()).unwrap(),
            Effect::projector(&ket_plus()).unwrap(),
            Effect::projector(&[c(S, 0.0), c(0.0, S)]).unwrap(),
        ];
        let (v, _) = max_sum_oracle(&mub3).unwrap();
        assert!((v - (3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);

        assert!(matches!(max_sum_oracle(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn json_formats() {
        let rho = random_density(2, 2, 1).unwrap();
        let s = serde_json::to_value(&rho).unwrap();
        assert_eq!(s["kind"], "state");
        let back: State = serde_json::from_value(s.clone()).unwrap();
        assert!((back.rho() - rho.rho()).frobenius_norm() < 1e-15);

        let mut as_effect = s;
        as_effect["kind"] = "effect".into();
        assert!(serde_json::from_value::<State>(as_effect).is_err());

        let p = Povm::new(trine(), Some(vec!["a".into(), "b".into(), "c".into()])).unwrap();
        let txt = serde_json::to_string(&EffectSet::from(&p)).unwrap();
        let set: EffectSet = serde_json::from_str(&txt).unwrap();
        let p2 = set.into_povm().unwrap();
        assert_eq!(p2.labels(), p.labels());
    }
}
