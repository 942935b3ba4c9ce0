//! Closed-form uncertainty bounds and their evaluation against concrete states.
//!
//! Every inequality is reported in the orientation `lhs <= rhs`, so a
//! [`BoundReport`] holds exactly when `slack = rhs - lhs >= -CHECK_TOL`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inner, operator_norm, vec_norm, C64};
use crate::mub::{mub_projector_picks, MubFamily};
use crate::quantum::{check_dim, probability, Effect, State, CONSTRUCTION_TOL};
use crate::separability::separability_statistic;

/// Slack below which a report counts as a violation.
pub const CHECK_TOL: f64 = 1e-9;
/// Unit-norm tolerance for vector operands.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    WeakLpPair,
    PairGeneral,
    Multi,
    Mub,
    TrivialCombination,
    LpAngle,
    Separability,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub inputs_digest: String,
}

impl BoundReport {
    pub fn new(kind: BoundKind, lhs: f64, rhs: f64, inputs_digest: String) -> Self {
        let slack = rhs - lhs;
        BoundReport { kind, lhs, rhs, slack, holds: slack >= -CHECK_TOL, inputs_digest }
    }
}

/// Operands for [`evaluate`]; which variant is needed depends on the kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "operands", rename_all = "snake_case")]
pub enum Operands {
    /// Two unit vectors (`weak_lp_pair`, `lp_angle`).
    Vectors { i_vec: Vec<C64>, j_vec: Vec<C64> },
    /// Two effects (`pair_general`).
    Pair { a: Effect, b: Effect },
    /// Any number of effects (`multi`).
    Effects { effects: Vec<Effect> },
    /// One vector per basis of a MUB family (`mub`, `trivial_combination`).
    MubPicks { family: MubFamily, picks: Vec<usize> },
    /// A MUB family on one party of a bipartite system (`separability`).
    Family { family: MubFamily },
}

fn check_unit(v: &[C64]) -> Result<()> {
    let norm = vec_norm(v);
    if (norm - 1.0).abs() > UNIT_TOL {
        Err(Error::NotUnit { norm })
    } else {
        Ok(())
    }
}

/// `1 + |<i|j>|`
pub fn weak_lp_pair_bound(i_vec: &[C64], j_vec: &[C64]) -> Result<f64> {
    check_unit(i_vec)?;
    check_unit(j_vec)?;
    check_dim(i_vec.len(), j_vec.len())?;
    Ok(1.0 + inner(i_vec, j_vec).norm())
}

/// `||A^{1/2} B^{1/2}||`
pub fn cross_norm(a: &Effect, b: &Effect) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(operator_norm(&(a.sqrt() * b.sqrt())))
}

/// `1 + ||A^{1/2} B^{1/2}||`. For projections this is `1 + ||P Q||`.
pub fn pair_bound(a: &Effect, b: &Effect) -> Result<f64> {
    Ok(1.0 + cross_norm(a, b)?)
}

/// `1 + (sum_{i != j} ||A_i^{1/2} A_j^{1/2}||^2)^{1/2}`, the sum running over
/// ordered pairs.
pub fn multi_bound(effects: &[Effect]) -> Result<f64> {
    let dim = effects.first().ok_or(Error::EmptyInput)?.dim();
    let mut total = 0.0;
    for (i, a) in effects.iter().enumerate() {
        check_dim(dim, a.dim())?;
        for b in &effects[i + 1..] {
            // ||X|| = ||X^dagger|| covers the (j, i) term
            total += 2.0 * cross_norm(a, b)?.powi(2);
        }
    }
    Ok(1.0 + total.sqrt())
}

/// `1 + sqrt(D + 1)`: the multi-effect bound for one vector from each of
/// `D + 1` mutually unbiased bases.
pub fn mub_bound(dim: usize) -> f64 {
    1.0 + ((dim + 1) as f64).sqrt()
}

/// `(D+1)/2 + (sqrt(D) + 1/sqrt(D))/2`, obtained by summing the pair bound
/// `1 + 1/sqrt(D)` over all pairs of `D + 1` MUB projections.
pub fn trivial_combination_bound(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::BadDim(dim));
    }
    let d = dim as f64;
    Ok((d + 1.0) / 2.0 + 0.5 * (d.sqrt() + 1.0 / d.sqrt()))
}

/// Both readings of the arc-cosine relation for rank-one projections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpAngleReport {
    /// `|<i|j>|`
    pub overlap: f64,
    pub p: f64,
    pub q: f64,
    /// `arccos|<i|j>| <= arccos(p) + arccos(q)`
    pub literal: BoundReport,
    /// `arccos|<i|j>| <= arccos(sqrt p) + arccos(sqrt q)`
    pub amplitude: BoundReport,
}

/// Range vector of a rank-one projection, taken as its largest column so that
/// equal projections yield bitwise-equal vectors.
pub fn rank_one_vector(e: &Effect) -> Result<Vec<C64>> {
    let ev = &e.eig().eigenvalues;
    let n = ev.len();
    let top_ok = (ev[n - 1] - 1.0).abs() <= CONSTRUCTION_TOL;
    let rest_ok = ev[..n - 1].iter().all(|l| l.abs() <= CONSTRUCTION_TOL);
    if !(top_ok && rest_ok) {
        return Err(Error::NotRankOne);
    }
    let op = e.op();
    let col = (0..n)
        .map(|k| (k, op[(k, k)].re))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0;
    let v = op.column(col);
    let norm = vec_norm(&v);
    Ok(v.into_iter().map(|z| z / norm).collect())
}

/// Fubini-Study angle `arccos |<u|v>|` between unit vectors, computed from
/// chord lengths so it stays accurate near 0.
pub fn fs_angle(u: &[C64], v: &[C64]) -> f64 {
    let z = inner(u, v);
    let r = z.norm();
    if r == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let phase = z.conj() / r;
    let (mut minus, mut plus) = (0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        let w = phase * b;
        minus += (a - w).norm_sqr();
        plus += (a + w).norm_sqr();
    }
    2.0 * minus.sqrt().atan2(plus.sqrt())
}

fn acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

pub fn lp_angle_check(p: &Effect, q: &Effect, psi: &[C64]) -> Result<LpAngleReport> {
    check_unit(psi)?;
    let i_vec = rank_one_vector(p)?;
    let j_vec = rank_one_vector(q)?;
    check_dim(i_vec.len(), psi.len())?;
    check_dim(j_vec.len(), psi.len())?;
    let norm = vec_norm(psi);
    let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
    let overlap = inner(&i_vec, &j_vec).norm();
    let pp = inner(&i_vec, &psi).norm_sqr();
    let qq = inner(&j_vec, &psi).norm_sqr();
    let digest = digest_of(&(BoundKind::LpAngle, &i_vec, &j_vec, &psi));
    let lhs = fs_angle(&i_vec, &j_vec);
    let amplitude_rhs = fs_angle(&i_vec, &psi) + fs_angle(&j_vec, &psi);
    Ok(LpAngleReport {
        overlap,
        p: pp,
        q: qq,
        literal: BoundReport::new(BoundKind::LpAngle, lhs, acos(pp) + acos(qq), digest.clone()),
        amplitude: BoundReport::new(BoundKind::LpAngle, lhs, amplitude_rhs, digest),
    })
}

/// Hex SHA-256 of the canonical JSON serialization of `value`.
pub fn digest_of<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("operands serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Serialize)]
struct DigestInput<'a> {
    kind: BoundKind,
    operands: &'a Operands,
    state: &'a State,
}

fn sum_probabilities(effects: &[Effect], rho: &State) -> Result<f64> {
    effects.iter().map(|e| probability(e, rho)).sum()
}

/// Vector of a (numerically) pure state.
fn pure_vector(rho: &State) -> Result<Vec<C64>> {
    if let Some(v) = rho.pure_vector() {
        return Ok(v.to_vec());
    }
    let eig = hermitian_eig(rho.rho(), CONSTRUCTION_TOL)?;
    if (eig.max_eigenvalue() - 1.0).abs() > CONSTRUCTION_TOL {
        return Err(Error::InvalidState("lp_angle needs a pure state".into()));
    }
    Ok(eig.top_vector())
}

/// Evaluates one inequality on `rho`. The left side is the raw (unclamped) sum
/// of probabilities, or the sum of `M_inf` for `separability`.
pub fn evaluate(kind: BoundKind, operands: &Operands, rho: &State) -> Result<BoundReport> {
    let digest = digest_of(&DigestInput { kind, operands, state: rho });
    let (lhs, rhs) = match (kind, operands) {
        (BoundKind::WeakLpPair, Operands::Vectors { i_vec, j_vec }) => {
            let rhs = weak_lp_pair_bound(i_vec, j_vec)?;
            let pair = [Effect::projector(i_vec)?, Effect::projector(j_vec)?];
            (sum_probabilities(&pair, rho)?, rhs)
        }
        (BoundKind::PairGeneral, Operands::Pair { a, b }) => {
            (probability(a, rho)? + probability(b, rho)?, pair_bound(a, b)?)
        }
        (BoundKind::Multi, Operands::Effects { effects }) => {
            (sum_probabilities(effects, rho)?, multi_bound(effects)?)
        }
        (BoundKind::Mub, Operands::MubPicks { family, picks }) => {
            let effects = mub_projector_picks(family, picks)?;
            (sum_probabilities(&effects, rho)?, multi_bound(&effects)?)
        }
        (BoundKind::TrivialCombination, Operands::MubPicks { family, picks }) => {
            let effects = mub_projector_picks(family, picks)?;
            (sum_probabilities(&effects, rho)?, trivial_combination_bound(family.dim)?)
        }
        (BoundKind::LpAngle, Operands::Vectors { i_vec, j_vec }) => {
            let psi = pure_vector(rho)?;
            let r = lp_angle_check(&Effect::projector(i_vec)?, &Effect::projector(j_vec)?, &psi)?;
            (r.amplitude.lhs, r.amplitude.rhs)
        }
        (BoundKind::Separability, Operands::Family { family }) => {
            let r = separability_statistic(rho, family)?;
            (r.lhs, r.rhs)
        }
        (kind, _) => return Err(Error::OperandMismatch(kind.to_string())),
    };
    Ok(BoundReport::new(kind, lhs, rhs, digest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::mub::{mub_odd_prime, mub_qubit};
    use crate::quantum::{max_sum_oracle, Povm};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket0() -> Vec<C64> {
        vec![c(1.0, 0.0), c(0.0, 0.0)]
    }
    fn ket1() -> Vec<C64> {
        vec![c(0.0, 0.0), c(1.0, 0.0)]
    }
    fn ket_plus() -> Vec<C64> {
        vec![c(S, 0.0), c(S, 0.0)]
    }

    #[test]
    fn weak_lp_examples() {
        assert!((weak_lp_pair_bound(&ket0(), &ket1()).unwrap() - 1.0).abs() < 1e-15);
        assert!((weak_lp_pair_bound(&ket0(), &ket0()).unwrap() - 2.0).abs() < 1e-15);
        assert!((weak_lp_pair_bound(&ket0(), &ket_plus()).unwrap() - 1.707_106_781_186_547_6).abs() < 1e-15);
        let long = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(weak_lp_pair_bound(&long, &ket0()), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn pair_bound_examples() {
        let p0 = Effect::projector(&ket0()).unwrap();
        assert!((pair_bound(&p0, &p0).unwrap() - 2.0).abs() < 1e-14);
        let (oracle, _) = max_sum_oracle(&[p0.clone(), p0.clone()]).unwrap();
        assert!((oracle - 2.0).abs() < 1e-14);

        let f = mub_qubit();
        let a = Effect::projector(&f.vector(0, 0)).unwrap();
        let b = Effect::projector(&f.vector(1, 1)).unwrap();
        assert!((pair_bound(&a, &b).unwrap() - (1.0 + S)).abs() < 1e-14);

        let p1 = Effect::projector(&ket1()).unwrap();
        assert!((pair_bound(&p0, &p1).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn multi_bound_examples() {
        let pvm = Povm::from_basis(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(multi_bound(pvm.effects()).unwrap(), 1.0);

        let a = Effect::new(ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap()).unwrap();
        let b = Effect::projector(&ket_plus()).unwrap();
        let diff = multi_bound(&[a.clone(), b.clone()]).unwrap() - pair_bound(&a, &b).unwrap();
        let expected = (2f64.sqrt() - 1.0) * cross_norm(&a, &b).unwrap();
        assert!((diff - expected).abs() < 1e-12);

        let f = mub_odd_prime(3).unwrap();
        let picks = mub_projector_picks(&f, &[0, 0, 0, 0]).unwrap();
        assert!((multi_bound(&picks).unwrap() - 3.0).abs() < 1e-9);

        assert!(matches!(multi_bound(&[]), Err(Error::EmptyInput)));
        let other_dim = Effect::new(ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(multi_bound(&[a, other_dim]), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn trivial_combination_values() {
        // closed forms: 1.5 + (sqrt2 + 1/sqrt2)/2 and 2 + (sqrt3 + 1/sqrt3)/2
        assert!((trivial_combination_bound(2).unwrap() - 2.560_660_171_779_821).abs() < 1e-12);
        assert!((trivial_combination_bound(3).unwrap() - 3.154_700_538_379_252).abs() < 1e-12);
        assert!(mub_bound(3) < trivial_combination_bound(3).unwrap());
        assert!(mub_bound(2) > trivial_combination_bound(2).unwrap());
        assert!(matches!(trivial_combination_bound(1), Err(Error::BadDim(1))));
    }

    #[test]
    fn lp_angle_examples() {
        let p0 = Effect::projector(&ket0()).unwrap();
        let p1 = Effect::projector(&ket1()).unwrap();

        let r = lp_angle_check(&p0, &p0, &ket0()).unwrap();
        assert!(r.amplitude.lhs.abs() < 1e-15 && r.amplitude.rhs.abs() < 1e-15);
        assert!(r.amplitude.slack.abs() < 1e-15);
        assert!(r.amplitude.holds && r.literal.holds);

        let r = lp_angle_check(&p0, &p1, &ket0()).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!((r.amplitude.lhs - half_pi).abs() < 1e-12);
        assert!((r.amplitude.rhs - half_pi).abs() < 1e-12);
        assert!(r.amplitude.holds);

        let mixed = Effect::new(ComplexMatrix::from_real_diag(&[0.5, 0.5])).unwrap();
        assert!(matches!(lp_angle_check(&mixed, &p0, &ket0()), Err(Error::NotRankOne)));
    }

    #[test]
    fn evaluate_examples() {
        let p0 = Effect::projector(&ket0()).unwrap();
        let p1 = Effect::projector(&ket1()).unwrap();
        let ops = Operands::Pair { a: p0.clone(), b: p1 };
        let r = evaluate(BoundKind::PairGeneral, &ops, &State::maximally_mixed(2)).unwrap();
        assert!(r.holds && r.slack >= 0.0);
        assert_eq!(r.inputs_digest.len(), 64);

        let f = mub_qubit();
        let picks = mub_projector_picks(&f, &[0, 0, 0]).unwrap();
        let (_, arg) = max_sum_oracle(&picks).unwrap();
        let r = evaluate(BoundKind::Multi, &Operands::Effects { effects: picks }, &arg).unwrap();
        assert!((r.lhs - 2.366_025_403_784_438).abs() < 1e-9);
        assert!((r.rhs - 2.732_050_807_568_877).abs() < 1e-9);
        assert!(r.holds);

        let q = Effect::projector(&ket_plus()).unwrap();
        let pair = [p0.clone(), q.clone()];
        let (_, arg) = max_sum_oracle(&pair).unwrap();
        let r = evaluate(BoundKind::PairGeneral, &Operands::Pair { a: p0.clone(), b: q }, &arg).unwrap();
        assert!(r.slack.abs() <= 1e-9);

        let err = evaluate(BoundKind::Multi, &ops, &arg).unwrap_err();
        assert!(matches!(err, Error::OperandMismatch(_)));
    }

    #[test]
    fn evaluate_mub_and_trivial_kinds() {
        let f = mub_odd_prime(3).unwrap();
        let ops = Operands::MubPicks { family: f, picks: vec![0, 1, 2, 0] };
        let rho = State::maximally_mixed(3);
        let mub = evaluate(BoundKind::Mub, &ops, &rho).unwrap();
        let triv = evaluate(BoundKind::TrivialCombination, &ops, &rho).unwrap();
        assert!((mub.lhs - 4.0 / 3.0).abs() < 1e-12);
        assert!((mub.rhs - 3.0).abs() < 1e-9);
        assert!(triv.rhs > mub.rhs);
        assert_ne!(mub.inputs_digest, triv.inputs_digest);
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        let ops = Operands::Vectors { i_vec: ket0(), j_vec: ket_plus() };
        let rho = State::pure(ket0()).unwrap();
        let a = evaluate(BoundKind::WeakLpPair, &ops, &rho).unwrap();
        let b = evaluate(BoundKind::WeakLpPair, &ops, &rho).unwrap();
        assert_eq!(a, b);
        let other = evaluate(BoundKind::WeakLpPair, &ops, &State::pure(ket1()).unwrap()).unwrap();
        assert_ne!(a.inputs_digest, other.inputs_digest);
        let lp = evaluate(BoundKind::LpAngle, &ops, &rho).unwrap();
        assert!(lp.holds);
    }

    #[test]
    fn report_json_shape() {
        let r = BoundReport::new(BoundKind::PairGeneral, 1.2, 1.5, "ab".into());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "pair_general");
        for key in ["lhs", "rhs", "slack", "holds", "inputs_digest"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let violated = BoundReport::new(BoundKind::Multi, 2.0, 2.0 - 2e-9, String::new());
        assert!(!violated.holds);
        let edge = BoundReport::new(BoundKind::Multi, 2.0, 2.0 - 5e-10, String::new());
        assert!(edge.holds);
    }
}
