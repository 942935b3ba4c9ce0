//! Randomized verification campaigns.
//!
//! Trial `t` of a campaign with seed `s` draws everything from ChaCha stream
//! `(s, t)`, and results are folded in trial order, so reports are identical
//! for any thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::bounds::{self, evaluate, BoundKind, Operands};
use crate::dilation::{dilate_multi, lemma1_check, IDEMPOTENCY_TOL, PRESERVATION_TOL};
use crate::error::{Error, Result};
use crate::mub::MubFamily;
use crate::quantum::{haar_vector, random_density_with, random_effect_with, seeded_rng, Effect, State};
use crate::separability::{correlation_observables, random_separable_with, statistic_for_observables, Verdict};

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;
/// Dimensions swept when no `--dim` is given.
pub const DIM_RANGE: (usize, usize) = (2, 8);
/// Effect counts swept when no `--m` is given.
pub const M_RANGE: (usize, usize) = (2, 6);
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    Pair,
    Multi,
    Lemma1,
    Dilation,
    Separability,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub kind: CampaignKind,
    /// Fixed dimension; `None` sweeps [`DIM_RANGE`].
    pub dim: Option<usize>,
    /// Fixed number of effects; `None` sweeps [`M_RANGE`].
    pub m: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl CampaignConfig {
    pub fn new(kind: CampaignKind) -> Self {
        CampaignConfig { kind, dim: None, m: None, trials: DEFAULT_TRIALS, seed: 0, tolerance: DEFAULT_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if let Some(d) = self.dim {
            if d == 0 {
                return Err(Error::BadDim(d));
            }
        }
        if self.m == Some(0) {
            return Err(Error::EmptyInput);
        }
        if self.kind == CampaignKind::Separability {
            MubFamily::for_dim(self.dim.ok_or(Error::InvalidConfig("separability campaign needs a dimension".into()))?)?;
        }
        Ok(())
    }

    fn dim_for(&self, trial: u64) -> usize {
        self.dim.unwrap_or_else(|| sweep(DIM_RANGE, trial))
    }

    fn m_for(&self, trial: u64) -> usize {
        self.m.unwrap_or_else(|| sweep(M_RANGE, trial / (DIM_RANGE.1 - DIM_RANGE.0 + 1) as u64))
    }
}

fn sweep((lo, hi): (usize, usize), trial: u64) -> usize {
    lo + (trial % (hi - lo + 1) as u64) as usize
}

/// A failed trial with everything needed to replay it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: u64,
    pub dim: usize,
    pub slack: f64,
    pub detail: String,
    /// `{"effects": [...], "state": {...}}`, readable by `lp bound`.
    pub inputs: serde_json::Value,
}

#[derive(Clone, Debug)]
struct TrialOutcome {
    slack: f64,
    digest: String,
    failure: Option<TrialFailure>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub violations: usize,
    pub min_slack: f64,
    pub min_slack_trial: u64,
    /// SHA-256 over the per-trial input digests, in trial order.
    pub digest: String,
    pub failures: Vec<TrialFailure>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn replay_inputs(effects: &[Effect], state: &State) -> serde_json::Value {
    json!({ "effects": effects, "state": state })
}

fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> State {
    let rank = rng.random_range(1..=dim);
    random_density_with(dim, rank, rng).expect("rank within 1..=dim")
}

fn outcome(trial: u64, dim: usize, slack: f64, tol: f64, digest: String, detail: &str, inputs: impl FnOnce() -> serde_json::Value) -> TrialOutcome {
    let failure = (slack < -tol).then(|| TrialFailure { trial, dim, slack, detail: detail.to_owned(), inputs: inputs() });
    TrialOutcome { slack, digest, failure }
}

fn run_trial(cfg: &CampaignConfig, family: Option<&Family>, trial: u64) -> Result<TrialOutcome> {
    let mut rng = seeded_rng(cfg.seed, trial);
    let tol = cfg.tolerance;
    let d = cfg.dim_for(trial);
    match cfg.kind {
        CampaignKind::Pair => {
            let a = random_effect_with(d, &mut rng);
            let b = random_effect_with(d, &mut rng);
            let rho = random_state(d, &mut rng);
            let ops = Operands::Pair { a, b };
            let r = evaluate(BoundKind::PairGeneral, &ops, &rho)?;
            let Operands::Pair { a, b } = ops else { unreachable!() };
            Ok(outcome(trial, d, r.slack, tol, r.inputs_digest, "pair bound violated", || {
                replay_inputs(&[a, b], &rho)
            }))
        }
        CampaignKind::Multi => {
            let m = cfg.m_for(trial);
            let effects: Vec<Effect> = (0..m).map(|_| random_effect_with(d, &mut rng)).collect();
            let rho = random_state(d, &mut rng);
            let ops = Operands::Effects { effects };
            let r = evaluate(BoundKind::Multi, &ops, &rho)?;
            let Operands::Effects { effects } = ops else { unreachable!() };
            Ok(outcome(trial, d, r.slack, tol, r.inputs_digest, "multi bound violated", || {
                replay_inputs(&effects, &rho)
            }))
        }
        CampaignKind::Lemma1 => {
            let m = cfg.m_for(trial);
            let effects: Vec<Effect> = (0..m).map(|_| random_effect_with(d, &mut rng)).collect();
            let omega = haar_vector(d, &mut rng);
            let dil = dilate_multi(&effects)?;
            let rec = lemma1_check(&dil.projections, &dil.embed(&omega)?)?;
            let multi = bounds::multi_bound(&effects)?;
            let slack = (rec.lambda - rec.sum_probs).min(rec.frob_bound - rec.lambda).min(multi - rec.frob_bound);
            let state = State::pure(omega)?;
            let digest = bounds::digest_of(&(CampaignKind::Lemma1, &effects, &state));
            Ok(outcome(trial, d, slack, tol, digest, "Gram eigenvalue chain violated", || {
                replay_inputs(&effects, &state)
            }))
        }
        CampaignKind::Dilation => {
            let m = cfg.m_for(trial);
            let effects: Vec<Effect> = (0..m).map(|_| random_effect_with(d, &mut rng)).collect();
            let omega = haar_vector(d, &mut rng);
            let dil = dilate_multi(&effects)?;
            let idem = dil.idempotency_residual();
            let herm = dil.hermiticity_residual();
            let pres = dil.preservation_residual(&effects, &omega)?;
            // margins against fixed residual thresholds; negative means failure
            let slack = (IDEMPOTENCY_TOL - idem).min(HERMITICITY_TOL - herm).min(PRESERVATION_TOL - pres);
            let state = State::pure(omega)?;
            let digest = bounds::digest_of(&(CampaignKind::Dilation, &effects, &state));
            let detail = format!("dilation residuals: idempotency {idem:e}, hermiticity {herm:e}, preservation {pres:e}");
            let failure = (slack < 0.0).then(|| TrialFailure {
                trial,
                dim: d,
                slack,
                detail,
                inputs: replay_inputs(&effects, &state),
            });
            Ok(TrialOutcome { slack, digest, failure })
        }
        CampaignKind::Separability => {
            let family = family.expect("family prepared for separability campaigns");
            let terms = 1 + (trial % 4) as usize;
            let rho = random_separable_with(family.family.dim, terms, &mut rng)?;
            let r = statistic_for_observables(&rho, &family.observables)?;
            let digest = bounds::digest_of(&(CampaignKind::Separability, &rho));
            let slack = r.rhs - r.lhs;
            let failure = (r.verdict == Verdict::EntangledDetected || slack < -tol).then(|| TrialFailure {
                trial,
                dim: family.family.dim,
                slack,
                detail: "separable state exceeded the criterion bound".into(),
                inputs: json!({ "state": rho }),
            });
            Ok(TrialOutcome { slack, digest, failure })
        }
    }
}

struct Family {
    family: MubFamily,
    observables: Vec<crate::separability::CorrelationObservable>,
}

/// Runs a campaign on the current rayon pool.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let family = match cfg.kind {
        CampaignKind::Separability => {
            let family = MubFamily::for_dim(cfg.dim.expect("validated"))?;
            let observables = correlation_observables(&family)?;
            Some(Family { family, observables })
        }
        _ => None,
    };
    let outcomes = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, family.as_ref(), t))
        .collect::<Result<Vec<_>>>()?;

    let mut hasher = Sha256::new();
    let mut min_slack = f64::INFINITY;
    let mut min_slack_trial = 0;
    let mut failures = Vec::new();
    for (t, o) in outcomes.into_iter().enumerate() {
        hasher.update(o.digest.as_bytes());
        if o.slack < min_slack {
            min_slack = o.slack;
            min_slack_trial = t as u64;
        }
        failures.extend(o.failure);
    }
    Ok(CampaignReport {
        config: cfg.clone(),
        violations: failures.len(),
        min_slack,
        min_slack_trial,
        digest: hex::encode(hasher.finalize()),
        failures,
    })
}

/// Runs a campaign on a dedicated pool of `threads` workers.
pub fn run_campaign_with_threads(cfg: &CampaignConfig, threads: usize) -> Result<CampaignReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_campaign(cfg))
}
