//! The `lp` command-line tool.
//!
//! Exit codes: 0 when every check passed, 1 when an inequality or assertion
//! failed, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{
    evaluate, mub_bound, multi_bound, pair_bound, trivial_combination_bound, BoundKind, BoundReport, Operands,
};
use crate::campaign::{run_campaign, run_campaign_with_threads, CampaignConfig, CampaignKind, CampaignReport, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::mub::{is_prime, mub_projector_picks, verify_mub, MubFamily};
use crate::quantum::{max_sum_oracle, Effect, EffectSet, State};
use crate::separability::{separability_statistic, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lp", version, about = "Generalized Landau-Pollak uncertainty bounds: evaluation and verification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Campaign seed; trial t uses RNG stream (seed, t)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Violation tolerance on inequality slack
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print one JSON document instead of a human summary
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the full JSON report (including failing inputs) to this path
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for campaigns (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized verification campaigns
    Verify(VerifyArgs),
    /// Evaluate a bound on effects read from a file
    Bound(BoundArgs),
    /// Build or check a MUB family
    Mub(MubArgs),
    /// Oracle maximum versus the multi-effect bound for one vector per MUB basis
    MubBound {
        #[arg(long)]
        dim: usize,
    },
    /// Gap between the exact maximum of sum <A_i> and the bounds
    Tightness {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Separability criterion
    Sep(SepArgs),
    /// Multi-effect MUB bound versus the pairwise combination, for dimensions 2..=dim
    Compare {
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyTarget {
    Pair,
    Multi,
    Lemma1,
    Dilation,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Fixed dimension (default: sweep 2..=8)
    #[arg(long)]
    pub dim: Option<usize>,
    /// Fixed number of effects (default: sweep 2..=6)
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundTarget {
    Pair,
    Multi,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub target: BoundTarget,
    /// Effect list `{"effects": [...]}`; a `"state"` entry in the same file is used when present
    #[arg(long = "in")]
    pub input: PathBuf,
    /// State file; without one the bound is evaluated at the oracle maximizer
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MubAction {
    Build,
    Check,
}

#[derive(Debug, Args)]
pub struct MubArgs {
    #[arg(value_enum)]
    pub action: MubAction,
    #[arg(long)]
    pub dim: usize,
    /// Family file to check instead of the built-in construction
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SepArgs {
    #[command(subcommand)]
    pub action: SepAction,
}

#[derive(Debug, Subcommand)]
pub enum SepAction {
    /// Evaluate the criterion on a state read from a file
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Random separable states must never be flagged
    Campaign {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
}

/// Result of one command: a JSON document, a human rendering, and an exit code.
struct Outcome {
    doc: Value,
    human: String,
    code: i32,
}

/// Parses `argv` and runs the command against the process stdout/stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    // unlocked handles: worker threads may log to stderr while a command runs
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let json_mode = cli.global.json;
    match execute(&cli) {
        Ok(o) => {
            if let Some(path) = &cli.global.out {
                if let Err(e) = write_json(path, &o.doc) {
                    return usage_error(err, json_mode, &e);
                }
            }
            let text = if json_mode {
                serde_json::to_string_pretty(&o.doc).unwrap_or_default() + "\n"
            } else {
                o.human
            };
            let _ = out.write_all(text.as_bytes());
            if o.code == EXIT_VIOLATION && cli.global.out.is_none() && !json_mode {
                if let Some(f) = o.doc.get("failures").filter(|f| f.as_array().is_some_and(|a| !a.is_empty())) {
                    let _ = writeln!(err, "{}", serde_json::to_string(f).unwrap_or_default());
                }
            }
            o.code
        }
        Err(e) => usage_error(err, json_mode, &e),
    }
}

fn usage_error(err: &mut dyn Write, json_mode: bool, e: &Error) -> i32 {
    if json_mode {
        let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
    } else {
        let _ = writeln!(err, "error: {e}");
    }
    EXIT_USAGE
}

fn write_json(path: &Path, doc: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Accepts `{"effects": [...], "labels": [...]}` or a bare array of effects.
fn effect_set(raw: Value) -> Result<EffectSet> {
    let set: EffectSet = match raw {
        Value::Array(effects) => serde_json::from_value(json!({ "effects": effects }))?,
        other => serde_json::from_value(other)?,
    };
    if set.effects.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(set)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(Error::InvalidConfig("--tol must be positive".into()));
    }
    if g.threads == Some(0) {
        return Err(Error::InvalidConfig("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Verify(args) => {
            let kind = match args.target {
                VerifyTarget::Pair => CampaignKind::Pair,
                VerifyTarget::Multi => CampaignKind::Multi,
                VerifyTarget::Lemma1 => CampaignKind::Lemma1,
                VerifyTarget::Dilation => CampaignKind::Dilation,
            };
            let cfg = CampaignConfig { kind, dim: args.dim, m: args.m, trials: args.trials, seed: g.seed, tolerance: g.tol };
            campaign(&cfg, g.threads)
        }
        Command::Sep(SepArgs { action: SepAction::Campaign { dim, trials } }) => {
            let cfg = CampaignConfig {
                kind: CampaignKind::Separability,
                dim: Some(*dim),
                m: None,
                trials: *trials,
                seed: g.seed,
                tolerance: g.tol,
            };
            campaign(&cfg, g.threads)
        }
        Command::Sep(SepArgs { action: SepAction::Check { input, dim } }) => sep_check(input, *dim),
        Command::Bound(args) => bound(args),
        Command::Mub(args) => mub(args, g.tol),
        Command::MubBound { dim } => mub_bound_cmd(*dim),
        Command::Tightness { input } => tightness(input, g.tol),
        Command::Compare { dim } => compare(*dim),
    }
}

fn campaign(cfg: &CampaignConfig, threads: Option<usize>) -> Result<Outcome> {
    cfg.validate()?;
    let report: CampaignReport = match threads {
        Some(n) => run_campaign_with_threads(cfg, n)?,
        None => run_campaign(cfg)?,
    };
    let human = format!(
        "{:?} campaign: {} trials, seed {}, {} violation(s), min slack {:.3e} (trial {})\ndigest {}\n",
        cfg.kind, cfg.trials, cfg.seed, report.violations, report.min_slack, report.min_slack_trial, report.digest
    );
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome { doc: to_value(&report)?, human, code })
}

fn format_report(label: &str, r: &BoundReport) -> String {
    format!(
        "{label:<14} lhs {:.10}  rhs {:.10}  slack {:+.3e}  {}\n",
        r.lhs,
        r.rhs,
        r.slack,
        if r.holds { "holds" } else { "VIOLATED" }
    )
}

fn bound(args: &BoundArgs) -> Result<Outcome> {
    let raw: Value = read_json(&args.input)?;
    let set = effect_set(raw.clone())?;
    let state: Option<State> = match (&args.state, raw.get("state")) {
        (Some(path), _) => Some(read_json(path)?),
        (None, Some(s)) => Some(serde_json::from_value(s.clone())?),
        (None, None) => None,
    };
    let at = |effects: &[Effect]| -> Result<State> {
        match &state {
            Some(s) => Ok(s.clone()),
            None => Ok(max_sum_oracle(effects)?.1),
        }
    };

    let mut reports = Vec::new();
    let mut human = String::new();
    match args.target {
        BoundTarget::Pair => {
            if set.effects.len() < 2 {
                return Err(Error::InvalidConfig("pair bound needs at least two effects".into()));
            }
            for i in 0..set.effects.len() {
                for j in (i + 1)..set.effects.len() {
                    let (a, b) = (set.effects[i].clone(), set.effects[j].clone());
                    let rho = at(&[a.clone(), b.clone()])?;
                    let r = evaluate(BoundKind::PairGeneral, &Operands::Pair { a, b }, &rho)?;
                    human += &format_report(&format!("pair ({i},{j})"), &r);
                    reports.push(json!({ "i": i, "j": j, "report": r }));
                }
            }
        }
        BoundTarget::Multi => {
            let rho = at(&set.effects)?;
            let r = evaluate(BoundKind::Multi, &Operands::Effects { effects: set.effects.clone() }, &rho)?;
            human += &format_report("multi", &r);
            reports.push(json!({ "report": r }));
        }
    }
    let all_hold = reports.iter().all(|r| r["report"]["holds"] == json!(true));
    let doc = json!({ "evaluated_at": if state.is_some() { "given_state" } else { "oracle_maximizer" }, "reports": reports });
    Ok(Outcome { doc, human, code: if all_hold { EXIT_OK } else { EXIT_VIOLATION } })
}

fn mub(args: &MubArgs, tol: f64) -> Result<Outcome> {
    let family = match &args.input {
        Some(path) => {
            let f: MubFamily = read_json(path)?;
            if f.dim != args.dim {
                return Err(Error::DimMismatch { expected: args.dim, found: f.dim });
            }
            f
        }
        None => MubFamily::for_dim(args.dim)?,
    };
    match args.action {
        MubAction::Build => {
            let doc = to_value(&family)?;
            let human = serde_json::to_string(&doc)? + "\n";
            Ok(Outcome { doc, human, code: EXIT_OK })
        }
        MubAction::Check => {
            let deviation = verify_mub(&family);
            let unitarity = family.unitarity_deviation();
            let ok = deviation <= tol && unitarity <= tol;
            let doc = json!({
                "dim": family.dim,
                "num_bases": family.num_bases(),
                "max_overlap_deviation": deviation,
                "max_unitarity_deviation": unitarity,
                "passed": ok,
            });
            let human = format!(
                "D = {}: {} bases, overlap deviation {:.3e}, unitarity deviation {:.3e}: {}\n",
                family.dim,
                family.num_bases(),
                deviation,
                unitarity,
                if ok { "ok" } else { "FAILED" }
            );
            Ok(Outcome { doc, human, code: if ok { EXIT_OK } else { EXIT_VIOLATION } })
        }
    }
}

fn mub_bound_cmd(dim: usize) -> Result<Outcome> {
    let family = MubFamily::for_dim(dim)?;
    let picks = vec![0; family.num_bases()];
    let effects = mub_projector_picks(&family, &picks)?;
    let (oracle, maximizer) = max_sum_oracle(&effects)?;
    let ops = Operands::MubPicks { family, picks };
    let r = evaluate(BoundKind::Mub, &ops, &maximizer)?;
    let closed_form = mub_bound(dim);
    let trivial = trivial_combination_bound(dim)?;
    let doc = json!({
        "dim": dim,
        "report": r,
        "oracle_max": oracle,
        "closed_form_rhs": closed_form,
        "trivial_combination": trivial,
    });
    let human = format!(
        "D = {dim}, one vector from each of {} bases\n  lhs (oracle max) {:.10}\n  rhs               {:.10}  (1 + sqrt(D+1) = {:.10})\n  slack             {:.10}\n  pairwise combination bound {:.10}\n",
        dim + 1,
        r.lhs,
        r.rhs,
        closed_form,
        r.slack,
        trivial
    );
    Ok(Outcome { doc, human, code: if r.holds { EXIT_OK } else { EXIT_VIOLATION } })
}

fn tightness(input: &Path, tol: f64) -> Result<Outcome> {
    let set = effect_set(read_json(input)?)?;
    let (oracle, _) = max_sum_oracle(&set.effects)?;
    let multi = multi_bound(&set.effects)?;
    let mut doc = json!({
        "m": set.effects.len(),
        "oracle_max": oracle,
        "multi_bound": multi,
        "multi_gap": multi - oracle,
    });
    let mut human = format!(
        "m = {}: oracle max {:.10}, multi bound {:.10}, gap {:.3e}\n",
        set.effects.len(),
        oracle,
        multi,
        multi - oracle
    );
    let mut violated = multi - oracle < -tol;
    if let [a, b] = set.effects.as_slice() {
        let pair = pair_bound(a, b)?;
        doc["pair_bound"] = json!(pair);
        doc["pair_gap"] = json!(pair - oracle);
        human += &format!("pair bound {:.10}, gap {:.3e}\n", pair, pair - oracle);
        violated |= pair - oracle < -tol;
    }
    Ok(Outcome { doc, human, code: if violated { EXIT_VIOLATION } else { EXIT_OK } })
}

fn sep_check(input: &Path, dim: usize) -> Result<Outcome> {
    let rho: State = read_json(input)?;
    let family = MubFamily::for_dim(dim)?;
    let r = separability_statistic(&rho, &family)?;
    let human = format!(
        "D = {dim}: sum of M_inf {:.10} vs bound {:.10}: {}\n",
        r.lhs,
        r.rhs,
        match r.verdict {
            Verdict::EntangledDetected => "entangled (detected)",
            Verdict::Inconclusive => "inconclusive",
        }
    );
    Ok(Outcome { doc: to_value(&r)?, human, code: EXIT_OK })
}

fn compare(max_dim: usize) -> Result<Outcome> {
    if max_dim < 2 {
        return Err(Error::BadDim(max_dim));
    }
    let mut rows = Vec::new();
    let mut human = format!("{:>4} {:>14} {:>14} {:>10} {:>12}\n", "D", "1+sqrt(D+1)", "pairwise", "better", "MUB built");
    for d in 2..=max_dim {
        let multi = mub_bound(d);
        let trivial = trivial_combination_bound(d)?;
        let better = if multi < trivial { "multi" } else { "pairwise" };
        let constructible = d == 2 || is_prime(d);
        human += &format!("{d:>4} {multi:>14.10} {trivial:>14.10} {better:>10} {:>12}\n", if constructible { "yes" } else { "no" });
        rows.push(json!({
            "dim": d,
            "mub_bound": multi,
            "trivial_combination": trivial,
            "multi_is_better": multi < trivial,
            "mub_constructible": constructible,
        }));
    }
    Ok(Outcome { doc: json!({ "rows": rows }), human, code: EXIT_OK })
}
