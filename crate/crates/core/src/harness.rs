//! Instance files, run reports, verification suites and benches behind the
//! `densel` command line.
//!
//! Instance file (JSON):
//!
//! ```json
//! {
//!   "domain_size": 2,
//!   "Q": [["1", "0"], ["0", "1"]],
//!   "p": ["1/2", "1/2"],
//!   "samples": [0, 1, 1],
//!   "generator": {"kind": "random", "n": 3, "seed": 5}
//! }
//! ```
//!
//! Probabilities are exact literals (`"1/3"`, `"0.25"`) or JSON numbers read
//! through their decimal text. `p`, `samples` and `generator` are optional;
//! a generator fills in `Q` (and `p` if absent).
//!
//! Seeds: every random stream is ChaCha8 seeded with the master seed and
//! switched to a stream number, see [`crate::lowerbound::trial_rng`]. Stream
//! 0 draws samples, stream 1 feeds the oracle, stream `t` is trial `t` in
//! the lower-bound experiment.

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::distributions::{
    distance_vector, sample_with, total_variation, total_variation_f64, DistributionError, FiniteDistribution,
    SampleBatch,
};
use crate::geometry::{qtv_separate_with, support_equivalence_check, water_fill, GeometryError, SeparationMethod};
use crate::lowerbound::{
    build_instance, chain_rule_bound, distinguisher_experiment, exact_tvs, other_base_tv, own_base_tv,
    sample_member, separation_demo_instance, trial_rng, wrong_base_factor, ExperimentReport, Learner,
    LowerBoundError, TrialRecord,
};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use crate::oracle::{fresh_sample_size, BackendKind, OracleError, QueryBudget, StatOracle};
use crate::rational::{format_rational, int, parse_rational, ratio, to_f64, Rational};
use crate::selectors::{
    accuracy_a1, accuracy_a2, guarantee_holds, improper_select_a1, improper_select_a2, improper_select_exact,
    iteration_bound, required_budget_a1, required_budget_a2, static_select, yatracos_proper, SelectionResult,
    SelectorError,
};
use crate::yatracos::{uniform_convergence_budget, ThresholdClass, YatracosError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("verification suite `{suite}` failed {failures} check(s)")]
    VerifyFailed { suite: String, failures: usize },
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error(transparent)]
    LowerBound(#[from] LowerBoundError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Yatracos(#[from] YatracosError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

impl HarnessError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Schema(_) | HarnessError::Io { .. } | HarnessError::UnknownSuite(_) => 2,
            HarnessError::Distribution(_) => 2,
            HarnessError::LowerBound(LowerBoundError::NonIntegerK(_) | LowerBoundError::BetaOutOfRange(_)) => 2,
            HarnessError::VerifyFailed { .. } => 3,
            HarnessError::Selector(SelectorError::OracleAccuracyViolation { .. })
            | HarnessError::LowerBound(LowerBoundError::Selector(SelectorError::OracleAccuracyViolation { .. })) => 4,
            _ => 1,
        }
    }

    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::Schema(_) => "schema_error",
            HarnessError::Io { .. } => "io_error",
            HarnessError::VerifyFailed { .. } => "guarantee_violation",
            HarnessError::UnknownSuite(_) => "unknown_suite",
            HarnessError::Distribution(_) => "invalid_distribution",
            HarnessError::LowerBound(LowerBoundError::NonIntegerK(_) | LowerBoundError::BetaOutOfRange(_)) => {
                "invalid_construction"
            }
            _ if self.exit_code() == 4 => "oracle_accuracy_violation",
            _ => "runtime_error",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.code(), "exit_code": self.exit_code(), "message": self.to_string()})
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// A probability literal: string or JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    fn parse(&self, at: &str) -> Result<Rational, HarnessError> {
        let text = match self {
            Literal::Text(s) => s.clone(),
            Literal::Number(n) => n.to_string(),
        };
        parse_rational(&text).map_err(|e| HarnessError::Schema(format!("{at}: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `n` candidates and a target with integer weights in `0..=max_weight`.
    Random {
        n: usize,
        seed: u64,
        #[serde(default = "default_max_weight")]
        max_weight: u64,
    },
    /// The two-family construction; the target is a random member.
    Lowerbound {
        beta: String,
        #[serde(rename = "N")]
        n_half: usize,
        family: u8,
        seed: u64,
    },
}

fn default_max_weight() -> u64 {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub domain_size: usize,
    #[serde(rename = "Q", default)]
    pub q: Vec<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub candidates: Vec<FiniteDistribution>,
    pub target: Option<FiniteDistribution>,
    pub samples: Option<SampleBatch>,
}

fn parse_vector(values: &[Literal], domain_size: usize, at: &str) -> Result<FiniteDistribution, HarnessError> {
    if values.len() != domain_size {
        return Err(HarnessError::Schema(format!(
            "{at}: has {} entries, domain_size is {domain_size}",
            values.len()
        )));
    }
    let probs = values
        .iter()
        .enumerate()
        .map(|(x, v)| v.parse(&format!("{at}[{x}]")))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteDistribution::new(probs).map_err(|e| HarnessError::Schema(format!("{at}: {e}")))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Schema(m) => HarnessError::Schema(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    /// Writes a file holding exactly these distributions.
    pub fn from_instance(instance: &Instance) -> Self {
        let lit = |p: &FiniteDistribution| p.literals().into_iter().map(Literal::Text).collect();
        InstanceFile {
            domain_size: instance.candidates[0].domain_size(),
            q: instance.candidates.iter().map(lit).collect(),
            p: instance.target.as_ref().map(lit),
            samples: instance.samples.as_ref().map(|b| b.draws.clone()),
            generator: None,
        }
    }

    pub fn resolve(&self) -> Result<Instance, HarnessError> {
        let d = self.domain_size;
        if d == 0 {
            return Err(HarnessError::Schema("domain_size: must be positive".into()));
        }
        let mut candidates = self
            .q
            .iter()
            .enumerate()
            .map(|(i, q)| parse_vector(q, d, &format!("Q[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut target = self.p.as_ref().map(|p| parse_vector(p, d, "p")).transpose()?;
        match &self.generator {
            None => {}
            Some(GeneratorSpec::Random { n, seed, max_weight }) => {
                if !candidates.is_empty() {
                    return Err(HarnessError::Schema("Q and generator are mutually exclusive".into()));
                }
                if *n == 0 || *max_weight == 0 {
                    return Err(HarnessError::Schema("generator: n and max_weight must be positive".into()));
                }
                let mut rng = trial_rng(*seed, 0);
                candidates = random_family(*n, d, *max_weight, &mut rng);
                let generated = random_distribution(d, *max_weight, &mut rng);
                target.get_or_insert(generated);
            }
            Some(GeneratorSpec::Lowerbound {
                beta,
                n_half,
                family,
                seed,
            }) => {
                if !candidates.is_empty() {
                    return Err(HarnessError::Schema("Q and generator are mutually exclusive".into()));
                }
                if d != 2 * n_half {
                    return Err(HarnessError::Schema(format!("generator: domain_size must be 2N = {}", 2 * n_half)));
                }
                let beta = parse_rational(beta).map_err(|e| HarnessError::Schema(format!("generator.beta: {e}")))?;
                let inst = build_instance(&beta, *n_half)?;
                let mut rng = trial_rng(*seed, 0);
                let m = sample_member(&inst, *family, &mut rng)?;
                candidates = inst.candidates();
                target.get_or_insert(m.p);
            }
        }
        if candidates.is_empty() {
            return Err(HarnessError::Schema("Q: need at least one candidate".into()));
        }
        let samples = match &self.samples {
            Some(draws) => {
                if let Some(x) = draws.iter().find(|x| **x >= d) {
                    return Err(HarnessError::Schema(format!("samples: atom {x} outside the domain")));
                }
                Some(SampleBatch {
                    draws: draws.clone(),
                    source_seed: None,
                })
            }
            None => None,
        };
        Ok(Instance {
            candidates,
            target,
            samples,
        })
    }
}

/// Distribution with i.i.d. integer weights in `0..=max_weight`; an all-zero
/// draw is replaced by a point mass.
pub fn random_distribution<R: Rng + ?Sized>(d: usize, max_weight: u64, rng: &mut R) -> FiniteDistribution {
    let mut weights: Vec<u64> = (0..d).map(|_| rng.gen_range(0..=max_weight)).collect();
    if weights.iter().all(|w| *w == 0) {
        weights[rng.gen_range(0..d)] = 1;
    }
    FiniteDistribution::from_weights(&weights).expect("positive total weight")
}

pub fn random_family<R: Rng + ?Sized>(n: usize, d: usize, max_weight: u64, rng: &mut R) -> Vec<FiniteDistribution> {
    (0..n).map(|_| random_distribution(d, max_weight, rng)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub master_seed: u64,
    pub config: Value,
    pub records: Vec<Value>,
    pub summary: Value,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Yatracos,
    A1,
    A2,
    Static,
    Exact,
}

impl std::str::FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "yatracos" => Ok(Algo::Yatracos),
            "a1" => Ok(Algo::A1),
            "a2" => Ok(Algo::A2),
            "static" => Ok(Algo::Static),
            "exact" => Ok(Algo::Exact),
            other => Err(format!("unknown algorithm `{other}` (yatracos|a1|a2|static|exact)")),
        }
    }
}

pub fn parse_backend(s: &str) -> Result<BackendKind, String> {
    match s {
        "exact" => Ok(BackendKind::Exact),
        "fresh" => Ok(BackendKind::FreshSample),
        "reuse" => Ok(BackendKind::NaiveReuse),
        "gauss" => Ok(BackendKind::GaussianNoise),
        other => Err(format!("unknown oracle `{other}` (exact|fresh|reuse|gauss)")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectArgs {
    pub algo: Algo,
    #[serde(with = "crate::rational::serde_rational")]
    pub epsilon: Rational,
    pub delta: f64,
    pub oracle: BackendKind,
    pub gauss_sigma: f64,
    /// Shared sample size for reuse backends.
    pub shared_m: Option<usize>,
    /// Batch size for sample-based learners; defaults per learner.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Score with floating-point TV instead of exact TV.
    pub float: bool,
}

impl SelectArgs {
    pub fn new(algo: Algo, epsilon: Rational) -> Self {
        Self {
            algo,
            epsilon,
            delta: 0.1,
            oracle: BackendKind::FreshSample,
            gauss_sigma: 0.01,
            shared_m: None,
            samples: None,
            seed: 0,
            float: false,
        }
    }
}

fn batch_for(instance: &Instance, m: usize, seed: u64) -> Result<SampleBatch, HarnessError> {
    if let Some(batch) = &instance.samples {
        return Ok(batch.clone());
    }
    let p = instance
        .target
        .as_ref()
        .ok_or_else(|| HarnessError::Schema("p: required to draw samples when `samples` is absent".into()))?;
    let mut rng = trial_rng(seed, 0);
    let mut batch = sample_with(p, m, &mut rng);
    batch.source_seed = Some(seed);
    Ok(batch)
}

fn build_oracle(instance: &Instance, args: &SelectArgs, budget: QueryBudget) -> Result<StatOracle, HarnessError> {
    let d = instance.candidates[0].domain_size();
    let oracle_seed = trial_rng(args.seed, 1).gen();
    let need_p = || {
        instance
            .target
            .clone()
            .ok_or_else(|| HarnessError::Schema(format!("p: required by the {:?} oracle", args.oracle)))
    };
    Ok(match args.oracle {
        BackendKind::Exact => StatOracle::exact(need_p()?, budget),
        BackendKind::FreshSample => StatOracle::fresh(&need_p()?, budget, fresh_sample_size(&budget), oracle_seed),
        BackendKind::NaiveReuse => {
            let m = args.shared_m.unwrap_or_else(|| fresh_sample_size(&budget));
            StatOracle::reuse(&batch_for(instance, m, args.seed)?, d, budget)?
        }
        BackendKind::GaussianNoise => {
            let m = args.shared_m.unwrap_or_else(|| fresh_sample_size(&budget));
            StatOracle::gaussian(&batch_for(instance, m, args.seed)?, d, budget, args.gauss_sigma, oracle_seed)?
        }
    })
}

/// Runs one learner on an instance.
pub fn select_on(instance: &Instance, args: &SelectArgs) -> Result<SelectionResult, HarnessError> {
    let q = &instance.candidates;
    let n = q.len();
    let eps = &args.epsilon;
    Ok(match args.algo {
        Algo::Exact => {
            let p = instance
                .target
                .as_ref()
                .ok_or_else(|| HarnessError::Schema("p: the exact learner requires the target".into()))?;
            improper_select_exact(q, p, eps)?
        }
        Algo::Yatracos => yatracos_proper(q, &batch_for(instance, args.samples.unwrap_or(1000), args.seed)?)?,
        Algo::Static => {
            let m = args
                .samples
                .unwrap_or_else(|| uniform_convergence_budget(n, to_f64(eps), args.delta));
            static_select(q, &batch_for(instance, m, args.seed)?, eps, args.delta)?
        }
        Algo::A1 => {
            let budget = QueryBudget::new(required_budget_a1(n, eps), to_f64(&accuracy_a1(eps)), args.delta)?;
            let mut oracle = build_oracle(instance, args, budget)?;
            improper_select_a1(q, &mut oracle, eps)?
        }
        Algo::A2 => {
            let budget = QueryBudget::new(required_budget_a2(n, eps), to_f64(&accuracy_a2(n, eps)), args.delta)?;
            let mut oracle = build_oracle(instance, args, budget)?;
            improper_select_a2(q, &mut oracle, eps)?
        }
    })
}

fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// Runs a learner and scores it against the target when one is known.
pub fn run_select(instance: &Instance, args: &SelectArgs) -> Result<RunReport, HarnessError> {
    let result = select_on(instance, args)?;
    let mut record = json!({
        "algo": args.algo,
        "output": result.output.literals(),
        "certificate_y": rational_strings(result.certificate_y.entries()),
        "iterations": result.iterations,
        "queries_used": result.queries_used,
        "proper_index": result.proper_index,
        "iteration_bound": iteration_bound(instance.candidates.len(), &args.epsilon),
    });
    if let Some(p) = &instance.target {
        let score = if args.float {
            let tv = total_variation_f64(&result.output.to_f64_vec(), &p.to_f64_vec());
            let opt = instance
                .candidates
                .iter()
                .map(|q| total_variation_f64(&q.to_f64_vec(), &p.to_f64_vec()))
                .fold(f64::INFINITY, f64::min);
            json!({
                "arithmetic": "float",
                "tv": tv,
                "opt": opt,
                "factor": if opt > 0.0 { Some(tv / opt) } else { None },
                "guarantee_holds": tv <= 2.0 * opt + to_f64(&args.epsilon) + 1e-12,
            })
        } else {
            let tv = total_variation(&result.output, p)?;
            let v = distance_vector(p, &instance.candidates)?;
            let opt = v.entries().iter().min().cloned().unwrap_or_else(Rational::zero);
            json!({
                "arithmetic": "rational",
                "tv": format_rational(&tv),
                "opt": format_rational(&opt),
                "factor": if opt.is_zero() { None } else { Some(to_f64(&(&tv / &opt))) },
                "guarantee_holds": guarantee_holds(&tv, &opt, &args.epsilon),
            })
        };
        record["score"] = score;
    }
    Ok(RunReport {
        command: "select".into(),
        version: VERSION.into(),
        master_seed: args.seed,
        config: serde_json::to_value(args).expect("args serialize"),
        summary: record.clone(),
        records: vec![record],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerboundArgs {
    #[serde(with = "crate::rational::serde_rational")]
    pub beta: Rational,
    #[serde(rename = "N")]
    pub n_half: usize,
    pub m: usize,
    pub trials: usize,
    pub learners: Vec<Learner>,
    pub seed: u64,
}

impl LowerboundArgs {
    /// `beta = 1/2`, `m = 10`, `N` the smallest valid value `>= 100 m^2`,
    /// Yatracos against A1 with a fresh oracle at `eps = 1/10`.
    pub fn separation_demo(trials: usize, seed: u64) -> Result<Self, HarnessError> {
        let inst = separation_demo_instance(10)?;
        Ok(Self {
            beta: inst.beta,
            n_half: inst.n,
            m: 10,
            trials,
            learners: vec![
                Learner::Yatracos,
                Learner::A1Fresh {
                    epsilon: ratio(1, 10),
                    delta: 0.1,
                },
            ],
            seed,
        })
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "learner",
    "trial",
    "family",
    "selector_choice",
    "exact_tv_q1",
    "exact_tv_q2",
    "opt",
    "achieved_tv",
    "factor",
    "error_flag",
];

/// Trial table, one row per learner and trial.
pub fn lowerbound_csv(reports: &[ExperimentReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for report in reports {
        for r in &report.records {
            w.write_record(csv_row(report.learner.label(), r)).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn csv_row(label: &str, r: &TrialRecord) -> Vec<String> {
    vec![
        label.to_string(),
        r.trial.to_string(),
        r.family.to_string(),
        r.selector_choice.map_or(String::new(), |c| c.to_string()),
        format_rational(&r.exact_tv_q1),
        format_rational(&r.exact_tv_q2),
        format_rational(&r.opt),
        format_rational(&r.achieved_tv),
        format!("{:.6}", r.factor),
        r.error_flag.to_string(),
    ]
}

/// Runs every requested learner on the same seeded trials.
pub fn run_lowerbound(args: &LowerboundArgs) -> Result<(RunReport, Vec<ExperimentReport>), HarnessError> {
    let instance = build_instance(&args.beta, args.n_half)?;
    let mut reports = Vec::new();
    for learner in &args.learners {
        reports.push(distinguisher_experiment(&instance, learner, args.m, args.trials, args.seed)?);
    }
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "learner": r.learner.label(),
                "trials": r.trials,
                "error_rate": r.error_rate,
                "mean_factor": r.mean_factor,
                "guarantee_rate": r.guarantee_rate,
                "mean_tv_q1_by_family": r.mean_tv_q1,
                "mean_tv_q2_by_family": r.mean_tv_q2,
            })
        })
        .collect();
    let records = reports
        .iter()
        .flat_map(|r| {
            r.records.iter().map(move |t| {
                let mut v = serde_json::to_value(t).expect("records serialize");
                v["learner"] = json!(r.learner.label());
                v
            })
        })
        .collect();
    let report = RunReport {
        command: "lowerbound".into(),
        version: VERSION.into(),
        master_seed: args.seed,
        config: json!({
            "beta": format_rational(&args.beta),
            "N": args.n_half,
            "k": instance.k,
            "m": args.m,
            "trials": args.trials,
            "learners": args.learners,
            "own_base_tv": format_rational(&own_base_tv(&args.beta)),
            "other_base_tv": format_rational(&other_base_tv(&args.beta)),
            "wrong_base_factor": format_rational(&wrong_base_factor(&args.beta)),
        }),
        records,
        summary: Value::Array(summary),
    };
    Ok((report, reports))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 8] = [
    "lp-certificates",
    "qf-equals-qtv",
    "chain-rule",
    "water-fill",
    "separation-methods",
    "factor-two",
    "lowerbound-exact",
    "shatter",
];

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn random_lp<R: Rng + ?Sized>(rng: &mut R) -> LinearProgram<Rational> {
    let vars = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=3);
    let coef = |rng: &mut R| int(rng.gen_range(-3..=3));
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let objective = (0..vars).map(|_| coef(rng)).collect();
    let mut program = LinearProgram::new(sense, objective);
    for _ in 0..rows {
        let row = (0..vars).map(|_| coef(rng)).collect();
        let relation = match rng.gen_range(0..3) {
            0 => Relation::Le,
            1 => Relation::Ge,
            _ => Relation::Eq,
        };
        program.constrain(row, relation, coef(rng));
    }
    program
}

/// Runs a named suite with fixed seeds.
pub fn run_verify(suite: &str, seed: u64) -> Result<VerifyReport, HarnessError> {
    let mut t = Tally {
        checks: 0,
        failures: Vec::new(),
    };
    let mut rng = trial_rng(seed, 0);
    match suite {
        "lp-certificates" => {
            for case in 0..300 {
                let program = random_lp(&mut rng);
                let outcome = lp::solve(&program).map_err(GeometryError::from)?;
                t.check(lp::verify(&program, &outcome), || format!("case {case}: certificate rejected"));
                let float = lp::solve(&program.convert::<f64>()).map_err(GeometryError::from)?;
                t.check(float.status() == outcome.status(), || format!("case {case}: float status differs"));
            }
        }
        "qf-equals-qtv" => {
            for case in 0..60 {
                let n = rng.gen_range(2..=3);
                let d = rng.gen_range(2..=6);
                let q = random_family(n, d, 6, &mut rng);
                let h = random_distribution(n, 6, &mut rng);
                let ok = support_equivalence_check(&q, h.probs())?;
                t.check(ok, || format!("case {case}: support functions differ"));
            }
        }
        "chain-rule" => {
            for case in 0..300 {
                let d = rng.gen_range(1..=8);
                let p = random_distribution(d, 9, &mut rng);
                let q = random_distribution(d, 9, &mut rng);
                let event: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.7)).collect();
                match chain_rule_bound(&p, &q, &event) {
                    Ok(bound) => {
                        let tv = total_variation(&p, &q)?;
                        t.check(tv <= bound, || format!("case {case}: TV above the chain-rule bound"));
                    }
                    Err(LowerBoundError::ZeroProbabilityEvent) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        "water-fill" => {
            for case in 0..300 {
                let n = rng.gen_range(1..=5);
                let q = random_distribution(n, 9, &mut rng);
                let h = random_distribution(n, 9, &mut rng);
                let lambda = ratio(rng.gen_range(0..=12), 12);
                let f = water_fill(q.probs(), h.probs(), &lambda);
                let reached: Rational = f.iter().zip(h.probs()).map(|(a, b)| a * b).sum();
                let target = if lambda > Rational::one() { Rational::one() } else { lambda.clone() };
                t.check(reached == target, || format!("case {case}: weighted fill misses lambda"));
                let cost: Rational = f.iter().zip(h.probs()).zip(q.probs()).map(|((a, b), c)| a * b * c).sum();
                let mut program = LinearProgram::new(
                    Sense::Minimize,
                    h.probs().iter().zip(q.probs()).map(|(a, b)| a * b).collect(),
                );
                program.constrain(h.probs().to_vec(), Relation::Ge, lambda.clone());
                for i in 0..n {
                    program.set_bounds(i, Some(Rational::zero()), Some(Rational::one()));
                }
                match lp::solve(&program).map_err(GeometryError::from)? {
                    LpOutcome::Optimal { value, .. } => {
                        t.check(value == cost, || format!("case {case}: greedy cost differs from the LP"))
                    }
                    other => t.check(false, || format!("case {case}: LP returned {:?}", other.status())),
                }
            }
        }
        "separation-methods" => {
            for case in 0..80 {
                let n = rng.gen_range(1..=3);
                let d = rng.gen_range(2..=5);
                let q = random_family(n, d, 6, &mut rng);
                let y: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(0..=10), 10)).collect();
                let y = crate::distributions::DistanceVector::new(y);
                let a = qtv_separate_with(&q, &y, SeparationMethod::CuttingPlane)?;
                let b = qtv_separate_with(&q, &y, SeparationMethod::FarkasLp)?;
                t.check(a.is_witness() == b.is_witness(), || format!("case {case}: methods disagree"));
            }
        }
        "factor-two" => {
            for case in 0..40 {
                let n = rng.gen_range(2..=5);
                let d = rng.gen_range(2..=12);
                let q = random_family(n, d, 8, &mut rng);
                let p = random_distribution(d, 8, &mut rng);
                let eps = ratio(1, 10);
                let r = improper_select_exact(&q, &p, &eps)?;
                let tv = total_variation(&r.output, &p)?;
                let opt = distance_vector(&p, &q)?.entries().iter().min().cloned().expect("n >= 1");
                t.check(guarantee_holds(&tv, &opt, &eps), || format!("case {case}: TV above 2 opt + eps"));
                t.check(r.iterations <= iteration_bound(n, &eps), || {
                    format!("case {case}: {} iterations", r.iterations)
                });
                t.check(r.certificate_holds(&q, &eps)?, || format!("case {case}: certificate fails"));
            }
        }
        "lowerbound-exact" => {
            for (beta, n) in [(ratio(1, 2), 3), (ratio(1, 10), 11), (ratio(1, 50), 51)] {
                let inst = build_instance(&beta, n)?;
                for _ in 0..20 {
                    let family = if rng.gen_bool(0.5) { 1 } else { 2 };
                    let m = sample_member(&inst, family, &mut rng)?;
                    let (a, b) = exact_tvs(&inst, &m)?;
                    let (own, other) = if family == 1 { (a, b) } else { (b, a) };
                    t.check(own == own_base_tv(&beta), || format!("beta {beta}: own-base TV {own}"));
                    t.check(other == other_base_tv(&beta), || format!("beta {beta}: other-base TV {other}"));
                    t.check(other / own_base_tv(&beta) == wrong_base_factor(&beta), || {
                        format!("beta {beta}: factor differs")
                    });
                }
            }
        }
        "shatter" => {
            for case in 0..10 {
                let n = rng.gen_range(2..=3);
                let d = rng.gen_range(2..=8);
                let q = random_family(n, d, 6, &mut rng);
                let s = crate::yatracos::shatter_check(&q, d)?;
                t.check(s <= 10 * n, || format!("case {case}: shattered {s} points"));
                let class = ThresholdClass::new(&q)?;
                let p = random_distribution(d, 6, &mut rng);
                for qi in &q {
                    let df = class.distance(&p, qi)?;
                    t.check(df <= total_variation(&p, qi)?, || format!("case {case}: d_F above TV"));
                }
            }
        }
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    }
    Ok(VerifyReport {
        suite: suite.to_string(),
        checks: t.checks,
        failures: t.failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchArgs {
    pub n: usize,
    pub domain_size: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub epsilon: Rational,
    pub delta: f64,
    pub trials: usize,
    /// Shared sample size for the reuse and Gaussian backends.
    pub shared_m: usize,
    pub gauss_sigma: f64,
    pub seed: u64,
}

/// A1 under every backend on the same random instances.
pub fn run_bench(args: &BenchArgs) -> Result<RunReport, HarnessError> {
    let backends = [
        BackendKind::Exact,
        BackendKind::FreshSample,
        BackendKind::NaiveReuse,
        BackendKind::GaussianNoise,
    ];
    let mut summary = Vec::new();
    let mut records = Vec::new();
    for backend in backends {
        let mut holds = 0usize;
        let mut violations = 0usize;
        let mut queries = 0usize;
        let mut samples = 0usize;
        for trial in 0..args.trials {
            let mut rng = trial_rng(args.seed, trial + 2);
            let q = random_family(args.n, args.domain_size, 8, &mut rng);
            let p = random_distribution(args.domain_size, 8, &mut rng);
            let instance = Instance {
                candidates: q.clone(),
                target: Some(p.clone()),
                samples: None,
            };
            let mut sel = SelectArgs::new(Algo::A1, args.epsilon.clone());
            sel.delta = args.delta;
            sel.oracle = backend;
            sel.shared_m = Some(args.shared_m);
            sel.gauss_sigma = args.gauss_sigma;
            sel.seed = rng.gen();
            let budget = QueryBudget::new(
                required_budget_a1(args.n, &args.epsilon),
                to_f64(&accuracy_a1(&args.epsilon)),
                args.delta,
            )?;
            let mut oracle = build_oracle(&instance, &sel, budget)?;
            let outcome = improper_select_a1(&q, &mut oracle, &args.epsilon);
            samples += oracle.samples_drawn();
            let ok = match outcome {
                Ok(r) => {
                    queries += r.queries_used;
                    let tv = total_variation(&r.output, &p)?;
                    let opt = distance_vector(&p, &q)?.entries().iter().min().cloned().expect("n >= 1");
                    guarantee_holds(&tv, &opt, &args.epsilon)
                }
                Err(SelectorError::OracleAccuracyViolation { .. }) => {
                    violations += 1;
                    false
                }
                Err(e) => return Err(e.into()),
            };
            holds += ok as usize;
            records.push(json!({"backend": backend, "trial": trial, "guarantee_holds": ok}));
        }
        let denom = args.trials.max(1) as f64;
        summary.push(json!({
            "backend": backend,
            "guarantee_rate": holds as f64 / denom,
            "accuracy_violations": violations,
            "mean_queries": queries as f64 / denom,
            "mean_samples": samples as f64 / denom,
        }));
    }
    Ok(RunReport {
        command: "bench".into(),
        version: VERSION.into(),
        master_seed: args.seed,
        config: serde_json::to_value(args).expect("args serialize"),
        records,
        summary: Value::Array(summary),
    })
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// `R.csv` -> `R.json`; other names get `.json` appended.
pub fn summary_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "csv") {
        out.with_extension("json")
    } else {
        let mut s = out.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }
}
