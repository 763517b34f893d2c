use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tracing::{info, warn};

use super::{render_rule, AttributeSchema, HarnessError};
use crate::learner::{EnvelopeLearner, LearnerResult, StepRecord, Termination};
use crate::logic::{Formula, Theory, VariableUniverse, DEFAULT_BRUTE_FORCE_CAP};
use crate::oracle::{
    Endpoint, EquivalenceOracle, ExactEquivalence, FormulaOracle, MembershipOracle, SampleSpace, SampledEquivalence,
    SamplerConfig, Session, WireOracle,
};

/// Where membership answers come from.
#[derive(Clone, Debug)]
pub enum OracleSource {
    /// A formula over the schema's universe, evaluated in process.
    Formula(Formula),
    /// An external oracle speaking the wire protocol.
    Endpoint(Endpoint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqStrategy {
    Exact,
    Sampled,
}

impl FromStr for EqStrategy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(EqStrategy::Exact),
            "sampled" => Ok(EqStrategy::Sampled),
            _ => Err(HarnessError::Config(format!("unknown equivalence mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub schema: AttributeSchema,
    pub oracle: OracleSource,
    pub eq_mode: EqStrategy,
    pub eq_budget: u64,
    pub batch_size: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Confirm a clean sampled batch with the exact oracle (formula sources
    /// only).
    pub final_exact_check: bool,
    /// Rules seen in at least this many runs are reported as relevant.
    pub threshold: usize,
    /// Worker threads; `None` uses rayon's default.
    pub parallelism: Option<usize>,
}

impl ExperimentConfig {
    /// Sampled mode, budget 100, batch 640, 10 iterations, threshold 7.
    pub fn new(schema: AttributeSchema, oracle: OracleSource) -> Self {
        ExperimentConfig {
            schema,
            oracle,
            eq_mode: EqStrategy::Sampled,
            eq_budget: 100,
            batch_size: 640,
            iterations: 10,
            seed: 0,
            final_exact_check: false,
            threshold: 7,
            parallelism: None,
        }
    }

    pub fn validate(&self) -> Result<VariableUniverse, HarnessError> {
        let u = self.schema.universe()?;
        let needs_formula = self.eq_mode == EqStrategy::Exact || self.final_exact_check;
        match &self.oracle {
            OracleSource::Formula(f) if f.width() != u.len() => {
                return Err(HarnessError::Config(format!(
                    "target has {} variables, schema {}",
                    f.width(),
                    u.len()
                )))
            }
            OracleSource::Endpoint(_) if needs_formula => {
                return Err(HarnessError::Config(
                    "exact equivalence needs a target formula, not an external oracle".into(),
                ))
            }
            _ => {}
        }
        if needs_formula && u.len() > DEFAULT_BRUTE_FORCE_CAP {
            return Err(HarnessError::Config(format!(
                "exact equivalence over {} variables exceeds the brute-force cap of {DEFAULT_BRUTE_FORCE_CAP}",
                u.len()
            )));
        }
        if self.eq_mode == EqStrategy::Sampled && self.batch_size == 0 {
            return Err(HarnessError::Config(
                "sampled mode needs a batch size of at least 1".into(),
            ));
        }
        if self.iterations == 0 {
            return Err(HarnessError::Config("at least one iteration is required".into()));
        }
        Ok(u)
    }
}

/// Outcome of one learner run within an experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub iteration: usize,
    pub seed: u64,
    pub termination: Option<Termination>,
    pub eq_count: u64,
    pub mq_count: u64,
    /// Membership answers requested from the oracle, including the sampler's.
    pub oracle_calls: u64,
    pub rules: Vec<String>,
    /// Set when the run aborted on an oracle failure.
    pub error: Option<String>,
    #[serde(skip)]
    pub log: Vec<StepRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCount {
    pub rule: String,
    pub count: usize,
}

/// How often each rule was extracted across the runs of an experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub iterations: usize,
    pub threshold: usize,
    /// Sorted by count (descending), then rule text.
    pub rules: Vec<RuleCount>,
    pub runs: Vec<RunSummary>,
}

impl RuleReport {
    pub fn from_runs(runs: Vec<RunSummary>, threshold: usize) -> Self {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for r in &runs {
            for rule in &r.rules {
                *counts.entry(rule).or_default() += 1;
            }
        }
        let mut rules: Vec<RuleCount> = counts
            .into_iter()
            .map(|(rule, count)| RuleCount {
                rule: rule.to_string(),
                count,
            })
            .collect();
        rules.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.rule.cmp(&b.rule)));
        RuleReport {
            iterations: runs.len(),
            threshold,
            rules,
            runs,
        }
    }

    pub fn count_of(&self, rule: &str) -> usize {
        self.rules.iter().find(|r| r.rule == rule).map_or(0, |r| r.count)
    }

    /// Rules extracted in at least `threshold` runs.
    pub fn relevant(&self) -> impl Iterator<Item = &RuleCount> + '_ {
        self.rules.iter().filter(move |r| r.count >= self.threshold)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.rules.iter().map(|r| r.rule.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(out, "{:>5}  {:<width$}", "count", "rule");
        for r in &self.rules {
            let mark = if r.count >= self.threshold { "*" } else { " " };
            let _ = writeln!(out, "{:>2}/{:<2}{mark} {:<width$}", r.count, self.iterations, r.rule);
        }
        let failed = self.runs.iter().filter(|r| r.error.is_some()).count();
        let _ = writeln!(
            out,
            "{} rules, {} with count >= {}; {} of {} runs failed",
            self.rules.len(),
            self.relevant().count(),
            self.threshold,
            failed,
            self.iterations
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn membership_oracle(
    source: &OracleSource,
    universe: &VariableUniverse,
) -> Result<Box<dyn MembershipOracle>, HarnessError> {
    Ok(match source {
        OracleSource::Formula(f) => Box::new(FormulaOracle::new(f.clone())),
        OracleSource::Endpoint(e) => Box::new(WireOracle::connect(e, universe.names())?),
    })
}

/// Everything needed for one learner run.
pub struct LearnSpec<'a> {
    pub universe: &'a VariableUniverse,
    pub oracle: &'a OracleSource,
    pub eq_mode: EqStrategy,
    /// `None` runs until the equivalence oracle says yes.
    pub eq_budget: Option<u64>,
    pub batch_size: usize,
    pub seed: u64,
    pub space: SampleSpace,
    pub final_exact_check: bool,
    pub check_invariants: bool,
}

/// A finished run plus the number of answers fetched from the oracle.
pub struct LearnOutcome {
    pub result: LearnerResult,
    pub oracle_calls: u64,
}

/// Runs the envelope learner once, writing NDJSON step records to `log`.
pub fn learn_once(spec: &LearnSpec<'_>, log: Option<&mut dyn Write>) -> Result<LearnOutcome, HarnessError> {
    let mut mo = Session::new(membership_oracle(spec.oracle, spec.universe)?);
    let exact = || match spec.oracle {
        OracleSource::Formula(f) => Ok(ExactEquivalence::horn(f.clone())?),
        OracleSource::Endpoint(_) => Err(HarnessError::Config("exact equivalence needs a target formula".into())),
    };
    let mut eo: Box<dyn EquivalenceOracle> = match spec.eq_mode {
        EqStrategy::Exact => Box::new(exact()?),
        EqStrategy::Sampled => {
            let sampler = SamplerConfig {
                batch_size: spec.batch_size,
                seed: spec.seed,
                space: spec.space.clone(),
            };
            let mut s = SampledEquivalence::new(sampler, spec.universe.len())?;
            if spec.final_exact_check {
                s = s.with_final_exact_check(exact()?);
            }
            Box::new(s)
        }
    };
    let mut learner = EnvelopeLearner::new()
        .maybe_budget(spec.eq_budget)
        .check_invariants(spec.check_invariants);
    if let Some(w) = log {
        learner = learner.run_log(w);
    }
    let result = learner.run(spec.universe, &mut mo, eo.as_mut())?;
    Ok(LearnOutcome {
        result,
        oracle_calls: mo.stats().calls,
    })
}

fn run_once(cfg: &ExperimentConfig, universe: &VariableUniverse, iteration: usize) -> RunSummary {
    let seed = cfg.seed.wrapping_add(iteration as u64);
    let mut summary = RunSummary {
        iteration,
        seed,
        termination: None,
        eq_count: 0,
        mq_count: 0,
        oracle_calls: 0,
        rules: Vec::new(),
        error: None,
        log: Vec::new(),
    };
    let spec = LearnSpec {
        universe,
        oracle: &cfg.oracle,
        eq_mode: cfg.eq_mode,
        eq_budget: Some(cfg.eq_budget),
        batch_size: cfg.batch_size,
        seed,
        space: cfg.schema.sample_space(),
        final_exact_check: cfg.final_exact_check,
        check_invariants: false,
    };
    match learn_once(&spec, None) {
        Ok(LearnOutcome { result, oracle_calls }) => {
            let rules: BTreeSet<String> = result.horn().iter().map(|m| render_rule(m, universe)).collect();
            summary.termination = Some(result.termination);
            summary.eq_count = result.stats.eq_count;
            summary.mq_count = result.stats.mq_count;
            summary.oracle_calls = oracle_calls;
            summary.rules = rules.into_iter().collect();
            summary.log = result.trace;
        }
        Err(e) => {
            warn!(iteration, error = %e, "experiment run failed");
            summary.error = Some(e.to_string());
        }
    }
    summary
}

/// Runs `iterations` independent learners with seeds `seed + i` and counts
/// how often each rule was extracted. A failing run is recorded in its
/// summary and does not stop the others.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RuleReport, HarnessError> {
    let universe = cfg.validate()?;
    let task = || -> Vec<RunSummary> {
        (0..cfg.iterations)
            .into_par_iter()
            .map(|i| run_once(cfg, &universe, i))
            .collect()
    };
    let runs = match cfg.parallelism {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(task),
        None => task(),
    };
    info!(iterations = runs.len(), "experiment finished");
    Ok(RuleReport::from_runs(runs, cfg.threshold))
}
