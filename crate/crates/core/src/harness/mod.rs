//! Experiment plumbing: attribute schemas, repeated learner runs with rule
//! counting, and the classic-learner non-termination demo.

mod demo;
mod experiment;
mod schema;

pub use demo::{demo_nontermination, NonTermination};
pub use experiment::{
    learn_once, run_experiment, EqStrategy, ExperimentConfig, LearnOutcome, LearnSpec, OracleSource, RuleCount,
    RuleReport, RunSummary,
};
pub use schema::{render_rule, schema_to_universe, Attribute, AttributeSchema};

use crate::learner::LearnerError;
use crate::logic::LogicError;
use crate::oracle::OracleError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
