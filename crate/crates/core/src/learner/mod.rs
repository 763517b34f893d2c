//! The Horn envelope learner, the classic Horn algorithm it generalizes, and
//! the bookkeeping shared by both: statistics, run logs, query bounds.

mod bounds;
mod classic;
mod envelope;
mod scripted;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Clause, Hypothesis, LogicError, MetaClause};
use crate::oracle::OracleError;

pub use bounds::{assert_bounds, check_bounds, BoundsReport};
pub use classic::{learn_classic_horn, ClassicHorn};
pub use envelope::{learn_envelope, EnvelopeLearner};
pub use scripted::{ScriptStep, ScriptedOracle};
pub use state::{InvariantKind, LearnerState, Violation};

#[derive(Debug, Error)]
pub enum LearnerError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("writing run log failed: {0}")]
    Log(std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    YesFromOracle,
    BudgetExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerStats {
    pub eq_count: u64,
    /// Membership queries issued by the learner itself (not by a sampling
    /// equivalence oracle).
    pub mq_count: u64,
    pub neg_counterexamples: u64,
    pub pos_counterexamples: u64,
    pub replacements: u64,
    pub appends: u64,
    pub promotions: u64,
    /// Times the hypothesis went from non-empty back to empty.
    pub resets: u64,
    /// `|Eⁿʰ|` at the end of the run.
    pub k_observed: u64,
}

/// What a learner did with one equivalence answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Branch {
    Yes,
    Positive,
    Replace { position: usize, from: String, to: String },
    Append,
}

/// One line of the JSON-lines run log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iteration: u64,
    /// Bit string of the counterexample; absent on "yes".
    pub counterexample: Option<String>,
    pub branch: Branch,
    /// Models moved to the non-Horn set this step.
    #[serde(default)]
    pub promoted: Vec<String>,
    pub horn_size: usize,
    pub quasi_size: usize,
    pub negatives: usize,
    pub positives: usize,
}

#[derive(Clone, Debug)]
pub struct LearnerResult {
    pub hypothesis: Hypothesis,
    pub stats: LearnerStats,
    pub termination: Termination,
    pub trace: Vec<StepRecord>,
    pub violations: Vec<Violation>,
    /// Final example sets. Empty for the classic algorithm, which keeps no
    /// positive or non-Horn examples.
    pub state: LearnerState,
}

impl LearnerResult {
    /// `H`
    pub fn horn(&self) -> &[MetaClause] {
        &self.hypothesis.horn
    }

    /// `Q`
    pub fn quasi(&self) -> &[Clause] {
        &self.hypothesis.quasi
    }

    pub fn terminated(&self) -> bool {
        self.termination == Termination::YesFromOracle
    }
}

fn write_record(log: &mut dyn std::io::Write, rec: &StepRecord) -> Result<(), LearnerError> {
    let line = serde_json::to_string(rec).expect("records serialize");
    writeln!(log, "{line}").map_err(LearnerError::Log)
}
