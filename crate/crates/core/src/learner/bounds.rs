use serde::Serialize;

use super::LearnerResult;

/// Query counts of a run against the limits implied by the envelope size
/// and the number of non-Horn negatives `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    /// `(|V|+1)(env+k)`, the limit for both kinds of counterexample.
    pub counterexample_limit: u64,
    /// `(env+k)·(|V|+1)(env+k)`
    pub mq_limit: u64,
    pub neg_ok: bool,
    pub pos_ok: bool,
    pub mq_ok: bool,
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.neg_ok && self.pos_ok && self.mq_ok
    }
}

pub fn check_bounds(result: &LearnerResult, env_size: usize, k: usize, width: usize) -> BoundsReport {
    let examples = (env_size + k) as u64;
    let counterexample_limit = (width as u64 + 1) * examples;
    let mq_limit = examples * counterexample_limit;
    let s = &result.stats;
    BoundsReport {
        counterexample_limit,
        mq_limit,
        neg_ok: s.neg_counterexamples <= counterexample_limit,
        pos_ok: s.pos_counterexamples <= counterexample_limit,
        mq_ok: s.mq_count <= mq_limit,
    }
}

/// True iff every count is within its limit.
pub fn assert_bounds(result: &LearnerResult, env_size: usize, k: usize, width: usize) -> bool {
    check_bounds(result, env_size, k, width).ok()
}
