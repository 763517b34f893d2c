use super::{EqAnswer, EqMode, EquivalenceOracle, MembershipOracle, OracleError};
use crate::logic::{closure, BruteForce, Formula, LogicError, ModelSet, Theory};

/// Brute-force equivalence oracle for a known target.
///
/// In Horn mode it accepts a hypothesis iff the intersection closures of the
/// two model sets agree, i.e. iff their Horn envelopes are equivalent. In
/// plain mode it accepts iff the model sets are equal. Either way the
/// counterexample is the lexicographically smallest model in the symmetric
/// difference of the raw model sets.
#[derive(Clone, Debug)]
pub struct ExactEquivalence {
    target: Formula,
    models: ModelSet,
    envelope: Option<ModelSet>,
    brute: BruteForce,
    queries: u64,
}

impl ExactEquivalence {
    pub fn horn(target: Formula) -> Result<Self, LogicError> {
        Self::build(target, true, BruteForce::default())
    }

    pub fn plain(target: Formula) -> Result<Self, LogicError> {
        Self::build(target, false, BruteForce::default())
    }

    pub fn horn_with(target: Formula, brute: BruteForce) -> Result<Self, LogicError> {
        Self::build(target, true, brute)
    }

    fn build(target: Formula, horn: bool, brute: BruteForce) -> Result<Self, LogicError> {
        let models = brute.models_of(&target)?;
        let envelope = horn.then(|| closure(&models));
        Ok(ExactEquivalence {
            target,
            models,
            envelope,
            brute,
            queries: 0,
        })
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    pub fn target_models(&self) -> &ModelSet {
        &self.models
    }

    /// Answers without touching the query counter.
    pub fn check(&self, hypothesis: &dyn Theory) -> Result<EqAnswer, LogicError> {
        if hypothesis.width() != self.target.width() {
            return Err(LogicError::WidthMismatch {
                expected: self.target.width(),
                found: hypothesis.width(),
            });
        }
        let hyp_models = self.brute.models_of(hypothesis)?;
        let agree = match &self.envelope {
            Some(env) => closure(&hyp_models) == *env,
            None => hyp_models == self.models,
        };
        if agree {
            return Ok(EqAnswer::Yes);
        }
        let x = self
            .models
            .symmetric_difference(&hyp_models)
            .next()
            .cloned()
            .expect("different closures imply different model sets");
        debug_assert_ne!(hypothesis.holds(&x), self.target.holds(&x));
        Ok(EqAnswer::No(x))
    }
}

impl EquivalenceOracle for ExactEquivalence {
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        _membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError> {
        self.queries += 1;
        Ok(self.check(hypothesis)?)
    }

    fn mode(&self) -> EqMode {
        EqMode::Exact
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// One-shot Horn equivalence check of `hypothesis` against `target`.
pub fn exact_horn_equivalence(target: &Formula, hypothesis: &dyn Theory) -> Result<EqAnswer, LogicError> {
    ExactEquivalence::horn(target.clone())?.check(hypothesis)
}
