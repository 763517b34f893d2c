use tracing::warn;

use crate::logic::{Formula, Model, Theory};
use crate::oracle::{EqAnswer, EqMode, EquivalenceOracle, MembershipOracle, OracleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptStep {
    Yes,
    Counterexample(Model),
}

/// An equivalence oracle that replays a fixed answer sequence whatever the
/// hypothesis, the adversary used to show the classic algorithm can cycle.
///
/// With a target attached, each counterexample is checked against the
/// current hypothesis; invalid ones are logged and counted but still
/// returned.
#[derive(Clone, Debug)]
pub struct ScriptedOracle {
    steps: Vec<ScriptStep>,
    repeat: bool,
    next: usize,
    queries: u64,
    target: Option<Formula>,
    invalid: u64,
}

impl ScriptedOracle {
    /// Plays the sequence once, then fails with `ScriptExhausted`.
    pub fn new(steps: Vec<ScriptStep>) -> Self {
        ScriptedOracle {
            steps,
            repeat: false,
            next: 0,
            queries: 0,
            target: None,
            invalid: 0,
        }
    }

    /// Plays the sequence over and over.
    pub fn repeating(steps: Vec<ScriptStep>) -> Self {
        ScriptedOracle {
            repeat: true,
            ..Self::new(steps)
        }
    }

    pub fn with_target(mut self, target: Formula) -> Self {
        self.target = Some(target);
        self
    }

    /// Counterexamples the hypothesis and target actually agreed on.
    pub fn invalid_steps(&self) -> u64 {
        self.invalid
    }
}

impl EquivalenceOracle for ScriptedOracle {
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        _membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError> {
        if self.next >= self.steps.len() {
            if !self.repeat || self.steps.is_empty() {
                return Err(OracleError::ScriptExhausted(self.queries));
            }
            self.next = 0;
        }
        let step = self.steps[self.next].clone();
        self.next += 1;
        self.queries += 1;
        match step {
            ScriptStep::Yes => Ok(EqAnswer::Yes),
            ScriptStep::Counterexample(x) => {
                if let Some(t) = &self.target {
                    if x.width() == t.width() && hypothesis.holds(&x) == t.holds(&x) {
                        self.invalid += 1;
                        warn!(query = self.queries, model = ?x, "scripted counterexample does not separate hypothesis and target");
                    }
                }
                Ok(EqAnswer::No(x))
            }
        }
    }

    fn mode(&self) -> EqMode {
        EqMode::Scripted
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Hypothesis;
    use crate::oracle::FormulaOracle;
    use crate::text::parse_formula;

    #[test]
    fn finite_script_runs_out() {
        let mut o = ScriptedOracle::new(vec![ScriptStep::Counterexample(Model::empty(2))]);
        let mut mq = FormulaOracle::new(Formula::top(2));
        let h = Hypothesis::empty(2);
        assert!(o.equivalence(&h, &mut mq).is_ok());
        assert!(matches!(
            o.equivalence(&h, &mut mq),
            Err(OracleError::ScriptExhausted(1))
        ));
    }

    #[test]
    fn repeating_script_cycles() {
        let a = Model::from_indices(2, [0]);
        let mut o = ScriptedOracle::repeating(vec![ScriptStep::Counterexample(a.clone()), ScriptStep::Yes]);
        let mut mq = FormulaOracle::new(Formula::top(2));
        let h = Hypothesis::empty(2);
        let answers: Vec<_> = (0..4).map(|_| o.equivalence(&h, &mut mq).unwrap()).collect();
        assert_eq!(answers[0], EqAnswer::No(a.clone()));
        assert_eq!(answers[1], EqAnswer::Yes);
        assert_eq!(answers[2], EqAnswer::No(a));
        assert_eq!(o.queries(), 4);
    }

    #[test]
    fn invalid_counterexample_is_counted_but_returned() {
        let (_, phi) = parse_formula("vars: a b\na ->\n").unwrap();
        // {b} satisfies both ⊤ and the target
        let b = Model::from_indices(2, [1]);
        let mut o = ScriptedOracle::new(vec![ScriptStep::Counterexample(b.clone())]).with_target(phi);
        let mut mq = FormulaOracle::new(Formula::top(2));
        assert_eq!(o.equivalence(&Hypothesis::empty(2), &mut mq).unwrap(), EqAnswer::No(b));
        assert_eq!(o.invalid_steps(), 1);
    }
}
