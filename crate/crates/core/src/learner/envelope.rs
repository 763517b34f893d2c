use std::io::Write;

use tracing::debug;

use super::{
    write_record, Branch, InvariantKind, LearnerError, LearnerResult, LearnerState, LearnerStats, StepRecord,
    Termination, Violation,
};
use crate::logic::{LogicError, Theory, VariableUniverse};
use crate::oracle::{EqAnswer, EquivalenceOracle, Label, MembershipOracle};

type Observer<'a> = Box<dyn FnMut(&LearnerState, &StepRecord) + 'a>;

/// Configurable runner for the Horn envelope learner.
///
/// ```
/// use horn_envelope::learner::EnvelopeLearner;
/// use horn_envelope::oracle::{ExactEquivalence, FormulaOracle};
/// use horn_envelope::text::parse_formula;
///
/// let (u, phi) = parse_formula("vars: a b c d\na ->\n-> b c\n").unwrap();
/// let mut mq = FormulaOracle::new(phi.clone());
/// let mut eq = ExactEquivalence::horn(phi).unwrap();
/// let res = EnvelopeLearner::new().run(&u, &mut mq, &mut eq).unwrap();
/// assert!(res.terminated());
/// assert_eq!(res.horn().len(), 1);
/// ```
pub struct EnvelopeLearner<'a> {
    budget: Option<u64>,
    check_invariants: bool,
    log: Option<Box<dyn Write + 'a>>,
    observer: Option<Observer<'a>>,
}

impl Default for EnvelopeLearner<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a> EnvelopeLearner<'a> {
    /// Unbudgeted; invariants are checked in debug builds.
    pub fn new() -> Self {
        EnvelopeLearner {
            budget: None,
            check_invariants: cfg!(debug_assertions),
            log: None,
            observer: None,
        }
    }

    /// Stop after this many equivalence queries.
    pub fn budget(mut self, max_eq: u64) -> Self {
        self.budget = Some(max_eq);
        self
    }

    pub fn maybe_budget(mut self, max_eq: Option<u64>) -> Self {
        self.budget = max_eq;
        self
    }

    pub fn check_invariants(mut self, on: bool) -> Self {
        self.check_invariants = on;
        self
    }

    /// Write one JSON record per equivalence query.
    pub fn run_log(mut self, w: impl Write + 'a) -> Self {
        self.log = Some(Box::new(w));
        self
    }

    /// Called with the state after every processed counterexample.
    pub fn observer(mut self, f: impl FnMut(&LearnerState, &StepRecord) + 'a) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    pub fn run(
        &mut self,
        universe: &VariableUniverse,
        mo: &mut dyn MembershipOracle,
        eo: &mut dyn EquivalenceOracle,
    ) -> Result<LearnerResult, LearnerError> {
        let width = universe.len();
        if mo.width() != width {
            return Err(LogicError::WidthMismatch {
                expected: width,
                found: mo.width(),
            }
            .into());
        }
        let mut state = LearnerState::new(width);
        let mut stats = LearnerStats::default();
        let mut trace = Vec::new();
        let mut violations = Vec::new();

        let termination = loop {
            if self.budget.is_some_and(|b| stats.eq_count >= b) {
                break Termination::BudgetExhausted;
            }
            let hyp = state.hypothesis();
            stats.eq_count += 1;
            let iteration = stats.eq_count;
            let x = match eo.equivalence(&hyp, mo)? {
                EqAnswer::Yes => {
                    let rec = record(iteration, None, Branch::Yes, Vec::new(), &state);
                    self.emit(&state, &rec)?;
                    trace.push(rec);
                    break Termination::YesFromOracle;
                }
                EqAnswer::No(x) => x,
            };
            if x.width() != width {
                return Err(LogicError::WidthMismatch {
                    expected: width,
                    found: x.width(),
                }
                .into());
            }

            let branch = if !hyp.holds(&x) {
                stats.pos_counterexamples += 1;
                state.add_positive(x.clone());
                Branch::Positive
            } else {
                stats.neg_counterexamples += 1;
                let mut hit = None;
                for (i, e) in state.negatives().iter().enumerate() {
                    let y = x.meet(e);
                    // evaluating the hypothesis first saves a query
                    if !hyp.holds(&y) {
                        continue;
                    }
                    stats.mq_count += 1;
                    if mo.membership(&y)? == Label::Negative {
                        hit = Some((i, y));
                        break;
                    }
                }
                match hit {
                    Some((i, y)) => {
                        let from = state.negatives()[i].clone();
                        if self.check_invariants && y.len() >= from.len() {
                            violations.push(Violation {
                                iteration,
                                kind: InvariantKind::ReplacementNotShrinking,
                                detail: format!("{from:?} -> {y:?}"),
                            });
                        }
                        stats.replacements += 1;
                        let branch = Branch::Replace {
                            position: i,
                            from: from.to_bit_string(),
                            to: y.to_bit_string(),
                        };
                        state.negatives_mut()[i] = y;
                        branch
                    }
                    None => {
                        stats.appends += 1;
                        state.negatives_mut().push(x.clone());
                        Branch::Append
                    }
                }
            };

            let promoted = state.promote_non_horn();
            stats.promotions += promoted.len() as u64;
            let was_empty = hyp.is_empty();
            state.rebuild_hypothesis();
            if !was_empty && state.horn().is_empty() && state.quasi().is_empty() {
                stats.resets += 1;
            }
            debug!(iteration, ?branch, promoted = promoted.len(), "envelope learner step");

            let promoted = promoted.iter().map(|m| m.to_bit_string()).collect();
            let rec = record(iteration, Some(x.to_bit_string()), branch, promoted, &state);
            if self.check_invariants {
                violations.extend(state.check_invariants(iteration));
            }
            self.emit(&state, &rec)?;
            trace.push(rec);
        };

        stats.k_observed = state.non_horn().len() as u64;
        Ok(LearnerResult {
            hypothesis: state.hypothesis(),
            stats,
            termination,
            trace,
            violations,
            state,
        })
    }

    fn emit(&mut self, state: &LearnerState, rec: &StepRecord) -> Result<(), LearnerError> {
        if let Some(log) = self.log.as_mut() {
            write_record(log.as_mut(), rec)?;
        }
        if let Some(f) = self.observer.as_mut() {
            f(state, rec);
        }
        Ok(())
    }
}

fn record(
    iteration: u64,
    counterexample: Option<String>,
    branch: Branch,
    promoted: Vec<String>,
    state: &LearnerState,
) -> StepRecord {
    StepRecord {
        iteration,
        counterexample,
        branch,
        promoted,
        horn_size: state.horn().len(),
        quasi_size: state.quasi().len(),
        negatives: state.negatives().len(),
        positives: state.positives().len(),
    }
}

/// Runs the envelope learner with default settings and an optional cap on
/// equivalence queries.
pub fn learn_envelope(
    mo: &mut dyn MembershipOracle,
    eo: &mut dyn EquivalenceOracle,
    universe: &VariableUniverse,
    budget: Option<u64>,
) -> Result<LearnerResult, LearnerError> {
    EnvelopeLearner::new().maybe_budget(budget).run(universe, mo, eo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::{ScriptStep, ScriptedOracle};
    use crate::logic::{Consequent, MetaClause, Model};
    use crate::oracle::{ExactEquivalence, FormulaOracle};
    use crate::text::parse_formula;

    #[test]
    fn single_negative_clause() {
        let (u, phi) = parse_formula("vars: a b c\na ->\n").unwrap();
        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::horn(phi).unwrap();
        let res = learn_envelope(&mut mq, &mut eq, &u, None).unwrap();
        assert!(res.terminated());
        assert_eq!(res.horn(), [MetaClause::negative(u.model(["a"]).unwrap())]);
        assert!(res.quasi().is_empty());
        assert_eq!(res.stats.k_observed, 0);
        assert!(res.violations.is_empty());
    }

    #[test]
    fn cycle_target_hand_trace() {
        let (u, phi) = parse_formula("vars: a b c d\na ->\n-> b c\n").unwrap();
        let d = u.model(["d"]).unwrap();
        let script = vec![
            ScriptStep::Counterexample(d.clone()),
            ScriptStep::Counterexample(u.model(["b", "d"]).unwrap()),
            ScriptStep::Counterexample(u.model(["c", "d"]).unwrap()),
        ];
        let mut eq = ScriptedOracle::new(script).with_target(phi.clone());
        let mut mq = FormulaOracle::new(phi);
        let mut sizes = Vec::new();
        let res = EnvelopeLearner::new()
            .budget(3)
            .check_invariants(true)
            .observer(|s, _| sizes.push((s.horn().to_vec(), s.quasi().len())))
            .run(&u, &mut mq, &mut eq)
            .unwrap();
        assert_eq!(sizes[0].0, [MetaClause::negative(d.clone())]);
        assert_eq!(
            sizes[1].0[0].consequent(),
            &Consequent::Conjunction(u.model(["b"]).unwrap())
        );
        assert!(sizes[2].0.is_empty());
        assert_eq!(sizes[2].1, 1);
        assert_eq!(res.quasi()[0].antecedent(), &d);
        assert_eq!(res.quasi()[0].consequent(), &u.model(["a", "b", "c"]).unwrap());
        assert_eq!(res.stats.promotions, 1);
        assert_eq!(res.termination, Termination::BudgetExhausted);
        assert_eq!(eq.invalid_steps(), 0);
        assert!(res.violations.is_empty());
    }

    #[test]
    fn yes_first_gives_empty_hypothesis() {
        let u = VariableUniverse::new(["a", "b"]).unwrap();
        let mut eq = ScriptedOracle::new(vec![ScriptStep::Yes]);
        let mut mq = FormulaOracle::new(crate::logic::Formula::top(2));
        let res = learn_envelope(&mut mq, &mut eq, &u, None).unwrap();
        assert!(res.terminated());
        assert!(res.hypothesis.is_empty());
        assert_eq!(res.stats.eq_count, 1);
    }

    #[test]
    fn zero_budget_asks_nothing() {
        let (u, phi) = parse_formula("vars: a b\na ->\n").unwrap();
        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::horn(phi).unwrap();
        let res = learn_envelope(&mut mq, &mut eq, &u, Some(0)).unwrap();
        assert_eq!(res.termination, Termination::BudgetExhausted);
        assert_eq!(res.stats.eq_count, 0);
        assert!(res.hypothesis.is_empty());
    }

    #[test]
    fn run_log_has_one_line_per_query() {
        let (u, phi) = parse_formula("vars: a b c d\na ->\n-> b c\n").unwrap();
        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::horn(phi).unwrap();
        let mut buf = Vec::new();
        let res = EnvelopeLearner::new()
            .run_log(&mut buf)
            .run(&u, &mut mq, &mut eq)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let recs: Vec<StepRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(recs, res.trace);
        assert_eq!(recs.len() as u64, res.stats.eq_count);
        assert_eq!(recs.last().unwrap().branch, Branch::Yes);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let u = VariableUniverse::new(["a"]).unwrap();
        let mut mq = FormulaOracle::new(crate::logic::Formula::top(2));
        let mut eq = ScriptedOracle::new(vec![ScriptStep::Yes]);
        assert!(learn_envelope(&mut mq, &mut eq, &u, None).is_err());
        let mut mq = FormulaOracle::new(crate::logic::Formula::top(1));
        let mut eq = ScriptedOracle::new(vec![ScriptStep::Counterexample(Model::empty(3))]);
        assert!(learn_envelope(&mut mq, &mut eq, &u, None).is_err());
    }
}
