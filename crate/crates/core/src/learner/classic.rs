use std::io::Write;

use tracing::debug;

use super::{write_record, Branch, LearnerError, LearnerResult, LearnerState, LearnerStats, StepRecord, Termination};
use crate::logic::{Hypothesis, LogicError, MetaClause, Model, VariableUniverse};
use crate::oracle::{EqAnswer, EquivalenceOracle, Label, MembershipOracle};

type Observer<'a> = Box<dyn FnMut(&[MetaClause], &StepRecord) + 'a>;

/// The classic Horn learning algorithm. Exact for Horn targets; on a
/// non-Horn target it may cycle forever, so an iteration cap is mandatory.
///
/// `H` is a set of single-literal Horn clauses, kept as metaclauses with one
/// consequent variable or `⊥`. It is rebuilt from `E⁻` after a negative
/// counterexample and only pruned after a positive one.
pub struct ClassicHorn<'a> {
    max_iterations: u64,
    log: Option<Box<dyn Write + 'a>>,
    observer: Option<Observer<'a>>,
}

impl<'a> ClassicHorn<'a> {
    pub fn new(max_iterations: u64) -> Self {
        ClassicHorn {
            max_iterations,
            log: None,
            observer: None,
        }
    }

    pub fn run_log(mut self, w: impl Write + 'a) -> Self {
        self.log = Some(Box::new(w));
        self
    }

    /// Called with `H` after every processed counterexample.
    pub fn observer(mut self, f: impl FnMut(&[MetaClause], &StepRecord) + 'a) -> Self {
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
        let mut negatives: Vec<Model> = Vec::new();
        let mut h: Vec<MetaClause> = Vec::new();
        let mut stats = LearnerStats::default();
        let mut trace = Vec::new();

        let termination = loop {
            if stats.eq_count >= self.max_iterations {
                break Termination::BudgetExhausted;
            }
            let hyp = Hypothesis::new(width, h.clone(), Vec::new())?;
            stats.eq_count += 1;
            let iteration = stats.eq_count;
            let x = match eo.equivalence(&hyp, mo)? {
                EqAnswer::Yes => {
                    let rec = record(iteration, None, Branch::Yes, &h, &negatives);
                    self.emit(&h, &rec)?;
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
            let was_empty = h.is_empty();
            let branch = if !h.iter().all(|c| c.holds(&x)) {
                stats.pos_counterexamples += 1;
                h.retain(|c| c.holds(&x));
                Branch::Positive
            } else {
                stats.neg_counterexamples += 1;
                let mut hit = None;
                for (i, e) in negatives.iter().enumerate() {
                    let y = x.meet(e);
                    if !y.is_strict_subset(e) {
                        continue;
                    }
                    stats.mq_count += 1;
                    if mo.membership(&y)? == Label::Negative {
                        hit = Some((i, y));
                        break;
                    }
                }
                let branch = match hit {
                    Some((i, y)) => {
                        stats.replacements += 1;
                        let b = Branch::Replace {
                            position: i,
                            from: negatives[i].to_bit_string(),
                            to: y.to_bit_string(),
                        };
                        negatives[i] = y;
                        b
                    }
                    None => {
                        stats.appends += 1;
                        negatives.push(x.clone());
                        Branch::Append
                    }
                };
                h = rebuild(width, &negatives);
                branch
            };
            if !was_empty && h.is_empty() {
                stats.resets += 1;
            }
            debug!(iteration, ?branch, size = h.len(), "classic step");
            let rec = record(iteration, Some(x.to_bit_string()), branch, &h, &negatives);
            self.emit(&h, &rec)?;
            trace.push(rec);
        };

        Ok(LearnerResult {
            hypothesis: Hypothesis::new(width, h, Vec::new())?,
            stats,
            termination,
            trace,
            violations: Vec::new(),
            state: LearnerState::from_examples(width, [], negatives, [])?,
        })
    }

    fn emit(&mut self, h: &[MetaClause], rec: &StepRecord) -> Result<(), LearnerError> {
        if let Some(log) = self.log.as_mut() {
            write_record(log.as_mut(), rec)?;
        }
        if let Some(f) = self.observer.as_mut() {
            f(h, rec);
        }
        Ok(())
    }
}

/// `⋃_{e∈E⁻} {⋀e→p | p∉e} ∪ {⋀e→⊥}`, without repeated clauses.
fn rebuild(width: usize, negatives: &[Model]) -> Vec<MetaClause> {
    let mut h = Vec::new();
    for e in negatives {
        let rest = e.complement();
        let clauses = rest
            .ones()
            .map(|p| MetaClause::definite(e.clone(), Model::from_indices(width, [p])).expect("same width"))
            .chain(std::iter::once(MetaClause::negative(e.clone())));
        for c in clauses {
            if !h.contains(&c) {
                h.push(c);
            }
        }
    }
    h
}

fn record(
    iteration: u64,
    counterexample: Option<String>,
    branch: Branch,
    h: &[MetaClause],
    negatives: &[Model],
) -> StepRecord {
    StepRecord {
        iteration,
        counterexample,
        branch,
        promoted: Vec::new(),
        horn_size: h.len(),
        quasi_size: 0,
        negatives: negatives.len(),
        positives: 0,
    }
}

pub fn learn_classic_horn(
    mo: &mut dyn MembershipOracle,
    eo: &mut dyn EquivalenceOracle,
    universe: &VariableUniverse,
    max_iterations: u64,
) -> Result<LearnerResult, LearnerError> {
    ClassicHorn::new(max_iterations).run(universe, mo, eo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::{ScriptStep, ScriptedOracle};
    use crate::logic::{entails, Formula};
    use crate::oracle::{ExactEquivalence, FormulaOracle};
    use crate::text::parse_formula;

    #[test]
    fn adversary_resets_hypothesis_every_three_steps() {
        let (u, phi) = parse_formula("vars: a b c d\na ->\n-> b c\n").unwrap();
        let script = ["d", "b d", "c d"]
            .iter()
            .map(|s| ScriptStep::Counterexample(u.model(s.split_whitespace()).unwrap()))
            .collect();
        let mut eq = ScriptedOracle::repeating(script).with_target(phi.clone());
        let mut mq = FormulaOracle::new(phi);
        let mut sizes = Vec::new();
        let res = ClassicHorn::new(30)
            .observer(|h, _| sizes.push(h.len()))
            .run(&u, &mut mq, &mut eq)
            .unwrap();
        assert_eq!(res.termination, Termination::BudgetExhausted);
        assert_eq!(res.stats.resets, 10);
        // {d} adds d→a, d→b, d→c, d→⊥; {b,d} leaves d→b; {c,d} empties H
        assert_eq!(&sizes[..3], [4, 1, 0]);
        assert!(sizes.chunks(3).all(|c| c == [4, 1, 0]));
        assert_eq!(eq.invalid_steps(), 0);
    }

    #[test]
    fn horn_target_is_learned_exactly() {
        let (u, phi) = parse_formula("vars: a b c d\na -> b\nb c ->\nd -> a\n").unwrap();
        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::plain(phi.clone()).unwrap();
        let res = learn_classic_horn(&mut mq, &mut eq, &u, 200).unwrap();
        assert!(res.terminated());
        let h = res.hypothesis.to_formula();
        assert!(entails(&h, &phi).unwrap() && entails(&phi, &h).unwrap());
    }

    #[test]
    fn top_target_stops_at_first_query() {
        let u = VariableUniverse::new(["a", "b"]).unwrap();
        let top = Formula::top(2);
        let mut mq = FormulaOracle::new(top.clone());
        let mut eq = ExactEquivalence::plain(top).unwrap();
        let res = learn_classic_horn(&mut mq, &mut eq, &u, 5).unwrap();
        assert!(res.terminated());
        assert!(res.hypothesis.is_empty());
        assert_eq!(res.stats.eq_count, 1);
    }
}
