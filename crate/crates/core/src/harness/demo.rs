use std::fmt;

use serde::Serialize;

use super::HarnessError;
use crate::learner::{
    check_bounds, BoundsReport, ClassicHorn, EnvelopeLearner, ScriptStep, ScriptedOracle, StepRecord, Termination,
};
use crate::logic::{closure, models_of, BruteForce, MetaClause, VariableUniverse};
use crate::oracle::{ExactEquivalence, FormulaOracle};
use crate::text::{parse_formula, parse_formula_in};

const TARGET: &str = include_str!("../../data/cycle_target.cnf");

/// What the classic learner did against the cycling adversary.
#[derive(Clone, Debug, Serialize)]
pub struct NonTermination {
    pub cap: u64,
    pub termination: Termination,
    pub resets: u64,
    /// `|H|` after each counterexample.
    pub sizes: Vec<usize>,
    pub steps: Vec<StepRecord>,
    /// Steps the adversary took that were not genuine counterexamples.
    pub invalid_steps: u64,
    /// The envelope learner on the same target with an exact oracle.
    pub envelope: EnvelopeRun,
    #[serde(skip)]
    universe: VariableUniverse,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeRun {
    pub termination: Termination,
    pub eq_count: u64,
    pub mq_count: u64,
    pub rules: Vec<String>,
    /// `H` has exactly the models of `a -> F`.
    pub matches_a_false: bool,
    pub bounds: BoundsReport,
}

impl NonTermination {
    /// The hypothesis size pattern repeats with period 3 as `[4, 1, 0]`.
    pub fn is_periodic(&self) -> bool {
        self.sizes.chunks(3).all(|c| c == &[4, 1, 0][..c.len()])
    }
}

impl fmt::Display for NonTermination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target: a -> F ; -> b | c   over {:?}", self.universe.names())?;
        for (s, size) in self.steps.iter().zip(&self.sizes) {
            let x = s
                .counterexample
                .as_deref()
                .map(|b| {
                    let names: Vec<&str> = b
                        .chars()
                        .zip(self.universe.names())
                        .filter(|(c, _)| *c == '1')
                        .map(|(_, n)| n.as_str())
                        .collect();
                    format!("{{{}}}", names.join(","))
                })
                .unwrap_or_default();
            writeln!(f, "{:>4}  x={:<8} |E-|={}  |H|={}", s.iteration, x, s.negatives, size)?;
        }
        writeln!(
            f,
            "stopped after {} queries ({:?}); H emptied {} times",
            self.steps.len(),
            self.termination,
            self.resets
        )?;
        let e = &self.envelope;
        writeln!(
            f,
            "envelope learner: {:?} after {} EQs, {} MQs; H = {{{}}}; H == {{a -> F}}: {}; bounds ok: {}",
            e.termination,
            e.eq_count,
            e.mq_count,
            e.rules.join("; "),
            e.matches_a_false,
            e.bounds.ok()
        )
    }
}

/// Runs the classic Horn learner on `a -> F, -> b | c` while the adversary
/// cycles `{d}, {b,d}, {c,d}` for `cap` equivalence queries.
pub fn demo_nontermination(cap: u64) -> Result<NonTermination, HarnessError> {
    let (universe, phi) = parse_formula(TARGET)?;
    let script = [&["d"][..], &["b", "d"], &["c", "d"]]
        .iter()
        .map(|names| universe.model(names.iter().copied()).map(ScriptStep::Counterexample))
        .collect::<Result<Vec<_>, _>>()?;
    let mut eq = ScriptedOracle::repeating(script).with_target(phi.clone());
    let mut mq = FormulaOracle::new(phi);
    let mut sizes = Vec::new();
    let res = ClassicHorn::new(cap)
        .observer(|h, _| sizes.push(h.len()))
        .run(&universe, &mut mq, &mut eq)?;
    let envelope = envelope_run(&universe)?;
    Ok(NonTermination {
        cap,
        termination: res.termination,
        resets: res.stats.resets,
        sizes,
        steps: res.trace,
        invalid_steps: eq.invalid_steps(),
        envelope,
        universe,
    })
}

fn envelope_run(universe: &VariableUniverse) -> Result<EnvelopeRun, HarnessError> {
    let phi = parse_formula_in(TARGET, universe)?;
    let mut mq = FormulaOracle::new(phi.clone());
    let mut eq = ExactEquivalence::horn(phi.clone())?;
    let res = EnvelopeLearner::new()
        .check_invariants(true)
        .run(universe, &mut mq, &mut eq)?;
    let models = models_of(&phi)?;
    let env = closure(&models);
    let k = env.len() - models.len();
    let a_false = parse_formula_in("a ->", universe)?;
    let horn: Vec<MetaClause> = res.horn().to_vec();
    Ok(EnvelopeRun {
        termination: res.termination,
        eq_count: res.stats.eq_count,
        mq_count: res.stats.mq_count,
        rules: horn.iter().map(|m| super::render_rule(m, universe)).collect(),
        matches_a_false: BruteForce::default().equivalent(&res.hypothesis.horn_part(), &a_false)?,
        bounds: check_bounds(&res, horn.len(), k, universe.len()),
    })
}
