mod common;

use std::collections::BTreeSet;

use common::*;
use horn_envelope::learner::{learn_classic_horn, Branch, EnvelopeLearner, StepRecord};
use horn_envelope::logic::{Model, VariableUniverse};
use horn_envelope::oracle::{ExactEquivalence, FormulaOracle};

fn universe(n: usize) -> VariableUniverse {
    VariableUniverse::new((0..n).map(|i| format!("v{i}"))).unwrap()
}

fn bits(s: &str) -> u64 {
    mask(&Model::parse_bits(s).unwrap())
}

#[test]
fn classic_and_envelope_agree_on_horn_targets() {
    for seed in 0..60 {
        let n = 3 + (seed as usize % 8);
        let cnf = random_cnf(seed, n, true);
        let phi = cnf.to_formula();
        let want = set_of(cnf.models());

        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::plain(phi.clone()).unwrap();
        let classic = learn_classic_horn(&mut mq, &mut eq, &universe(n), 10_000).unwrap();
        assert!(classic.terminated(), "seed {seed}");
        assert_eq!(metaclause_models(n, classic.horn()), want, "classic, seed {seed}");

        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::horn(phi).unwrap();
        let env = EnvelopeLearner::new()
            .check_invariants(true)
            .run(&universe(n), &mut mq, &mut eq)
            .unwrap();
        assert!(env.terminated());
        assert_eq!(metaclause_models(n, env.horn()), want, "envelope, seed {seed}");
        assert!(env.quasi().is_empty() && env.state.non_horn().is_empty());
    }
}

fn logged_run(cnf: &Cnf) -> (Vec<StepRecord>, horn_envelope::learner::LearnerResult) {
    let phi = cnf.to_formula();
    let mut mq = FormulaOracle::new(phi.clone());
    let mut eq = ExactEquivalence::horn(phi).unwrap();
    let mut log = Vec::new();
    let res = EnvelopeLearner::new()
        .check_invariants(true)
        .run_log(&mut log)
        .run(&universe(cnf.n), &mut mq, &mut eq)
        .unwrap();
    let records = String::from_utf8(log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (records, res)
}

#[test]
fn replayed_logs_never_promote_a_model_twice_and_replacements_shrink() {
    for seed in 0..150 {
        let cnf = random_cnf(seed, 4 + (seed as usize % 5), false);
        let (records, res) = logged_run(&cnf);
        assert_eq!(records, res.trace);
        let mut promoted = BTreeSet::new();
        for r in &records {
            for p in &r.promoted {
                assert!(promoted.insert(p.clone()), "seed {seed}: {p} promoted twice");
            }
            if let Branch::Replace { from, to, .. } = &r.branch {
                let (f, t) = (bits(from), bits(to));
                assert!(t & !f == 0 && t != f, "seed {seed}: {from} -> {to} does not shrink");
            }
        }
    }
}

/// How often the same model is appended to `E⁻` more than once in a run.
/// Appends can repeat when the earlier copy was removed by promotion or
/// replaced in place, so this is measured rather than asserted.
#[test]
fn repeated_appends_are_measured() {
    let mut runs_with_repeat = 0;
    let mut runs = 0;
    for seed in 0..150 {
        let cnf = random_cnf(seed, 4 + (seed as usize % 5), false);
        let (records, _) = logged_run(&cnf);
        let mut seen = BTreeSet::new();
        let mut repeat = false;
        for r in &records {
            if r.branch == Branch::Append {
                repeat |= !seen.insert(r.counterexample.clone().unwrap());
            }
        }
        runs += 1;
        runs_with_repeat += repeat as usize;
    }
    println!("runs with a model appended twice: {runs_with_repeat}/{runs}");
}

#[test]
fn horn_negatives_never_outnumber_the_envelope_basis() {
    for seed in 0..120 {
        let n = 4 + (seed as usize % 5);
        let cnf = random_cnf(seed, n, false);
        let env = naive_closure(&cnf.models());
        let phi = cnf.to_formula();
        let mut mq = FormulaOracle::new(phi.clone());
        let mut eq = ExactEquivalence::horn(phi).unwrap();
        let mut peak = 0;
        let res = EnvelopeLearner::new()
            .observer(|state, _| {
                let horn = state.negatives().iter().filter(|e| !env.contains(&mask(e))).count();
                peak = peak.max(horn);
            })
            .run(&universe(n), &mut mq, &mut eq)
            .unwrap();
        assert!(res.terminated());
        assert!(
            peak <= res.horn().len(),
            "seed {seed}: {peak} Horn negatives, |H| = {}",
            res.horn().len()
        );
    }
}

#[test]
fn envelope_learner_recovers_the_envelope() {
    for seed in 500..560 {
        let n = 4 + (seed as usize % 5);
        let cnf = random_cnf(seed, n, false);
        let (_, res) = logged_run(&cnf);
        assert!(res.terminated());
        assert!(res.violations.is_empty(), "seed {seed}: {:?}", res.violations);
        assert_eq!(
            metaclause_models(n, res.horn()),
            naive_closure(&cnf.models()),
            "seed {seed}"
        );
        assert!(saturated(n, res.horn()), "seed {seed}");
        let k = naive_closure(&cnf.models()).len() - cnf.models().len();
        assert!(res.stats.k_observed as usize <= k, "seed {seed}");
    }
}
