//! Learns the Horn envelope of a non-Horn formula with exact oracles and
//! prints each step of the run.
//!
//!     cargo run --example learn_envelope [-- FILE]

use horn_envelope::learner::{check_bounds, EnvelopeLearner};
use horn_envelope::logic::{closure, is_saturated, models_of, BruteForce};
use horn_envelope::oracle::{ExactEquivalence, FormulaOracle, Session};
use horn_envelope::text::{parse_formula, render_metaclauses};

const DEFAULT: &str = "vars: a b c d\na ->\n-> b c\nb c -> d\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let (universe, phi) = parse_formula(&text)?;
    let mut mq = Session::new(FormulaOracle::new(phi.clone()));
    let mut eq = ExactEquivalence::horn(phi.clone())?;

    let res = EnvelopeLearner::new()
        .check_invariants(true)
        .observer(|state, step| {
            println!(
                "EQ {:>2}  {:<9} x={:<6} |E+|={} |E-|={} |E-nh|={} |H|={} |Q|={}",
                step.iteration,
                format!("{:?}", step.branch).split_whitespace().next().unwrap_or(""),
                step.counterexample.as_deref().unwrap_or("-"),
                state.positives().len(),
                state.negatives().len(),
                state.non_horn().len(),
                step.horn_size,
                step.quasi_size,
            )
        })
        .run(&universe, &mut mq, &mut eq)?;

    println!("\nlearned H:\n{}", render_metaclauses(res.horn(), &universe));

    let models = models_of(&phi)?;
    let env = closure(&models);
    let k = env.len() - models.len();
    let same = BruteForce::default().models_of(&res.hypothesis.horn_part())? == env;
    println!("models(H) == closure(models(phi)): {same}");
    println!("H saturated: {}", is_saturated(universe.len(), res.horn())?);
    let bounds = check_bounds(&res, res.horn().len(), k, universe.len());
    println!(
        "{} EQs, {} MQs (limit {}), bounds ok: {}, invariant violations: {}",
        res.stats.eq_count,
        res.stats.mq_count,
        bounds.mq_limit,
        bounds.ok(),
        res.violations.len()
    );
    Ok(())
}
