//! Plants five `occupation & gender -> F` rules in a stub oracle over the
//! 26-variable schema and recovers them with sampled equivalence queries.
//!
//!     cargo run --release --example planted_rules [-- SEED]

use horn_envelope::harness::{run_experiment, AttributeSchema, ExperimentConfig, OracleSource};
use horn_envelope::text::parse_formula_in;

const RULES: &str = include_str!("../data/planted_rules.cnf");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let schema = AttributeSchema::biographies();
    let target = parse_formula_in(RULES, &schema.universe()?)?;

    let mut cfg = ExperimentConfig::new(schema, OracleSource::Formula(target));
    cfg.seed = seed;
    let report = run_experiment(&cfg)?;

    print!("{}", report.to_text());
    for run in &report.runs {
        println!(
            "run {}: {:?}, {} EQs, {} MQs, {} rules",
            run.iteration,
            run.termination,
            run.eq_count,
            run.mq_count,
            run.rules.len()
        );
    }
    Ok(())
}
