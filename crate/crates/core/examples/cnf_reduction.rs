//! Encodes a CNF into a Horn-plus-setup formula over V and its duals,
//! builds the envelope, and learns the CNF back through the envelope
//! learner with lifted oracles.

use horn_envelope::logic::BruteForce;
use horn_envelope::oracle::{ExactEquivalence, FormulaOracle};
use horn_envelope::reduction::{
    decode_formula, encode_formula, learn_cnf_via_envelope, one_step_envelope, ExtendedUniverse,
};
use horn_envelope::text::{parse_formula, render_formula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (u, phi) = parse_formula("vars: a b c\n-> b c\na -> c\nb c ->\n")?;
    let ext = ExtendedUniverse::new(u.clone())?;
    let enc = encode_formula(&phi).to_formula();
    println!("enc(phi):\n{}", render_formula(&enc, ext.combined()));
    println!(
        "envelope of enc(phi):\n{}",
        render_formula(&one_step_envelope(&phi), ext.combined())
    );

    let brute = BruteForce::default();
    let back = decode_formula(&enc)?;
    println!("dec(enc(phi)) equivalent to phi: {}", brute.equivalent(&back, &phi)?);

    let mut mo = FormulaOracle::new(phi.clone());
    let mut eo = ExactEquivalence::plain(phi.clone())?;
    let learned = learn_cnf_via_envelope(&mut mo, &mut eo, &u)?;
    println!("learned:\n{}", render_formula(&learned.formula, &u));
    println!(
        "equivalent: {}, {} EQs over {} variables, {} lifted counterexamples",
        brute.equivalent(&learned.formula, &phi)?,
        learned.run.stats.eq_count,
        ext.combined().len(),
        learned.counterexamples.len()
    );
    Ok(())
}
