//! The classic Horn learner never finishes on `a -> F, -> b | c` when the
//! equivalence oracle cycles through {d}, {b,d}, {c,d}; the envelope
//! learner does.
//!
//!     cargo run --example classic_nontermination [-- CAP]

use horn_envelope::harness::demo_nontermination;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cap = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(30);
    let demo = demo_nontermination(cap)?;
    print!("{demo}");
    println!("period-3 pattern [4, 1, 0]: {}", demo.is_periodic());
    Ok(())
}
