//! Learning Horn envelopes of propositional formulas from membership and
//! equivalence queries, plus the classic Horn learner, the CNF reduction and
//! a small experiment harness.

pub mod harness;
pub mod learner;
pub mod logic;
pub mod oracle;
pub mod reduction;
pub mod text;
