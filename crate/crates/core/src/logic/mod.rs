//! Propositional foundation: models, clauses, metaclauses, intersection
//! closure and the brute-force reference computations used as test oracles.

mod brute;
mod clause;
mod formula;
mod horn;
mod model;
mod model_set;
mod universe;

pub use brute::{
    consequence_closure, entails, envelope_bruteforce, is_saturated, models_of, BruteForce, DEFAULT_BRUTE_FORCE_CAP,
};
pub use clause::{Clause, Consequent, MetaClause};
pub use formula::{eval_clause, eval_hypothesis, eval_metaclause, Formula, FormulaKind, Hypothesis, Theory};
pub use horn::{make_horn, make_quasi};
pub use model::Model;
pub use model_set::{closure, intersect, is_intersection_closed, ModelSet};
pub use universe::VariableUniverse;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("width mismatch: expected {expected} variables, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("brute-force enumeration refused: {width} variables exceeds the cap of {cap}")]
    CapExceeded { width: usize, cap: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable universe must not be empty")]
    EmptyUniverse,
    #[error("parse error: {0}")]
    Parse(String),
}
