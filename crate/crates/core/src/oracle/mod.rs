//! Membership and equivalence oracles.
//!
//! A [`MembershipOracle`] labels single models. An [`EquivalenceOracle`]
//! compares a hypothesis against the hidden target and either accepts it or
//! returns a model the two classify differently. Exact oracles enumerate the
//! universe; the sampled oracle checks a random batch against membership
//! answers, which is how a black-box classifier gets an equivalence oracle.

mod exact;
mod sampled;
pub mod wire;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{LogicError, Model, Theory};

pub use exact::{exact_horn_equivalence, ExactEquivalence};
pub use sampled::{OneHotBlock, SampleSpace, SampledEquivalence, SamplerConfig};
pub use wire::{Endpoint, WireOracle};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle transport failed: {0}")]
    Transport(#[from] std::io::Error),
    #[error("oracle protocol error: {message} (payload: {raw:?})")]
    Protocol { message: String, raw: String },
    #[error("oracle configuration error: {0}")]
    Config(String),
    #[error("oracle answered {first:?} and later {second:?} for model {model}")]
    Inconsistent { model: String, first: Label, second: Label },
    #[error("scripted oracle ran out of answers after {0} queries")]
    ScriptExhausted(u64),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl OracleError {
    /// Transport failures may succeed on a fresh connection; everything else
    /// is deterministic.
    pub fn is_retryable(&self) -> bool {
        matches!(self, OracleError::Transport(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

pub trait MembershipOracle {
    /// Number of variables in the models this oracle labels.
    fn width(&self) -> usize;

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError>;

    /// Whether the oracle may be queried from several threads at once.
    fn supports_concurrent_queries(&self) -> bool {
        false
    }
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for Box<O> {
    fn width(&self) -> usize {
        (**self).width()
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        (**self).membership(x)
    }

    fn supports_concurrent_queries(&self) -> bool {
        (**self).supports_concurrent_queries()
    }
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for &mut O {
    fn width(&self) -> usize {
        (**self).width()
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        (**self).membership(x)
    }
}

/// Answers membership by evaluating a formula (or any [`Theory`]).
#[derive(Clone, Debug)]
pub struct FormulaOracle<T> {
    target: T,
}

impl<T: Theory> FormulaOracle<T> {
    pub fn new(target: T) -> Self {
        FormulaOracle { target }
    }

    pub fn target(&self) -> &T {
        &self.target
    }
}

impl<T: Theory> MembershipOracle for FormulaOracle<T> {
    fn width(&self) -> usize {
        self.target.width()
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        if x.width() != self.target.width() {
            return Err(LogicError::WidthMismatch {
                expected: self.target.width(),
                found: x.width(),
            }
            .into());
        }
        Ok(Label::from_bool(self.target.holds(x)))
    }

    fn supports_concurrent_queries(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipStats {
    /// Queries asked of the session.
    pub queries: u64,
    /// Queries forwarded to the underlying oracle.
    pub calls: u64,
}

/// Wraps an oracle with query accounting, an answer cache and a consistency
/// check. Every answer is remembered; with caching on, repeats are served
/// from memory, with caching off they are re-asked and compared.
pub struct Session<O> {
    inner: O,
    cache: bool,
    answers: HashMap<Model, Label>,
    stats: MembershipStats,
}

impl<O: MembershipOracle> Session<O> {
    pub fn new(inner: O) -> Self {
        Session {
            inner,
            cache: true,
            answers: HashMap::new(),
            stats: MembershipStats::default(),
        }
    }

    pub fn without_cache(mut self) -> Self {
        self.cache = false;
        self
    }

    pub fn stats(&self) -> MembershipStats {
        self.stats
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: MembershipOracle> MembershipOracle for Session<O> {
    fn width(&self) -> usize {
        self.inner.width()
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        self.stats.queries += 1;
        let previous = self.answers.get(x).copied();
        if self.cache {
            if let Some(label) = previous {
                return Ok(label);
            }
        }
        self.stats.calls += 1;
        let label = self.inner.membership(x)?;
        match previous {
            Some(first) if first != label => Err(OracleError::Inconsistent {
                model: x.to_bit_string(),
                first,
                second: label,
            }),
            Some(_) => Ok(label),
            None => {
                self.answers.insert(x.clone(), label);
                Ok(label)
            }
        }
    }

    fn supports_concurrent_queries(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqAnswer {
    Yes,
    No(Model),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqMode {
    Exact,
    Sampled,
    Scripted,
}

pub trait EquivalenceOracle {
    /// Checks `hypothesis` against the target. Oracles that need labels for
    /// fresh models (the sampled one) ask `membership`.
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError>;

    fn mode(&self) -> EqMode;

    /// Equivalence queries answered so far.
    fn queries(&self) -> u64;
}

impl<E: EquivalenceOracle + ?Sized> EquivalenceOracle for Box<E> {
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError> {
        (**self).equivalence(hypothesis, membership)
    }

    fn mode(&self) -> EqMode {
        (**self).mode()
    }

    fn queries(&self) -> u64 {
        (**self).queries()
    }
}
