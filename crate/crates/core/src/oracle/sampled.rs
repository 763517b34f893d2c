use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EqAnswer, EqMode, EquivalenceOracle, ExactEquivalence, MembershipOracle, OracleError};
use crate::logic::{Model, Theory};

/// A group of variables encoding one discrete attribute: at most one of them
/// is set in a sampled model, exactly one when `allow_empty` is false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneHotBlock {
    pub indices: Vec<usize>,
    pub allow_empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleSpace {
    /// Every variable set independently with probability 1/2.
    AllSubsets,
    /// Each block sampled uniformly among its admissible settings.
    OneHotGroups(Vec<OneHotBlock>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub batch_size: usize,
    pub seed: u64,
    pub space: SampleSpace,
}

impl SamplerConfig {
    pub fn validate(&self, width: usize) -> Result<(), OracleError> {
        if self.batch_size == 0 {
            return Err(OracleError::Config("batch size must be at least 1".into()));
        }
        if let SampleSpace::OneHotGroups(blocks) = &self.space {
            let mut seen = vec![false; width];
            for b in blocks {
                if b.indices.is_empty() {
                    return Err(OracleError::Config("one-hot block without variables".into()));
                }
                for &i in &b.indices {
                    if i >= width {
                        return Err(OracleError::Config(format!(
                            "one-hot block index {i} outside universe of {width}"
                        )));
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(OracleError::Config(format!(
                            "variable {i} appears in two one-hot blocks"
                        )));
                    }
                }
            }
            if let Some(i) = seen.iter().position(|s| !s) {
                return Err(OracleError::Config(format!(
                    "variable {i} is not covered by any one-hot block"
                )));
            }
        }
        Ok(())
    }
}

/// Simulates an equivalence query by drawing a batch of models and comparing
/// the hypothesis with membership answers on each. Sound for the batch, not
/// complete: "yes" only means the batch found no disagreement.
pub struct SampledEquivalence {
    config: SamplerConfig,
    width: usize,
    rng: ChaCha8Rng,
    queries: u64,
    final_check: Option<ExactEquivalence>,
    last_batch: Vec<Model>,
}

impl SampledEquivalence {
    pub fn new(config: SamplerConfig, width: usize) -> Result<Self, OracleError> {
        config.validate(width)?;
        Ok(SampledEquivalence {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            width,
            queries: 0,
            final_check: None,
            last_batch: Vec::new(),
        })
    }

    /// After a clean batch, confirm with an exact oracle and return its
    /// counterexample if it has one.
    pub fn with_final_exact_check(mut self, exact: ExactEquivalence) -> Self {
        self.final_check = Some(exact);
        self
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    /// The batch drawn for the most recent query.
    pub fn last_batch(&self) -> &[Model] {
        &self.last_batch
    }

    pub fn sample(&mut self) -> Model {
        let mut x = Model::empty(self.width);
        match &self.config.space {
            SampleSpace::AllSubsets => {
                for i in 0..self.width {
                    if self.rng.gen::<bool>() {
                        x.insert(i);
                    }
                }
            }
            SampleSpace::OneHotGroups(blocks) => {
                for b in blocks {
                    let options = b.indices.len() + usize::from(b.allow_empty);
                    let pick = self.rng.gen_range(0..options);
                    if let Some(&i) = b.indices.get(pick) {
                        x.insert(i);
                    }
                }
            }
        }
        x
    }

    pub fn draw_batch(&mut self) -> Vec<Model> {
        (0..self.config.batch_size).map(|_| self.sample()).collect()
    }
}

impl EquivalenceOracle for SampledEquivalence {
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError> {
        if hypothesis.width() != self.width {
            return Err(OracleError::Config(format!(
                "hypothesis over {} variables, sampler over {}",
                hypothesis.width(),
                self.width
            )));
        }
        self.queries += 1;
        self.last_batch = self.draw_batch();
        for x in &self.last_batch {
            let label = membership.membership(x)?;
            if hypothesis.holds(x) != label.is_positive() {
                return Ok(EqAnswer::No(x.clone()));
            }
        }
        match &self.final_check {
            Some(exact) => Ok(exact.check(hypothesis)?),
            None => Ok(EqAnswer::Yes),
        }
    }

    fn mode(&self) -> EqMode {
        EqMode::Sampled
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}
