//! Exhaustive reference computations over all `2^|V|` models.
//!
//! These are verification oracles, not solvers: every entry point refuses
//! universes wider than the configured cap.

use super::{closure, Consequent, Formula, Hypothesis, LogicError, MetaClause, Model, ModelSet, Theory};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    cap: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

impl BruteForce {
    /// The cap can be lowered but never raised past 63 variables.
    pub fn with_cap(cap: usize) -> Self {
        BruteForce { cap: cap.min(63) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn check(&self, width: usize) -> Result<(), LogicError> {
        if width > self.cap {
            Err(LogicError::CapExceeded { width, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// All models of the given width, smallest first.
    pub fn all_models(&self, width: usize) -> Result<impl Iterator<Item = Model>, LogicError> {
        self.check(width)?;
        Ok((0..1u64 << width).map(move |k| Model::nth_lexicographic(width, k)))
    }

    pub fn models_of<T: Theory + ?Sized>(&self, t: &T) -> Result<ModelSet, LogicError> {
        let width = t.width();
        let mut set = ModelSet::new(width);
        for x in self.all_models(width)?.filter(|x| t.holds(x)) {
            set.insert(x)?;
        }
        Ok(set)
    }

    /// Models of the Horn envelope: the intersection closure of `mod(t)`.
    pub fn envelope<T: Theory + ?Sized>(&self, t: &T) -> Result<ModelSet, LogicError> {
        Ok(closure(&self.models_of(t)?))
    }

    /// Non-Horn negative examples, `closure(mod t) ∖ mod t`.
    pub fn non_horn_negatives<T: Theory + ?Sized>(&self, t: &T) -> Result<ModelSet, LogicError> {
        let models = self.models_of(t)?;
        let env = closure(&models);
        ModelSet::from_models(t.width(), env.difference(&models).cloned())
    }

    pub fn entails<A: Theory + ?Sized, B: Theory + ?Sized>(&self, a: &A, b: &B) -> Result<bool, LogicError> {
        if a.width() != b.width() {
            return Err(LogicError::WidthMismatch {
                expected: a.width(),
                found: b.width(),
            });
        }
        Ok(self.all_models(a.width())?.all(|x| !a.holds(&x) || b.holds(&x)))
    }

    pub fn equivalent<A: Theory + ?Sized, B: Theory + ?Sized>(&self, a: &A, b: &B) -> Result<bool, LogicError> {
        Ok(self.entails(a, b)? && self.entails(b, a)?)
    }

    /// `t[x] = {v ∈ V ∖ x | t ⊨ ⋀x → v}`.
    pub fn consequence_closure<T: Theory + ?Sized>(&self, t: &T, x: &Model) -> Result<Model, LogicError> {
        if x.width() != t.width() {
            return Err(LogicError::WidthMismatch {
                expected: t.width(),
                found: x.width(),
            });
        }
        let models = self.models_of(t)?;
        Ok(consequences_in(&models, x))
    }

    /// Left- and right-saturation of a meta Horn formula.
    ///
    /// A metaclause whose antecedent no model of `h` covers must have `⊥` as
    /// consequent; otherwise its consequent must equal `h[ant]`.
    pub fn is_saturated(&self, width: usize, h: &[MetaClause]) -> Result<bool, LogicError> {
        let theory = Hypothesis::new(width, h.to_vec(), Vec::new())?;
        let models = self.models_of(&theory)?;
        for (i, hi) in h.iter().enumerate() {
            let ant = hi.antecedent();
            if hi.holds(ant) {
                return Ok(false);
            }
            if h.iter().enumerate().any(|(j, hj)| j != i && !hj.holds(ant)) {
                return Ok(false);
            }
            let covered = models.iter().any(|y| ant.is_subset(y));
            let right = match hi.consequent() {
                Consequent::Falsum => !covered,
                Consequent::Conjunction(q) => covered && *q == consequences_in(&models, ant),
            };
            if !right {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn consequences_in(models: &ModelSet, x: &Model) -> Model {
    let meet = models
        .iter()
        .filter(|y| x.is_subset(y))
        .fold(Model::full(x.width()), |acc, y| acc.meet(y));
    meet.difference(x)
}

pub fn models_of<T: Theory + ?Sized>(t: &T) -> Result<ModelSet, LogicError> {
    BruteForce::default().models_of(t)
}

pub fn envelope_bruteforce(phi: &Formula) -> Result<ModelSet, LogicError> {
    BruteForce::default().envelope(phi)
}

pub fn entails<A: Theory + ?Sized, B: Theory + ?Sized>(a: &A, b: &B) -> Result<bool, LogicError> {
    BruteForce::default().entails(a, b)
}

pub fn consequence_closure<T: Theory + ?Sized>(t: &T, x: &Model) -> Result<Model, LogicError> {
    BruteForce::default().consequence_closure(t, x)
}

pub fn is_saturated(width: usize, h: &[MetaClause]) -> Result<bool, LogicError> {
    BruteForce::default().is_saturated(width, h)
}
