use serde::{Deserialize, Serialize};

use crate::logic::{make_horn, make_quasi, Clause, Hypothesis, LogicError, MetaClause, Model, ModelSet};

/// Which learner invariant a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    /// A model occurs twice in the negative list.
    DuplicateNegative,
    /// A model is both in the negative list and among the non-Horn examples.
    NegativeIsNonHorn,
    /// A negative example satisfies `H`.
    NegativeSatisfiesHorn,
    /// A positive example falsifies `H`.
    PositiveFalsifiesHorn,
    /// A non-Horn example satisfies `Q`.
    NonHornSatisfiesQuasi,
    /// `Q` holds a clause that is not the quasi clause of a non-Horn example.
    StrayQuasiClause,
    /// `e_i ⊂ e_j` in the negative list but not `e_i ⊆ ⋂E⁺_{e_i} ⊆ e_j`.
    PositivesNotInBetween,
    /// A refinement did not strictly shrink the stored negative example.
    ReplacementNotShrinking,
    /// A trivial metaclause survived into a rebuilt `H`.
    TrivialMetaClause,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub iteration: u64,
    pub kind: InvariantKind,
    pub detail: String,
}

/// Examples gathered by the envelope learner and the hypothesis built from
/// them.
///
/// The negative list keeps a stable order: refinements overwrite an entry in
/// place and promotions delete entries without reordering the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnerState {
    width: usize,
    positives: ModelSet,
    negatives: Vec<Model>,
    non_horn: ModelSet,
    horn: Vec<MetaClause>,
    quasi: Vec<Clause>,
}

impl LearnerState {
    pub fn new(width: usize) -> Self {
        LearnerState {
            width,
            positives: ModelSet::new(width),
            negatives: Vec::new(),
            non_horn: ModelSet::new(width),
            horn: Vec::new(),
            quasi: Vec::new(),
        }
    }

    /// A state with the given examples and a hypothesis not yet built.
    pub fn from_examples(
        width: usize,
        positives: impl IntoIterator<Item = Model>,
        negatives: Vec<Model>,
        non_horn: impl IntoIterator<Item = Model>,
    ) -> Result<Self, LogicError> {
        for e in &negatives {
            if e.width() != width {
                return Err(LogicError::WidthMismatch {
                    expected: width,
                    found: e.width(),
                });
            }
        }
        Ok(LearnerState {
            width,
            positives: ModelSet::from_models(width, positives)?,
            negatives,
            non_horn: ModelSet::from_models(width, non_horn)?,
            horn: Vec::new(),
            quasi: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// `E⁺`
    pub fn positives(&self) -> &ModelSet {
        &self.positives
    }

    /// `E⁻`, in list order.
    pub fn negatives(&self) -> &[Model] {
        &self.negatives
    }

    /// `Eⁿʰ`
    pub fn non_horn(&self) -> &ModelSet {
        &self.non_horn
    }

    pub fn horn(&self) -> &[MetaClause] {
        &self.horn
    }

    pub fn quasi(&self) -> &[Clause] {
        &self.quasi
    }

    pub fn hypothesis(&self) -> Hypothesis {
        Hypothesis::new(self.width, self.horn.clone(), self.quasi.clone()).expect("state keeps a single width")
    }

    pub(crate) fn add_positive(&mut self, x: Model) {
        self.positives.insert(x).expect("width checked by the learner");
    }

    pub(crate) fn negatives_mut(&mut self) -> &mut Vec<Model> {
        &mut self.negatives
    }

    /// Moves every negative example that equals the intersection of the
    /// positives strictly above it (with at least one such positive) to the
    /// non-Horn set. Returns the promoted models in list order.
    pub fn promote_non_horn(&mut self) -> Vec<Model> {
        let positives = &self.positives;
        let mut promoted = Vec::new();
        self.negatives.retain(|e| {
            let hit = positives.meet_above(e).is_some_and(|m| &m == e);
            if hit {
                promoted.push(e.clone());
            }
            !hit
        });
        for e in &promoted {
            self.non_horn.insert(e.clone()).expect("same width");
        }
        promoted
    }

    /// Recomputes `H = {horn_{E⁺}(e) | e ∈ E⁻}` and `Q = {quasi(e) | e ∈ Eⁿʰ}`.
    ///
    /// Panics if a trivial metaclause appears, which means promotion was
    /// skipped.
    pub fn rebuild_hypothesis(&mut self) {
        self.horn = self.negatives.iter().map(|e| make_horn(&self.positives, e)).collect();
        assert!(
            !self.horn.iter().any(MetaClause::is_trivial),
            "rebuild_hypothesis called before promote_non_horn"
        );
        self.quasi = self.non_horn.iter().map(make_quasi).collect();
    }

    /// Checks the structural invariants the learner maintains between
    /// iterations.
    pub fn check_invariants(&self, iteration: u64) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, detail: String| {
            out.push(Violation {
                iteration,
                kind,
                detail,
            })
        };
        let hyp_horn = |x: &Model| self.horn.iter().all(|h| h.holds(x));
        let hyp_quasi = |x: &Model| self.quasi.iter().all(|q| q.holds(x));

        for (i, e) in self.negatives.iter().enumerate() {
            if self.negatives[..i].contains(e) {
                push(InvariantKind::DuplicateNegative, format!("{e:?}"));
            }
            if self.non_horn.contains(e) {
                push(InvariantKind::NegativeIsNonHorn, format!("{e:?}"));
            }
            if hyp_horn(e) {
                push(InvariantKind::NegativeSatisfiesHorn, format!("{e:?}"));
            }
        }
        for p in &self.positives {
            if !hyp_horn(p) {
                push(InvariantKind::PositiveFalsifiesHorn, format!("{p:?}"));
            }
        }
        for e in &self.non_horn {
            if hyp_quasi(e) {
                push(InvariantKind::NonHornSatisfiesQuasi, format!("{e:?}"));
            }
        }
        for q in &self.quasi {
            let is_quasi = q.consequent() == &q.antecedent().complement();
            if !is_quasi || !self.non_horn.contains(q.antecedent()) {
                push(InvariantKind::StrayQuasiClause, format!("{:?}", q.antecedent()));
            }
        }
        if self.horn.iter().any(MetaClause::is_trivial) {
            push(InvariantKind::TrivialMetaClause, String::new());
        }
        for ei in &self.negatives {
            let meet = self.positives.meet_above(ei).unwrap_or_else(|| Model::full(self.width));
            for ej in &self.negatives {
                if ei.is_strict_subset(ej) && !(ei.is_subset(&meet) && meet.is_subset(ej)) {
                    push(
                        InvariantKind::PositivesNotInBetween,
                        format!("e_i={ei:?} e_j={ej:?} meet={meet:?}"),
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Consequent;

    // a=0 b=1 c=2 d=3
    fn m(idx: &[usize]) -> Model {
        Model::from_indices(4, idx.iter().copied())
    }

    #[test]
    fn promotes_intersection_of_positives() {
        let mut s = LearnerState::from_examples(4, [m(&[1, 3]), m(&[2, 3])], vec![m(&[3])], []).unwrap();
        assert_eq!(s.promote_non_horn(), vec![m(&[3])]);
        assert!(s.negatives().is_empty());
        assert!(s.non_horn().contains(&m(&[3])));
    }

    #[test]
    fn no_positives_no_promotion() {
        let mut s = LearnerState::from_examples(4, [], vec![m(&[3]), m(&[0])], []).unwrap();
        assert!(s.promote_non_horn().is_empty());
        assert_eq!(s.negatives().len(), 2);
    }

    #[test]
    fn strict_meet_above_blocks_promotion() {
        let mut s = LearnerState::from_examples(4, [m(&[0, 1])], vec![m(&[0])], []).unwrap();
        assert!(s.promote_non_horn().is_empty());
    }

    #[test]
    fn promotion_keeps_order_of_survivors() {
        let mut s =
            LearnerState::from_examples(4, [m(&[1, 3]), m(&[2, 3])], vec![m(&[0]), m(&[3]), m(&[0, 2])], []).unwrap();
        s.promote_non_horn();
        assert_eq!(s.negatives(), [m(&[0]), m(&[0, 2])]);
    }

    #[test]
    fn rebuild_from_negatives_only() {
        let mut s = LearnerState::from_examples(4, [], vec![m(&[0])], []).unwrap();
        s.rebuild_hypothesis();
        assert_eq!(s.horn(), [MetaClause::negative(m(&[0]))]);
        assert!(s.quasi().is_empty());
    }

    #[test]
    fn rebuild_from_non_horn_only() {
        let mut s = LearnerState::from_examples(4, [], vec![], [m(&[3])]).unwrap();
        s.rebuild_hypothesis();
        assert!(s.horn().is_empty());
        assert_eq!(s.quasi().len(), 1);
        assert_eq!(s.quasi()[0].antecedent(), &m(&[3]));
        assert_eq!(s.quasi()[0].consequent(), &m(&[0, 1, 2]));
        assert!(s.check_invariants(0).is_empty());
    }

    #[test]
    fn rebuild_uses_meet_of_positives_above() {
        let mut s = LearnerState::from_examples(4, [m(&[1, 3]), m(&[0, 1, 3])], vec![m(&[3])], []).unwrap();
        s.rebuild_hypothesis();
        assert_eq!(s.horn()[0].consequent(), &Consequent::Conjunction(m(&[1])));
        assert!(s.check_invariants(0).is_empty());
    }

    #[test]
    #[should_panic(expected = "before promote_non_horn")]
    fn rebuild_without_promotion_panics() {
        let mut s = LearnerState::from_examples(4, [m(&[1, 3]), m(&[2, 3])], vec![m(&[3])], []).unwrap();
        s.rebuild_hypothesis();
    }

    #[test]
    fn invariant_checker_flags_broken_states() {
        let mut s = LearnerState::from_examples(4, [m(&[0])], vec![m(&[0]), m(&[0])], [m(&[0])]).unwrap();
        s.rebuild_hypothesis();
        let kinds: Vec<_> = s.check_invariants(1).into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&InvariantKind::DuplicateNegative));
        assert!(kinds.contains(&InvariantKind::NegativeIsNonHorn));
        assert!(kinds.contains(&InvariantKind::PositiveFalsifiesHorn));
    }

    #[test]
    fn in_between_violation_is_detected() {
        // {a} ⊂ {a,b}, but the only positive above {a} is {a,c}
        let mut s = LearnerState::from_examples(4, [m(&[0, 2])], vec![m(&[0]), m(&[0, 1])], []).unwrap();
        s.rebuild_hypothesis();
        let kinds: Vec<_> = s.check_invariants(1).into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&InvariantKind::PositivesNotInBetween));
    }
}
