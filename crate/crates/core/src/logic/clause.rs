use super::{LogicError, Model};

/// A clause in implicational form, `⋀antecedent → ⋁consequent`.
///
/// An empty consequent reads as `⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    antecedent: Model,
    consequent: Model,
}

impl Clause {
    pub fn new(antecedent: Model, consequent: Model) -> Result<Self, LogicError> {
        antecedent.same_width(&consequent)?;
        Ok(Clause { antecedent, consequent })
    }

    pub fn antecedent(&self) -> &Model {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Model {
        &self.consequent
    }

    pub fn width(&self) -> usize {
        self.antecedent.width()
    }

    /// At most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.consequent.len() <= 1
    }

    /// `x` falsifies the clause iff it covers the antecedent and misses every
    /// consequent variable. Panics on width mismatch.
    pub fn holds(&self, x: &Model) -> bool {
        !(self.antecedent.is_subset(x) && self.consequent.is_disjoint(x))
    }
}

/// Consequent of a [`MetaClause`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Consequent {
    /// `⊥`: the metaclause is negative.
    Falsum,
    /// `⋀Q`. An empty `Q` makes the metaclause trivially true; the learner
    /// only produces it transiently, for examples it is about to promote.
    Conjunction(Model),
}

/// A metaclause `⋀antecedent → ⋀consequent`, shorthand for a set of Horn
/// clauses sharing one antecedent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaClause {
    antecedent: Model,
    consequent: Consequent,
}

impl MetaClause {
    pub fn negative(antecedent: Model) -> Self {
        MetaClause {
            antecedent,
            consequent: Consequent::Falsum,
        }
    }

    pub fn definite(antecedent: Model, consequent: Model) -> Result<Self, LogicError> {
        antecedent.same_width(&consequent)?;
        Ok(MetaClause {
            antecedent,
            consequent: Consequent::Conjunction(consequent),
        })
    }

    pub fn antecedent(&self) -> &Model {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Consequent {
        &self.consequent
    }

    pub fn width(&self) -> usize {
        self.antecedent.width()
    }

    pub fn is_negative(&self) -> bool {
        matches!(self.consequent, Consequent::Falsum)
    }

    /// True for the `⋀P → ⋀∅` form.
    pub fn is_trivial(&self) -> bool {
        matches!(&self.consequent, Consequent::Conjunction(q) if q.is_empty())
    }

    /// Falsified iff the antecedent is covered and the consequent is not
    /// contained in `x` (with `⊥` never contained). Panics on width mismatch.
    pub fn holds(&self, x: &Model) -> bool {
        if !self.antecedent.is_subset(x) {
            return true;
        }
        match &self.consequent {
            Consequent::Falsum => false,
            Consequent::Conjunction(q) => q.is_subset(x),
        }
    }

    /// The Horn clauses this metaclause stands for.
    pub fn to_clauses(&self) -> Vec<Clause> {
        let w = self.width();
        match &self.consequent {
            Consequent::Falsum => vec![Clause {
                antecedent: self.antecedent.clone(),
                consequent: Model::empty(w),
            }],
            Consequent::Conjunction(q) => q
                .ones()
                .map(|v| Clause {
                    antecedent: self.antecedent.clone(),
                    consequent: Model::from_indices(w, [v]),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(width: usize, idx: &[usize]) -> Model {
        Model::from_indices(width, idx.iter().copied())
    }

    #[test]
    fn clause_semantics() {
        // a=0 b=1 c=2 d=3
        let a_bot = Clause::new(m(4, &[0]), m(4, &[])).unwrap();
        assert!(!a_bot.holds(&m(4, &[0])));
        assert!(!a_bot.holds(&m(4, &[0, 2])));
        let a_b = Clause::new(m(4, &[0]), m(4, &[1])).unwrap();
        assert!(a_b.holds(&m(4, &[])));
        let b_or_c = Clause::new(m(4, &[]), m(4, &[1, 2])).unwrap();
        assert!(!b_or_c.holds(&m(4, &[3])));
        assert!(b_or_c.holds(&m(4, &[2, 3])));
        assert!(!b_or_c.is_horn());
        assert!(a_b.is_horn() && a_bot.is_horn());
    }

    #[test]
    fn metaclause_semantics() {
        // p=0 q=1
        let p_q = MetaClause::definite(m(2, &[0]), m(2, &[1])).unwrap();
        assert!(p_q.holds(&m(2, &[0, 1])));
        assert!(!p_q.holds(&m(2, &[0])));
        assert!(p_q.holds(&m(2, &[1])));
        let p_bot = MetaClause::negative(m(2, &[0]));
        assert!(!p_bot.holds(&m(2, &[0])));
        assert!(!p_bot.holds(&m(2, &[0, 1])));
        assert!(p_bot.holds(&m(2, &[1])));
    }

    #[test]
    fn falsification_partitions_models() {
        // holds is the negation of the falsification condition on every model
        let h = MetaClause::definite(m(3, &[0]), m(3, &[1, 2])).unwrap();
        for k in 0..8u64 {
            let x = Model::nth_lexicographic(3, k);
            let falsified = h.antecedent().is_subset(&x)
                && !matches!(h.consequent(), Consequent::Conjunction(q) if q.is_subset(&x));
            assert_eq!(h.holds(&x), !falsified);
        }
    }

    #[test]
    fn expansion_to_horn_clauses() {
        let h = MetaClause::definite(m(3, &[0]), m(3, &[1, 2])).unwrap();
        let cs = h.to_clauses();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(Clause::is_horn));
        let trivial = MetaClause::definite(m(3, &[0]), m(3, &[])).unwrap();
        assert!(trivial.is_trivial());
        assert!(trivial.to_clauses().is_empty());
        assert_eq!(MetaClause::negative(m(3, &[0])).to_clauses().len(), 1);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        assert!(matches!(
            Clause::new(m(3, &[]), m(4, &[])),
            Err(LogicError::WidthMismatch { .. })
        ));
    }
}
