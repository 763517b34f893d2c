use super::{Clause, MetaClause, Model, ModelSet};

/// `horn_{E⁺}(x)`: the strongest metaclause falsified by `x` that every
/// positive example in `positives` still satisfies.
///
/// With no positive example strictly above `x` the result is `⋀x → ⊥`;
/// otherwise it is `⋀x → ⋀(⋂E⁺_x ∖ x)`. The latter may have an empty
/// consequent, meaning `x` is the intersection of positives above it.
pub fn make_horn(positives: &ModelSet, x: &Model) -> MetaClause {
    match positives.meet_above(x) {
        None => MetaClause::negative(x.clone()),
        Some(meet) => MetaClause::definite(x.clone(), meet.difference(x)).expect("positives share the width of x"),
    }
}

/// `quasi(x) = ⋀x → ⋁(V ∖ x)`, the weakest clause falsified by `x`. Its only
/// falsifying model is `x` itself.
pub fn make_quasi(x: &Model) -> Clause {
    Clause::new(x.clone(), x.complement()).expect("complement shares the width of x")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Consequent;

    // a=0 b=1 c=2 d=3
    fn m(idx: &[usize]) -> Model {
        Model::from_indices(4, idx.iter().copied())
    }

    fn positives(ms: &[&[usize]]) -> ModelSet {
        ModelSet::from_models(4, ms.iter().map(|i| m(i))).unwrap()
    }

    #[test]
    fn make_horn_examples() {
        let d = m(&[3]);
        assert_eq!(make_horn(&positives(&[]), &d), MetaClause::negative(d.clone()));
        assert_eq!(
            make_horn(&positives(&[&[1, 3]]), &d),
            MetaClause::definite(d.clone(), m(&[1])).unwrap()
        );
        let promoted = make_horn(&positives(&[&[1, 3], &[2, 3]]), &d);
        assert_eq!(promoted.consequent(), &Consequent::Conjunction(m(&[])));
        assert!(promoted.is_trivial());
    }

    #[test]
    fn make_horn_ignores_equal_positive() {
        let d = m(&[3]);
        assert!(make_horn(&positives(&[&[3]]), &d).is_negative());
    }

    #[test]
    fn make_quasi_examples() {
        let q = make_quasi(&Model::empty(2));
        assert_eq!(q.antecedent(), &Model::empty(2));
        assert_eq!(q.consequent(), &Model::full(2));
        let q = make_quasi(&m(&[3]));
        assert_eq!(q.consequent(), &m(&[0, 1, 2]));
        let q = make_quasi(&Model::full(4));
        assert!(q.consequent().is_empty());
    }
}
