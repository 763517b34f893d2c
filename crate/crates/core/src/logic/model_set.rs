use std::collections::BTreeSet;

use super::{LogicError, Model};

/// A deduplicated set of models of one width, iterated in lexicographic bit
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSet {
    width: usize,
    members: BTreeSet<Model>,
}

impl ModelSet {
    pub fn new(width: usize) -> Self {
        ModelSet {
            width,
            members: BTreeSet::new(),
        }
    }

    pub fn from_models<I: IntoIterator<Item = Model>>(width: usize, models: I) -> Result<Self, LogicError> {
        let mut set = ModelSet::new(width);
        for m in models {
            set.insert(m)?;
        }
        Ok(set)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Returns whether the model was newly added.
    pub fn insert(&mut self, x: Model) -> Result<bool, LogicError> {
        if x.width() != self.width {
            return Err(LogicError::WidthMismatch {
                expected: self.width,
                found: x.width(),
            });
        }
        Ok(self.members.insert(x))
    }

    pub fn remove(&mut self, x: &Model) -> bool {
        self.members.remove(x)
    }

    pub fn contains(&self, x: &Model) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Model> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn difference<'a>(&'a self, other: &'a ModelSet) -> impl Iterator<Item = &'a Model> + 'a {
        self.members.difference(&other.members)
    }

    /// Members of exactly one of the two sets, smallest first.
    pub fn symmetric_difference<'a>(&'a self, other: &'a ModelSet) -> impl Iterator<Item = &'a Model> + 'a {
        self.members.symmetric_difference(&other.members)
    }

    /// Members that strictly contain `x`.
    pub fn strict_supersets_of<'a>(&'a self, x: &'a Model) -> impl Iterator<Item = &'a Model> + 'a {
        self.members.iter().filter(move |e| x.is_strict_subset(e))
    }

    /// Intersection of all members strictly containing `x`, or `None` when
    /// there are none.
    pub fn meet_above(&self, x: &Model) -> Option<Model> {
        self.strict_supersets_of(x).fold(None, |acc, e| match acc {
            None => Some(e.clone()),
            Some(a) => Some(a.meet(e)),
        })
    }
}

impl<'a> IntoIterator for &'a ModelSet {
    type Item = &'a Model;
    type IntoIter = std::collections::btree_set::Iter<'a, Model>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

pub fn intersect(x: &Model, y: &Model) -> Result<Model, LogicError> {
    x.same_width(y)?;
    Ok(x.meet(y))
}

/// Least superset of `m` closed under pairwise intersection, computed by
/// intersecting new members with everything seen until nothing new appears.
pub fn closure(m: &ModelSet) -> ModelSet {
    let mut result = m.clone();
    let mut frontier: Vec<Model> = m.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        let fresh: Vec<Model> = result
            .iter()
            .map(|y| x.meet(y))
            .filter(|z| !result.contains(z))
            .collect();
        for z in fresh {
            if result.members.insert(z.clone()) {
                frontier.push(z);
            }
        }
    }
    result
}

/// True iff every pairwise intersection of members is a member.
pub fn is_intersection_closed(m: &ModelSet) -> bool {
    let members: Vec<&Model> = m.iter().collect();
    members
        .iter()
        .enumerate()
        .all(|(i, x)| members[i + 1..].iter().all(|y| m.contains(&x.meet(y))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(width: usize, ms: &[&[usize]]) -> ModelSet {
        ModelSet::from_models(width, ms.iter().map(|i| Model::from_indices(width, i.iter().copied()))).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert!(closure(&ModelSet::new(3)).is_empty());
        // a=0 b=1 c=2
        let c = closure(&set(3, &[&[0, 1], &[1, 2]]));
        assert_eq!(c, set(3, &[&[0, 1], &[1, 2], &[1]]));
        // b=1 c=2 d=3: {d} = {b,d} ∩ {c,d}
        let c = closure(&set(4, &[&[1, 3], &[2, 3]]));
        assert!(c.contains(&Model::from_indices(4, [3])));
    }

    #[test]
    fn intersect_examples() {
        let x = Model::from_indices(3, [0, 1]);
        let y = Model::from_indices(3, [1, 2]);
        assert_eq!(intersect(&x, &y).unwrap(), Model::from_indices(3, [1]));
        assert_eq!(intersect(&x, &x).unwrap(), x);
        let a = Model::from_indices(2, [0]);
        let b = Model::from_indices(2, [1]);
        assert_eq!(intersect(&a, &b).unwrap(), Model::empty(2));
        assert!(intersect(&a, &Model::empty(3)).is_err());
    }

    #[test]
    fn closedness_examples() {
        assert!(is_intersection_closed(&ModelSet::new(2)));
        assert!(!is_intersection_closed(&set(2, &[&[0], &[1]])));
        assert!(is_intersection_closed(&set(2, &[&[0], &[1], &[]])));
    }

    #[test]
    fn lexicographic_iteration() {
        let s = set(3, &[&[0], &[2], &[], &[1, 2]]);
        let bits: Vec<String> = s.iter().map(Model::to_bit_string).collect();
        assert_eq!(bits, ["000", "001", "011", "100"]);
    }

    #[test]
    fn meet_above_uses_strict_supersets() {
        let s = set(3, &[&[0, 1], &[0, 2], &[0]]);
        let x = Model::from_indices(3, [0]);
        assert_eq!(s.meet_above(&x), Some(x.clone()));
        assert_eq!(s.meet_above(&Model::full(3)), None);
    }
}
