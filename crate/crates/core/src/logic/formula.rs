use super::{Clause, LogicError, MetaClause, Model};

/// Anything that classifies models: formulas, hypotheses, single clauses.
pub trait Theory {
    fn width(&self) -> usize;
    fn holds(&self, x: &Model) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    GeneralCnf,
    Horn,
}

/// A CNF: a set of clauses over a universe of `width` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    width: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    /// `⊤` over `width` variables.
    pub fn top(width: usize) -> Self {
        Formula {
            width,
            clauses: Vec::new(),
        }
    }

    /// Builds a formula, dropping repeated clauses (first occurrence wins).
    pub fn new(width: usize, clauses: Vec<Clause>) -> Result<Self, LogicError> {
        let mut f = Formula::top(width);
        for c in clauses {
            f.push(c)?;
        }
        Ok(f)
    }

    pub fn push(&mut self, c: Clause) -> Result<(), LogicError> {
        if c.width() != self.width {
            return Err(LogicError::WidthMismatch {
                expected: self.width,
                found: c.width(),
            });
        }
        if !self.clauses.contains(&c) {
            self.clauses.push(c);
        }
        Ok(())
    }

    pub fn from_metaclauses(width: usize, h: &[MetaClause]) -> Result<Self, LogicError> {
        Formula::new(width, h.iter().flat_map(MetaClause::to_clauses).collect())
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn kind(&self) -> FormulaKind {
        if self.clauses.iter().all(Clause::is_horn) {
            FormulaKind::Horn
        } else {
            FormulaKind::GeneralCnf
        }
    }

    pub fn is_horn(&self) -> bool {
        self.kind() == FormulaKind::Horn
    }

    /// Conjunction of two formulas over the same universe.
    pub fn and(&self, other: &Formula) -> Result<Formula, LogicError> {
        let mut f = self.clone();
        for c in &other.clauses {
            f.push(c.clone())?;
        }
        Ok(f)
    }
}

impl Theory for Formula {
    fn width(&self) -> usize {
        self.width
    }

    fn holds(&self, x: &Model) -> bool {
        self.clauses.iter().all(|c| c.holds(x))
    }
}

impl Theory for Clause {
    fn width(&self) -> usize {
        Clause::width(self)
    }

    fn holds(&self, x: &Model) -> bool {
        Clause::holds(self, x)
    }
}

impl Theory for MetaClause {
    fn width(&self) -> usize {
        MetaClause::width(self)
    }

    fn holds(&self, x: &Model) -> bool {
        MetaClause::holds(self, x)
    }
}

/// The learner's hypothesis `H ∪ Q`: meta Horn clauses plus quasi clauses,
/// read as one conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    width: usize,
    pub horn: Vec<MetaClause>,
    pub quasi: Vec<Clause>,
}

impl Hypothesis {
    pub fn empty(width: usize) -> Self {
        Hypothesis {
            width,
            horn: Vec::new(),
            quasi: Vec::new(),
        }
    }

    pub fn new(width: usize, horn: Vec<MetaClause>, quasi: Vec<Clause>) -> Result<Self, LogicError> {
        for w in horn
            .iter()
            .map(MetaClause::width)
            .chain(quasi.iter().map(Clause::width))
        {
            if w != width {
                return Err(LogicError::WidthMismatch {
                    expected: width,
                    found: w,
                });
            }
        }
        Ok(Hypothesis { width, horn, quasi })
    }

    /// Only the meta Horn part, `H`.
    pub fn horn_part(&self) -> Hypothesis {
        Hypothesis {
            width: self.width,
            horn: self.horn.clone(),
            quasi: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.horn.is_empty() && self.quasi.is_empty()
    }

    /// `H ∪ Q` as a plain CNF.
    pub fn to_formula(&self) -> Formula {
        let mut clauses: Vec<Clause> = self.horn.iter().flat_map(MetaClause::to_clauses).collect();
        clauses.extend(self.quasi.iter().cloned());
        Formula::new(self.width, clauses).expect("hypothesis clauses share its width")
    }
}

impl Theory for Hypothesis {
    fn width(&self) -> usize {
        self.width
    }

    fn holds(&self, x: &Model) -> bool {
        self.horn.iter().all(|h| h.holds(x)) && self.quasi.iter().all(|q| q.holds(x))
    }
}

fn checked(t: &dyn Theory, x: &Model) -> Result<(), LogicError> {
    if t.width() == x.width() {
        Ok(())
    } else {
        Err(LogicError::WidthMismatch {
            expected: t.width(),
            found: x.width(),
        })
    }
}

pub fn eval_clause(x: &Model, c: &Clause) -> Result<bool, LogicError> {
    checked(c, x)?;
    Ok(c.holds(x))
}

pub fn eval_metaclause(x: &Model, m: &MetaClause) -> Result<bool, LogicError> {
    checked(m, x)?;
    Ok(m.holds(x))
}

pub fn eval_hypothesis(x: &Model, h: &[MetaClause], q: &[Clause]) -> Result<bool, LogicError> {
    for m in h {
        if !eval_metaclause(x, m)? {
            return Ok(false);
        }
    }
    for c in q {
        if !eval_clause(x, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::make_quasi;

    fn m(idx: &[usize]) -> Model {
        Model::from_indices(4, idx.iter().copied())
    }

    #[test]
    fn hypothesis_evaluation_examples() {
        // a=0 b=1 c=2 d=3
        assert!(eval_hypothesis(&m(&[1]), &[], &[]).unwrap());
        let d_b = MetaClause::definite(m(&[3]), m(&[1])).unwrap();
        assert!(!eval_hypothesis(&m(&[2, 3]), &[d_b], &[]).unwrap());
        let q = make_quasi(&m(&[3]));
        assert!(!eval_hypothesis(&m(&[3]), &[], &[q]).unwrap());
    }

    #[test]
    fn evaluation_rejects_width_mismatch() {
        let c = Clause::new(m(&[0]), m(&[])).unwrap();
        assert!(matches!(
            eval_clause(&Model::empty(3), &c),
            Err(LogicError::WidthMismatch { expected: 4, found: 3 })
        ));
        let h = MetaClause::negative(m(&[0]));
        assert!(eval_metaclause(&Model::empty(5), &h).is_err());
    }

    #[test]
    fn kind_tracks_clause_shapes() {
        let horn = Formula::new(4, vec![Clause::new(m(&[0]), m(&[])).unwrap()]).unwrap();
        assert_eq!(horn.kind(), FormulaKind::Horn);
        let cnf = horn
            .and(&Formula::new(4, vec![Clause::new(m(&[]), m(&[1, 2])).unwrap()]).unwrap())
            .unwrap();
        assert_eq!(cnf.kind(), FormulaKind::GeneralCnf);
        assert_eq!(cnf.len(), 2);
    }

    #[test]
    fn duplicate_clauses_collapse() {
        let c = Clause::new(m(&[0]), m(&[])).unwrap();
        let f = Formula::new(4, vec![c.clone(), c]).unwrap();
        assert_eq!(f.len(), 1);
    }
}
