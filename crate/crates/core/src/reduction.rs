//! Encoding of arbitrary CNFs as Horn-shaped CNFs over a doubled universe,
//! and the wrapper that learns a CNF by running the envelope learner on its
//! encoding.
//!
//! For every variable `v` a dual `v¬` is added. A clause `⋀P → ⋁Q` becomes
//! the negative clause `⋀(P ∪ Q¬) → ⊥`, and the setup clauses `v ∧ v¬ → ⊥`
//! and `v ∨ v¬` force exactly one of each pair. A model `x` over `V` lifts to
//! `x¬ = x ∪ {p¬ | p ∉ x}`.

use crate::learner::{EnvelopeLearner, LearnerError, LearnerResult};
use crate::logic::{Clause, Formula, LogicError, Model, Theory, VariableUniverse};
use crate::oracle::{EqAnswer, EqMode, EquivalenceOracle, Label, MembershipOracle, OracleError};

/// Suffix of dual variable names in memory.
pub const DUAL_MARK: &str = "¬";
/// Suffix of dual variable names in formula files.
pub const DUAL_FILE_SUFFIX: &str = "_neg";

/// `V ∪ V¬`, base variables first, then their duals in the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedUniverse {
    base: VariableUniverse,
    combined: VariableUniverse,
}

impl ExtendedUniverse {
    pub fn new(base: VariableUniverse) -> Result<Self, LogicError> {
        Self::with_suffix(base, DUAL_MARK)
    }

    /// Duals named with `_neg`, for writing formula files.
    pub fn for_files(base: VariableUniverse) -> Result<Self, LogicError> {
        Self::with_suffix(base, DUAL_FILE_SUFFIX)
    }

    fn with_suffix(base: VariableUniverse, suffix: &str) -> Result<Self, LogicError> {
        let names = base
            .names()
            .iter()
            .cloned()
            .chain(base.names().iter().map(|n| format!("{n}{suffix}")));
        let combined = VariableUniverse::new(names)?;
        Ok(ExtendedUniverse { base, combined })
    }

    pub fn base(&self) -> &VariableUniverse {
        &self.base
    }

    pub fn combined(&self) -> &VariableUniverse {
        &self.combined
    }

    /// The `(·)°` involution on combined indices.
    pub fn dual(&self, i: usize) -> usize {
        dual_index(self.base.len(), i)
    }
}

fn dual_index(n: usize, i: usize) -> usize {
    assert!(i < 2 * n, "index {i} outside extended universe of {}", 2 * n);
    if i < n {
        i + n
    } else {
        i - n
    }
}

/// `enc(φ) = φ¬ ∧ χ_setup`, kept in its two parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedFormula {
    /// One negative clause per clause of `φ`.
    pub phi_neg: Formula,
    /// `v ∧ v¬ → ⊥` and `v ∨ v¬` for every base variable.
    pub chi_setup: Formula,
}

impl EncodedFormula {
    pub fn to_formula(&self) -> Formula {
        self.phi_neg
            .and(&self.chi_setup)
            .expect("both parts live on the extended universe")
    }
}

impl Theory for EncodedFormula {
    fn width(&self) -> usize {
        self.phi_neg.width()
    }

    fn holds(&self, x: &Model) -> bool {
        self.phi_neg.holds(x) && self.chi_setup.holds(x)
    }
}

fn extend(n: usize, x: &Model, shift: usize) -> impl Iterator<Item = usize> + '_ {
    debug_assert_eq!(x.width(), n);
    x.ones().map(move |i| i + shift)
}

pub fn chi_setup(n: usize) -> Formula {
    let w = 2 * n;
    let mut clauses = Vec::with_capacity(2 * n);
    for v in 0..n {
        let pair = Model::from_indices(w, [v, v + n]);
        clauses.push(Clause::new(pair, Model::empty(w)).expect("same width"));
    }
    for v in 0..n {
        let pair = Model::from_indices(w, [v, v + n]);
        clauses.push(Clause::new(Model::empty(w), pair).expect("same width"));
    }
    Formula::new(w, clauses).expect("same width")
}

/// Replaces each clause `⋀P → ⋁Q` by `⋀(P ∪ {q¬ | q ∈ Q}) → ⊥`.
pub fn encode_formula(phi: &Formula) -> EncodedFormula {
    let n = phi.width();
    let w = 2 * n;
    let clauses = phi
        .clauses()
        .iter()
        .map(|c| {
            let ant = Model::from_indices(w, extend(n, c.antecedent(), 0).chain(extend(n, c.consequent(), n)));
            Clause::new(ant, Model::empty(w)).expect("same width")
        })
        .collect();
    EncodedFormula {
        phi_neg: Formula::new(w, clauses).expect("same width"),
        chi_setup: chi_setup(n),
    }
}

/// `x¬ = x ∪ {p¬ | p ∉ x}`
pub fn encode_model(x: &Model) -> Model {
    let n = x.width();
    Model::from_indices(2 * n, extend(n, x, 0).chain(extend(n, &x.complement(), n)))
}

/// Whether `y` has exactly one of `v`, `v¬` for every base variable.
pub fn is_lifted(y: &Model) -> bool {
    let w = y.width();
    if !w.is_multiple_of(2) {
        return false;
    }
    let n = w / 2;
    (0..n).all(|v| y.contains(v) != y.contains(v + n))
}

/// Inverse of [`encode_model`]; `None` unless `y` is a lifted model.
pub fn decode_model(y: &Model) -> Option<Model> {
    if !is_lifted(y) {
        return None;
    }
    let n = y.width() / 2;
    Some(Model::from_indices(n, (0..n).filter(|v| y.contains(*v))))
}

/// `dec(ψ)`: a dual in the antecedent moves to the consequent as its base
/// variable and vice versa. Clauses that become tautologies are dropped.
pub fn decode_formula(psi: &Formula) -> Result<Formula, LogicError> {
    let w = psi.width();
    if !w.is_multiple_of(2) {
        return Err(LogicError::WidthMismatch {
            expected: w + 1,
            found: w,
        });
    }
    let n = w / 2;
    let mut out = Formula::top(n);
    for c in psi.clauses() {
        let (mut ant, mut con) = (Model::empty(n), Model::empty(n));
        for i in c.antecedent().ones() {
            if i < n {
                ant.insert(i);
            } else {
                con.insert(i - n);
            }
        }
        for i in c.consequent().ones() {
            if i < n {
                con.insert(i);
            } else {
                ant.insert(i - n);
            }
        }
        if ant.is_disjoint(&con) {
            out.push(Clause::new(ant, con)?)?;
        }
    }
    Ok(out)
}

/// `φ¬ ∪ {p ∧ p¬ → ⊥} ∪ {⋀ant(h)∖{p} → p° | h ∈ φ¬, p ∈ ant(h)}`.
///
/// A Horn formula whose models contain the envelope of `enc(φ)`. It only
/// captures one resolution step, so it can be strictly weaker; it is exact
/// when `φ` already lists every clause it entails.
pub fn one_step_envelope(phi: &Formula) -> Formula {
    let n = phi.width();
    let w = 2 * n;
    let enc = encode_formula(phi);
    let mut out = enc.phi_neg.clone();
    for v in 0..n {
        let pair = Model::from_indices(w, [v, v + n]);
        out.push(Clause::new(pair, Model::empty(w)).expect("same width"))
            .expect("same width");
    }
    for h in enc.phi_neg.clauses() {
        for p in h.antecedent().ones() {
            let mut ant = h.antecedent().clone();
            ant.remove(p);
            let con = Model::from_indices(w, [dual_index(n, p)]);
            out.push(Clause::new(ant, con).expect("same width"))
                .expect("same width");
        }
    }
    out
}

/// Answers membership for `enc(φ)` from an oracle for `φ`: models that are
/// not lifted are negative without asking.
pub struct LiftedMembership<'a> {
    inner: &'a mut dyn MembershipOracle,
}

impl<'a> LiftedMembership<'a> {
    pub fn new(inner: &'a mut dyn MembershipOracle) -> Self {
        LiftedMembership { inner }
    }
}

impl MembershipOracle for LiftedMembership<'_> {
    fn width(&self) -> usize {
        2 * self.inner.width()
    }

    fn membership(&mut self, y: &Model) -> Result<Label, OracleError> {
        if y.width() != self.width() {
            return Err(LogicError::WidthMismatch {
                expected: self.width(),
                found: y.width(),
            }
            .into());
        }
        match decode_model(y) {
            Some(x) => self.inner.membership(&x),
            None => Ok(Label::Negative),
        }
    }
}

/// A hypothesis over `V ∪ V¬` read back on `V`: `x ↦ ψ(x¬)`, which is how
/// `dec(ψ)` evaluates.
struct Decoded<'a> {
    psi: &'a dyn Theory,
}

impl Theory for Decoded<'_> {
    fn width(&self) -> usize {
        self.psi.width() / 2
    }

    fn holds(&self, x: &Model) -> bool {
        self.psi.holds(&encode_model(x))
    }
}

/// Membership on `V` answered through a lifted oracle.
struct Lowered<'a> {
    lifted: &'a mut dyn MembershipOracle,
}

impl MembershipOracle for Lowered<'_> {
    fn width(&self) -> usize {
        self.lifted.width() / 2
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        self.lifted.membership(&encode_model(x))
    }
}

/// Horn equivalence for `enc(φ)` built from a plain equivalence oracle for
/// `φ`: asks about `dec(ψ)` and lifts the counterexample.
pub struct LiftedEquivalence<'a> {
    inner: &'a mut dyn EquivalenceOracle,
    queries: u64,
    counterexamples: Vec<Model>,
}

impl<'a> LiftedEquivalence<'a> {
    pub fn new(inner: &'a mut dyn EquivalenceOracle) -> Self {
        LiftedEquivalence {
            inner,
            queries: 0,
            counterexamples: Vec::new(),
        }
    }

    /// Lifted counterexamples handed to the learner so far.
    pub fn counterexamples(&self) -> &[Model] {
        &self.counterexamples
    }
}

impl EquivalenceOracle for LiftedEquivalence<'_> {
    fn equivalence(
        &mut self,
        hypothesis: &dyn Theory,
        membership: &mut dyn MembershipOracle,
    ) -> Result<EqAnswer, OracleError> {
        self.queries += 1;
        let decoded = Decoded { psi: hypothesis };
        let mut lowered = Lowered { lifted: membership };
        match self.inner.equivalence(&decoded, &mut lowered)? {
            EqAnswer::Yes => Ok(EqAnswer::Yes),
            EqAnswer::No(x) => {
                let y = encode_model(&x);
                self.counterexamples.push(y.clone());
                Ok(EqAnswer::No(y))
            }
        }
    }

    fn mode(&self) -> EqMode {
        self.inner.mode()
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

#[derive(Clone, Debug)]
pub struct CnfLearning {
    /// `dec(ψ)` for the final hypothesis `ψ`.
    pub formula: Formula,
    /// The envelope learner's run over `V ∪ V¬`.
    pub run: LearnerResult,
    /// Every lifted counterexample the learner received.
    pub counterexamples: Vec<Model>,
}

/// Learns a CNF equivalent to the target of `mo`/`eo` by running the
/// envelope learner on its encoding. `eo` must be a plain (not Horn)
/// equivalence oracle for the target.
pub fn learn_cnf_via_envelope(
    mo: &mut dyn MembershipOracle,
    eo: &mut dyn EquivalenceOracle,
    universe: &VariableUniverse,
) -> Result<CnfLearning, LearnerError> {
    let ext = ExtendedUniverse::new(universe.clone())?;
    let mut lifted_mo = LiftedMembership::new(mo);
    let mut lifted_eo = LiftedEquivalence::new(eo);
    let run = EnvelopeLearner::new().run(ext.combined(), &mut lifted_mo, &mut lifted_eo)?;
    let formula = decode_formula(&run.hypothesis.to_formula())?;
    Ok(CnfLearning {
        formula,
        run,
        counterexamples: lifted_eo.counterexamples,
    })
}
