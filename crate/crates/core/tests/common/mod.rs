//! Test-side reference implementations on plain `u64` bitmasks, kept apart
//! from the library so they can check it.
#![allow(dead_code)]

use std::collections::BTreeSet;

use horn_envelope::logic::{Clause, Consequent, Formula, MetaClause, Model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mask(m: &Model) -> u64 {
    m.ones().fold(0, |acc, i| acc | 1 << i)
}

pub fn model(n: usize, bits: u64) -> Model {
    Model::from_indices(n, (0..n).filter(|i| bits >> i & 1 == 1))
}

pub fn all(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// A CNF as `(antecedent, consequent)` masks; a clause holds in `x` unless
/// its antecedent is inside `x` and its consequent is disjoint from it.
#[derive(Clone, Debug)]
pub struct Cnf {
    pub n: usize,
    pub clauses: Vec<(u64, u64)>,
}

impl Cnf {
    pub fn random(rng: &mut impl Rng, n: usize, horn: bool) -> Self {
        let count = rng.gen_range(1..=n + 1);
        let clauses = (0..count).map(|_| random_clause(rng, n, horn)).collect();
        Cnf { n, clauses }
    }

    pub fn holds(&self, x: u64) -> bool {
        self.clauses.iter().all(|&(p, q)| p & !x != 0 || q & x != 0)
    }

    pub fn models(&self) -> Vec<u64> {
        (0..=all(self.n)).filter(|&x| self.holds(x)).collect()
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(|&(_, q)| q.count_ones() <= 1)
    }

    pub fn to_formula(&self) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .map(|&(p, q)| Clause::new(model(self.n, p), model(self.n, q)).unwrap())
            .collect();
        Formula::new(self.n, clauses).unwrap()
    }
}

fn random_clause(rng: &mut impl Rng, n: usize, horn: bool) -> (u64, u64) {
    loop {
        let mut p = 0u64;
        let mut q = 0u64;
        for _ in 0..rng.gen_range(0..=2) {
            p |= 1 << rng.gen_range(0..n);
        }
        let max_q = if horn { 1 } else { 3 };
        for _ in 0..rng.gen_range(0..=max_q) {
            q |= 1 << rng.gen_range(0..n);
        }
        if horn && q.count_ones() > 1 {
            continue;
        }
        q &= !p;
        if p | q != 0 {
            return (p, q);
        }
    }
}

pub fn random_cnf(seed: u64, n: usize, horn: bool) -> Cnf {
    Cnf::random(&mut rng(seed), n, horn)
}

/// Intersections of all non-empty subfamilies, by fixpoint.
pub fn naive_closure(models: &[u64]) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = models.iter().copied().collect();
    loop {
        let items: Vec<u64> = set.iter().copied().collect();
        let mut grew = false;
        for &a in &items {
            for &b in &items {
                grew |= set.insert(a & b);
            }
        }
        if !grew {
            return set;
        }
    }
}

/// Falsified iff the antecedent is inside `x` and the consequent is `⊥` or
/// not inside `x`.
pub fn metaclause_holds(m: &MetaClause, x: u64) -> bool {
    let p = mask(m.antecedent());
    if p & !x != 0 {
        return true;
    }
    match m.consequent() {
        Consequent::Falsum => false,
        Consequent::Conjunction(q) => mask(q) & !x == 0,
    }
}

pub fn metaclause_models(n: usize, h: &[MetaClause]) -> BTreeSet<u64> {
    (0..=all(n))
        .filter(|&x| h.iter().all(|m| metaclause_holds(m, x)))
        .collect()
}

/// Left saturation: every antecedent falsifies its own metaclause and no
/// other. Right saturation: the consequent is `⊥` if no model of `H`
/// contains the antecedent, else exactly what `H` implies beyond it.
pub fn saturated(n: usize, h: &[MetaClause]) -> bool {
    let models = metaclause_models(n, h);
    h.iter().enumerate().all(|(i, hi)| {
        let a = mask(hi.antecedent());
        let left = !metaclause_holds(hi, a) && h.iter().enumerate().all(|(j, hj)| i == j || metaclause_holds(hj, a));
        let above: Vec<u64> = models.iter().copied().filter(|&y| a & !y == 0).collect();
        let right = match hi.consequent() {
            Consequent::Falsum => above.is_empty(),
            Consequent::Conjunction(q) => {
                !above.is_empty() && mask(q) == above.iter().fold(all(n), |acc, y| acc & y) & !a
            }
        };
        left && right
    })
}

pub fn set_of(models: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    models.into_iter().collect()
}
