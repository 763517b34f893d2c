use std::cmp::Ordering;
use std::fmt;

use super::LogicError;

const WORD: usize = 64;

/// A subset of the variable universe, stored as a fixed-width bit vector.
///
/// Bit `i` is set iff variable `i` belongs to the set. The same type is used
/// for interpretations (models) and for the variable sets that make up clause
/// antecedents and consequents, since both are subsets of `V`.
///
/// Ordering is lexicographic on the bit string `b0 b1 ... b(n-1)`: the first
/// differing position decides, and the model with `0` there sorts first. The
/// empty model is therefore the smallest model of a given width.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Model {
    width: usize,
    words: Vec<u64>,
}

impl Model {
    pub fn empty(width: usize) -> Self {
        Model {
            width,
            words: vec![0; width.div_ceil(WORD)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut m = Model::empty(width);
        for (i, w) in m.words.iter_mut().enumerate() {
            let remaining = width - i * WORD;
            *w = if remaining >= WORD {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        m
    }

    /// Builds a model from variable indices.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut m = Model::empty(width);
        for i in indices {
            m.insert(i);
        }
        m
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Model::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Parses a string of `0`/`1` characters, position `i` being variable `i`.
    pub fn parse_bits(s: &str) -> Result<Self, LogicError> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(LogicError::Parse(format!("invalid bit character {c:?} in {s:?}"))),
            }
        }
        Ok(Model::from_bools(&bits))
    }

    /// The `index`-th model in lexicographic order, for `index < 2^width`.
    pub(crate) fn nth_lexicographic(width: usize, index: u64) -> Self {
        debug_assert!(width <= 63);
        let mut m = Model::empty(width);
        for j in 0..width {
            if (index >> (width - 1 - j)) & 1 == 1 {
                m.insert(j);
            }
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, i: usize) -> bool {
        assert!(
            i < self.width,
            "variable index {i} out of range for width {}",
            self.width
        );
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.width,
            "variable index {i} out of range for width {}",
            self.width
        );
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(
            i < self.width,
            "variable index {i} out of range for width {}",
            self.width
        );
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    /// Number of variables in the set.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |i| self.contains(*i))
    }

    fn check(&self, other: &Model) {
        assert_eq!(
            self.width, other.width,
            "model width mismatch: {} vs {}",
            self.width, other.width
        );
    }

    pub fn same_width(&self, other: &Model) -> Result<(), LogicError> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(LogicError::WidthMismatch {
                expected: self.width,
                found: other.width,
            })
        }
    }

    /// Bitwise AND. Panics on width mismatch; see [`super::intersect`] for
    /// the checked form.
    pub fn meet(&self, other: &Model) -> Model {
        self.check(other);
        Model {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn join(&self, other: &Model) -> Model {
        self.check(other);
        Model {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn difference(&self, other: &Model) -> Model {
        self.check(other);
        Model {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    /// Relative complement `V \ self`.
    pub fn complement(&self) -> Model {
        Model::full(self.width).difference(self)
    }

    pub fn is_subset(&self, other: &Model) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &Model) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &Model) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.width).map(|i| self.contains(i)).collect()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.width)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }
}

impl Ord for Model {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    let first = (a ^ b).trailing_zeros();
                    return if a >> first & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Model {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.ones().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
