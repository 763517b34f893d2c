use std::collections::HashMap;

use super::{LogicError, Model};

/// Ordered set of distinct variable names. Position in the list is the bit
/// position of the variable in every [`Model`] over this universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableUniverse {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VariableUniverse {
    pub fn new<I, S>(names: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut universe = VariableUniverse {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if universe.index.contains_key(&name) {
                return Err(LogicError::DuplicateVariable(name));
            }
            universe.push_unchecked(name);
        }
        if universe.names.is_empty() {
            return Err(LogicError::EmptyUniverse);
        }
        Ok(universe)
    }

    pub(crate) fn growable() -> Self {
        VariableUniverse {
            names: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn push_unchecked(&mut self, name: String) -> usize {
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    /// Returns the index of `name`, declaring it if unseen.
    pub(crate) fn intern(&mut self, name: &str) -> usize {
        match self.index.get(name) {
            Some(i) => *i,
            None => self.push_unchecked(name.to_string()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn model<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<Model, LogicError> {
        let mut m = Model::empty(self.len());
        for n in names {
            let i = self
                .index_of(n)
                .ok_or_else(|| LogicError::UnknownVariable(n.to_string()))?;
            m.insert(i);
        }
        Ok(m)
    }

    /// Names of the variables set in `m`, in universe order.
    pub fn names_in<'a>(&'a self, m: &'a Model) -> impl Iterator<Item = &'a str> + 'a {
        m.ones().map(move |i| self.name(i))
    }
}
