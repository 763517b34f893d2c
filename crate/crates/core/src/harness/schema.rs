use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::logic::{Consequent, MetaClause, VariableUniverse};
use crate::oracle::{OneHotBlock, SampleSpace};

/// One discrete attribute, binarized into one variable per value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    /// Variable names, in bit order.
    pub values: Vec<String>,
    /// Whether the all-zero block (value unknown) is a legal setting.
    #[serde(default)]
    pub allow_unknown: bool,
    /// Sentence fragments per value, used by template-based oracles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phrases: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknown_phrase: Option<String>,
}

/// Ordered attributes whose values make up the variable universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub attributes: Vec<Attribute>,
    /// Name of the attribute that carries the classifier's label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<String>,
}

const BIOGRAPHIES_SCHEMA: &str = include_str!("../../data/biographies_schema.json");

impl AttributeSchema {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let s: AttributeSchema = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The 26-variable period/continent/occupation/gender schema.
    pub fn biographies() -> Self {
        Self::from_json(BIOGRAPHIES_SCHEMA).expect("bundled schema is valid")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.attributes.is_empty() {
            return Err(HarnessError::Config("schema has no attributes".into()));
        }
        let mut seen = HashSet::new();
        for a in &self.attributes {
            if a.values.is_empty() {
                return Err(HarnessError::Config(format!("attribute `{}` has no values", a.name)));
            }
            for v in &a.values {
                if !seen.insert(v.as_str()) {
                    return Err(HarnessError::Config(format!("value `{v}` appears twice in the schema")));
                }
            }
            if a.phrases.as_ref().is_some_and(|p| p.len() != a.values.len()) {
                return Err(HarnessError::Config(format!(
                    "attribute `{}` has {} values but a different number of phrases",
                    a.name,
                    a.values.len()
                )));
            }
        }
        if let Some(label) = &self.label {
            if !self.attributes.iter().any(|a| &a.name == label) {
                return Err(HarnessError::Config(format!("label attribute `{label}` not in schema")));
            }
        }
        Ok(())
    }

    pub fn universe(&self) -> Result<VariableUniverse, HarnessError> {
        schema_to_universe(self)
    }

    /// One-hot blocks in declaration order; unknown-capable attributes may
    /// sample the all-zero block.
    pub fn sample_space(&self) -> SampleSpace {
        let mut next = 0;
        let blocks = self
            .attributes
            .iter()
            .map(|a| {
                let indices = (next..next + a.values.len()).collect();
                next += a.values.len();
                OneHotBlock {
                    indices,
                    allow_empty: a.allow_unknown,
                }
            })
            .collect();
        SampleSpace::OneHotGroups(blocks)
    }
}

/// One variable per attribute value, in declaration order.
pub fn schema_to_universe(s: &AttributeSchema) -> Result<VariableUniverse, HarnessError> {
    s.validate()?;
    let names = s.attributes.iter().flat_map(|a| a.values.iter().cloned());
    Ok(VariableUniverse::new(names)?)
}

/// `nurse & male -> F` style rendering; `F` stands for `⊥`, `T` for an
/// empty conjunction.
pub fn render_rule(m: &MetaClause, universe: &VariableUniverse) -> String {
    let ant: Vec<&str> = universe.names_in(m.antecedent()).collect();
    let con = match m.consequent() {
        Consequent::Falsum => "F".to_string(),
        Consequent::Conjunction(q) if q.is_empty() => "T".to_string(),
        Consequent::Conjunction(q) => universe.names_in(q).collect::<Vec<_>>().join(" & "),
    };
    if ant.is_empty() {
        format!("-> {con}")
    } else {
        format!("{} -> {con}", ant.join(" & "))
    }
}
