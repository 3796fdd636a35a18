use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::Literal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "+",
            Polarity::Negative => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDecl {
    pub arity: usize,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
}

/// Predicate polarities and symbol arities. This is the table that fixes which
/// literals are positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    predicates: BTreeMap<String, PredicateDecl>,
    #[serde(default)]
    functions: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if self.predicates.contains_key(name) || self.functions.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn declare_predicate(
        &mut self,
        name: impl Into<String>,
        arity: usize,
        polarity: Polarity,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        self.ensure_fresh(&name)?;
        self.predicates.insert(name, PredicateDecl { arity, polarity });
        Ok(())
    }

    pub fn declare_function(
        &mut self,
        name: impl Into<String>,
        arity: usize,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        self.ensure_fresh(&name)?;
        self.functions.insert(name, arity);
        Ok(())
    }

    /// Builder-style helpers for tests and examples.
    pub fn with_predicate(mut self, name: &str, arity: usize, polarity: Polarity) -> Self {
        self.declare_predicate(name, arity, polarity)
            .expect("duplicate declaration");
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.declare_function(name, arity)
            .expect("duplicate declaration");
        self
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.get(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &PredicateDecl)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.functions()
            .filter(|(_, a)| *a == 0)
            .map(|(name, _)| name)
    }

    pub fn set_polarity(&mut self, pred: &str, polarity: Polarity) -> Result<(), SignatureError> {
        match self.predicates.get_mut(pred) {
            Some(decl) => {
                decl.polarity = polarity;
                Ok(())
            }
            None => Err(SignatureError::UndeclaredPredicate(pred.to_string())),
        }
    }

    pub fn predicate_polarity(&self, pred: &str) -> Result<Polarity, SignatureError> {
        self.predicates
            .get(pred)
            .map(|d| d.polarity)
            .ok_or_else(|| SignatureError::UndeclaredPredicate(pred.to_string()))
    }

    /// Polarity of a literal: positive exactly for the members of 𝒫, i.e. plain
    /// atoms of positive predicates and negated atoms of negative ones.
    pub fn literal_polarity(&self, lit: &Literal) -> Result<Polarity, SignatureError> {
        let base = self.predicate_polarity(&lit.pred)?;
        Ok(if lit.negated { base.flip() } else { base })
    }

    pub fn is_positive_literal(&self, lit: &Literal) -> Result<bool, SignatureError> {
        Ok(self.literal_polarity(lit)? == Polarity::Positive)
    }
}
