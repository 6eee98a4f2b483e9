use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An interned identifier: observations, actions, event labels and state ids
/// are all non-empty tokens without whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

pub type ObsSymbol = Symbol;
pub type ActSymbol = Symbol;
pub type EventLabel = Symbol;

/// The single label of FOMM and HMM models: the event that occurs at every step.
pub const TRUE_LABEL: &str = "true";

impl Symbol {
    pub fn new(s: impl AsRef<str>) -> Result<Self> {
        let s = s.as_ref();
        if !is_token(s) {
            return Err(Error::Symbol(s.to_string()));
        }
        Ok(Symbol(Arc::from(s)))
    }

    pub fn true_label() -> Self {
        Symbol(Arc::from(TRUE_LABEL))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// Builds a symbol from a literal known to be a valid token.
///
/// Panics on invalid input; intended for tests and examples.
pub fn sym(s: &str) -> Symbol {
    Symbol::new(s).unwrap_or_else(|_| panic!("invalid symbol literal {s:?}"))
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}
