//! Model-to-model transformations.

mod determinize;
mod doubling;
mod minimal;
mod minimize;
mod quotient;

pub use determinize::{belief_determinize, belief_determinize_from, DEFAULT_STATE_CAP};
pub use doubling::{event_to_fact, fact_to_event, parity_model, Doubled};
pub use minimal::{backward_part, forward_part, minimal_model, INIT_ID};
pub use minimize::minimize_forward;
pub use quotient::quotient;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::symbol::Symbol;

/// A named set of arrows (indices into `model.arrows`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSet {
    pub name: Symbol,
    pub arrows: BTreeSet<usize>,
}

impl EventSet {
    /// All arrows carrying `label`, named after it.
    pub fn by_label(model: &Model, label: &Symbol) -> EventSet {
        EventSet {
            name: label.clone(),
            arrows: model
                .arrows
                .iter()
                .enumerate()
                .filter(|(_, a)| &a.label == label)
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn all(model: &Model, name: Symbol) -> EventSet {
        EventSet {
            name,
            arrows: (0..model.arrows.len()).collect(),
        }
    }

    /// Arrows given as `(from, label, to)` ids. Every triple must match at
    /// least one arrow.
    pub fn from_triples(
        model: &Model,
        name: Symbol,
        triples: &[(String, String, String)],
    ) -> Result<EventSet> {
        let mut arrows = BTreeSet::new();
        for (f, l, t) in triples {
            let from = model.require_state(f)?;
            let to = model.require_state(t)?;
            let before = arrows.len();
            arrows.extend(
                model
                    .arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.from == from && a.to == to && a.label.as_str() == l)
                    .map(|(i, _)| i),
            );
            if arrows.len() == before {
                return Err(Error::Structure(format!("no arrow {f}-{l}->{t}")));
            }
        }
        Ok(EventSet { name, arrows })
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        match self.arrows.iter().find(|&&i| i >= model.arrows.len()) {
            Some(i) => Err(Error::Structure(format!(
                "event {} refers to missing arrow {i}",
                self.name
            ))),
            None => Ok(()),
        }
    }
}

/// A named set of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactSet {
    pub name: String,
    pub states: BTreeSet<usize>,
}

/// Disjoint classes of state ids covering a model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub classes: Vec<Vec<Symbol>>,
}

impl Partition {
    pub fn identity(model: &Model) -> Partition {
        Partition {
            classes: model.states.iter().map(|s| vec![s.id.clone()]).collect(),
        }
    }

    /// Class index of every state. Checks that classes are non-empty,
    /// disjoint and cover every state.
    pub fn class_of(&self, model: &Model) -> Result<Vec<usize>> {
        let mut class = vec![usize::MAX; model.states.len()];
        for (c, members) in self.classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::Partition(format!("class {c} is empty")));
            }
            for id in members {
                let s = model
                    .state_index(id.as_str())
                    .ok_or_else(|| Error::Partition(format!("unknown state {id}")))?;
                if class[s] != usize::MAX {
                    return Err(Error::Partition(format!("state {id} is in two classes")));
                }
                class[s] = c;
            }
        }
        if let Some(s) = class.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Partition(format!(
                "state {} is in no class",
                model.states[s].id
            )));
        }
        Ok(class)
    }
}
