//! Doubling constructions: every state `s` becomes a primed copy `s'` and a
//! double-primed copy `s''`.

use std::collections::BTreeSet;

use super::{EventSet, FactSet};
use crate::error::Result;
use crate::model::{Arrow, Model, ModelKind, State};
use crate::symbol::Symbol;

/// A doubled model with the bookkeeping needed to relate it to its source.
#[derive(Clone, Debug, PartialEq)]
pub struct Doubled {
    pub model: Model,
    /// The double-primed states.
    pub fact: FactSet,
    /// Source state of every doubled state.
    pub copy_of: Vec<usize>,
    /// Source arrow of every doubled arrow.
    pub origin: Vec<usize>,
}

/// The event made of every arrow leaving the fact's states.
pub fn fact_to_event(model: &Model, fact: &FactSet) -> EventSet {
    EventSet {
        name: Symbol::new(&fact.name).unwrap_or_else(|_| Symbol::true_label()),
        arrows: model
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| fact.states.contains(&a.from))
            .map(|(i, _)| i)
            .collect(),
    }
}

const SUFFIXES: [(&str, &str); 4] = [("'", "''"), ("_1", "_2"), ("~a", "~b"), ("#1", "#2")];

fn copy_ids(model: &Model) -> (Vec<Symbol>, Vec<Symbol>, &'static str) {
    let make = |sfx: &str| -> Vec<Symbol> {
        model
            .states
            .iter()
            .map(|s| Symbol::new(format!("{}{sfx}", s.id)).expect("suffix keeps token valid"))
            .collect()
    };
    for (one, two) in SUFFIXES {
        let (a, b) = (make(one), make(two));
        let all: BTreeSet<&Symbol> = a.iter().chain(&b).collect();
        if all.len() == a.len() + b.len() {
            return (a, b, one);
        }
    }
    let n = model.states.len();
    let a = (0..n)
        .map(|i| Symbol::new(format!("d{i}a")).unwrap())
        .collect();
    let b = (0..n)
        .map(|i| Symbol::new(format!("d{i}b")).unwrap())
        .collect();
    (a, b, "a")
}

/// `rule(in_event, from_second)` gives whether the target is the second copy.
fn double(model: &Model, event: &EventSet, rule: impl Fn(bool, bool) -> bool) -> Result<Doubled> {
    event.check(model)?;
    let n = model.states.len();
    let (first, second, sfx) = copy_ids(model);
    let mut states = Vec::with_capacity(2 * n);
    for (ids, _) in [(&first, 0), (&second, 1)] {
        for (s, id) in model.states.iter().zip(ids) {
            states.push(State {
                id: id.clone(),
                trace: s.trace.clone(),
            });
        }
    }
    let mut arrows = Vec::with_capacity(2 * model.arrows.len());
    let mut origin = Vec::with_capacity(2 * model.arrows.len());
    for (k, a) in model.arrows.iter().enumerate() {
        let in_event = event.arrows.contains(&k);
        for from_second in [false, true] {
            let to_second = rule(in_event, from_second);
            arrows.push(Arrow {
                from: a.from + if from_second { n } else { 0 },
                to: a.to + if to_second { n } else { 0 },
                ..a.clone()
            });
            origin.push(k);
        }
    }
    let kind = match model.kind {
        ModelKind::Fomm => ModelKind::Hmm,
        k => k,
    };
    let mut out = Model {
        kind,
        states,
        arrows,
        initial: model.initial,
        ..model.clone()
    };
    out.note(
        "initial",
        format!(
            "{} chosen; {} is equally justified",
            first[model.initial], second[model.initial]
        ),
    );
    out.note("doubled-suffix", sfx);
    Ok(Doubled {
        model: out,
        fact: FactSet {
            name: event.name.to_string(),
            states: (n..2 * n).collect(),
        },
        copy_of: (0..2 * n).map(|i| i % n).collect(),
        origin,
    })
}

/// The fact "the event has just occurred": an event arrow always leads into
/// the double-primed copy, any other arrow into the primed copy. The fact
/// holds one step after each occurrence.
pub fn event_to_fact(model: &Model, event: &EventSet) -> Result<Doubled> {
    double(model, event, |in_event, _| in_event)
}

/// The fact "the event has occurred an odd number of times": event arrows
/// switch copies, other arrows stay.
pub fn parity_model(model: &Model, event: &EventSet) -> Result<Doubled> {
    double(model, event, |in_event, from_second| {
        in_event != from_second
    })
}
