//! The minimal model: a forward part that predicts only the future and a
//! backward part that predicts only the past, joined at a fresh initial
//! state.
//!
//! Forward part states are prefixed `f:`, backward part states `p:`. The
//! fresh state `init` copies the outgoing arrows of the forward part's
//! initial state; backward arrows leaving the backward initial state are
//! redirected into `init`. Backward arrows are stored in forward orientation
//! (`v -> u` when `v` precedes `u`) and carry inbound probabilities. Once a
//! walk leaves `init` it never returns: the forward part is a black hole and
//! the backward part a white peak.

use std::collections::BTreeMap;

use super::{belief_determinize, minimize_forward, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::inversion::invert_chain;
use crate::model::{Arrow, Model, State};
use crate::symbol::Symbol;

pub const INIT_ID: &str = "init";

fn reduce(model: &Model, depth: usize) -> Result<Model> {
    let det = belief_determinize(model, depth, DEFAULT_STATE_CAP)?;
    Ok(minimize_forward(&det, depth.max(det.states.len())).0)
}

fn prefixed(prefix: &str, s: &State) -> Result<State> {
    Ok(State {
        id: Symbol::new(format!("{prefix}{}", s.id))?,
        trace: s.trace.clone(),
    })
}

pub fn minimal_model(model: &Model, depth: usize) -> Result<Model> {
    let forward = reduce(model, depth)?;
    let backward = reduce(&invert_chain(model)?, depth)?;

    let mut states = vec![State {
        id: Symbol::new(INIT_ID)?,
        trace: model.states[model.initial].trace.clone(),
    }];
    let f_off = states.len();
    for s in &forward.states {
        states.push(prefixed("f:", s)?);
    }
    let p_off = states.len();
    for s in &backward.states {
        states.push(prefixed("p:", s)?);
    }

    let mut arrows = Vec::new();
    for a in &forward.arrows {
        arrows.push(Arrow {
            from: f_off + a.from,
            to: f_off + a.to,
            ..a.clone()
        });
        if a.from == forward.initial {
            arrows.push(Arrow {
                from: 0,
                to: f_off + a.to,
                ..a.clone()
            });
        }
    }
    for a in &backward.arrows {
        arrows.push(Arrow {
            from: p_off + a.to,
            to: p_off + a.from,
            ..a.clone()
        });
        if a.from == backward.initial {
            arrows.push(Arrow {
                from: p_off + a.to,
                to: 0,
                ..a.clone()
            });
        }
    }

    let mut notes = BTreeMap::new();
    notes.insert(
        "forward-initial".into(),
        format!("f:{}", forward.states[forward.initial].id),
    );
    notes.insert(
        "backward-initial".into(),
        format!("p:{}", backward.states[backward.initial].id),
    );
    notes.insert("backward-probabilities".into(), "inbound".into());
    let out = Model {
        kind: forward.kind,
        obs: model.obs.clone(),
        labels: model.labels.clone(),
        states,
        initial: 0,
        arrows,
        priorities: BTreeMap::new(),
        notes,
    };
    out.check_structure()?;
    Ok(out)
}

fn split(joined: &Model, prefix: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let init = joined
        .state_index(INIT_ID)
        .ok_or_else(|| Error::Structure("joined model has no init state".into()))?;
    let part: Vec<usize> = (0..joined.states.len())
        .filter(|&s| joined.states[s].id.as_str().starts_with(prefix))
        .collect();
    let mut remap = vec![usize::MAX; joined.states.len()];
    remap[init] = 0;
    for (k, &s) in part.iter().enumerate() {
        remap[s] = k + 1;
    }
    let mut order = vec![init];
    order.extend(part);
    Ok((order, remap))
}

/// The forward part as a standalone model starting at `init`.
pub fn forward_part(joined: &Model) -> Result<Model> {
    let (order, remap) = split(joined, "f:")?;
    let arrows = joined
        .arrows
        .iter()
        .filter(|a| remap[a.from] != usize::MAX && remap[a.to] != usize::MAX && remap[a.to] != 0)
        .map(|a| Arrow {
            from: remap[a.from],
            to: remap[a.to],
            ..a.clone()
        })
        .collect();
    Ok(Model {
        states: order.iter().map(|&s| joined.states[s].clone()).collect(),
        arrows,
        initial: 0,
        notes: BTreeMap::new(),
        ..joined.clone()
    })
}

/// The backward part turned back into a past-predicting model: arrows point
/// from a state to its predecessors, starting at `init`.
pub fn backward_part(joined: &Model) -> Result<Model> {
    let (order, remap) = split(joined, "p:")?;
    let arrows = joined
        .arrows
        .iter()
        .filter(|a| remap[a.from] != usize::MAX && remap[a.to] != usize::MAX && remap[a.from] != 0)
        .map(|a| Arrow {
            from: remap[a.to],
            to: remap[a.from],
            ..a.clone()
        })
        .collect();
    Ok(Model {
        states: order.iter().map(|&s| joined.states[s].clone()).collect(),
        arrows,
        initial: 0,
        notes: BTreeMap::new(),
        ..joined.clone()
    })
}
