//! Reachability structure: white peaks, black holes and redundant states.
//!
//! An arrow counts as an edge whenever its effective upper probability is
//! positive, so arrows that merely *may* be used still connect states.
//!
//! Both sets are returned in their maximal form. Every black hole is a subset of
//! the states that cannot reach the initial state, and every white peak is a
//! subset of the states that the initial state cannot reach.

use std::collections::{BTreeSet, VecDeque};

use crate::model::Model;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub white_peak: BTreeSet<usize>,
    pub black_hole: BTreeSet<usize>,
    /// States that are both: they can neither be entered nor left.
    pub redundant: BTreeSet<usize>,
}

impl StructureReport {
    pub fn ids(model: &Model, set: &BTreeSet<usize>) -> Vec<String> {
        let mut ids: Vec<String> = set
            .iter()
            .map(|&i| model.states[i].id.to_string())
            .collect();
        ids.sort();
        ids
    }
}

fn edges(model: &Model) -> impl Iterator<Item = (usize, usize)> + '_ {
    model
        .arrows
        .iter()
        .filter(|a| a.effective().hi() > 0.0)
        .map(|a| (a.from, a.to))
}

/// States reachable from `start` (inclusive) following edges forward, or
/// backward when `reverse` is set.
pub(crate) fn reachable(model: &Model, start: usize, reverse: bool) -> Vec<bool> {
    let n = model.states.len();
    let mut adj = vec![Vec::new(); n];
    for (from, to) in edges(model) {
        if reverse {
            adj[to].push(from);
        } else {
            adj[from].push(to);
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(s) = queue.pop_front() {
        for &t in &adj[s] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// States from which no path leads back to the initial state.
pub fn find_black_hole(model: &Model) -> BTreeSet<usize> {
    let reaches_initial = reachable(model, model.initial, true);
    (0..model.states.len())
        .filter(|&s| !reaches_initial[s])
        .collect()
}

/// States that cannot be reached from the initial state.
pub fn find_white_peak(model: &Model) -> BTreeSet<usize> {
    let from_initial = reachable(model, model.initial, false);
    (0..model.states.len())
        .filter(|&s| !from_initial[s])
        .collect()
}

pub fn analyze(model: &Model) -> StructureReport {
    let white_peak = find_white_peak(model);
    let black_hole = find_black_hole(model);
    let redundant = white_peak.intersection(&black_hole).copied().collect();
    StructureReport {
        white_peak,
        black_hole,
        redundant,
    }
}

/// Removes the states that are both white peak and black hole, together with
/// their arrows. Outgoing-probability deficits this leaves behind can only sit
/// inside white peaks, where validation reports them as warnings.
pub fn remove_redundant(model: &Model) -> Model {
    let report = analyze(model);
    if report.redundant.is_empty() {
        return model.clone();
    }
    let keep: Vec<bool> = (0..model.states.len())
        .map(|s| !report.redundant.contains(&s))
        .collect();
    model.retain_states(&keep)
}
