//! Belief determinization: states become beliefs, so the successor for a
//! label and an observation is unique.

use std::collections::{BTreeMap, VecDeque};

use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::model::{Arrow, Model, ModelKind, State, TraceSpec};
use crate::prob::{format_prob, ProbInterval, EPS};
use crate::symbol::{ObsSymbol, Symbol};

pub const DEFAULT_STATE_CAP: usize = 10_000;

struct Node {
    belief: Belief,
    /// Observation seen on entering; `None` for an initial belief whose
    /// observation is not determined.
    obs: Option<ObsSymbol>,
}

fn same(a: &Node, b: &Node) -> bool {
    a.obs == b.obs && a.belief.approx_eq(&b.belief, EPS)
}

fn label_prob(model: &Model, belief: &Belief, label: &Symbol) -> ProbInterval {
    let mut lps = Vec::new();
    for (s, p) in belief.iter() {
        let lp = model.agent_interval(s, label).unwrap_or(ProbInterval::ZERO);
        lps.push((p, lp));
    }
    let first = lps[0].1;
    if lps.iter().all(|(_, lp)| lp.approx_eq(&first, EPS)) {
        first
    } else if lps.iter().all(|(_, lp)| lp.is_point()) {
        let mean: f64 = lps.iter().map(|(p, lp)| p * lp.lo()).sum();
        ProbInterval::clamped(mean, mean)
    } else {
        lps.iter()
            .map(|(_, lp)| *lp)
            .reduce(|a, b| a.hull(&b))
            .unwrap_or(ProbInterval::ZERO)
    }
}

/// Determinizes from a point belief on the initial state.
pub fn belief_determinize(model: &Model, depth: usize, cap: usize) -> Result<Model> {
    belief_determinize_from(model, Belief::point(model.initial), depth, cap)
}

/// Breadth-first expansion of reachable beliefs up to `depth` steps. Beliefs
/// closer than 1e-9 with the same entering observation are merged. Nodes at
/// the depth limit keep no outgoing arrows. Fails with `CapExceeded`
/// (carrying the partial model) when more than `cap` beliefs appear.
pub fn belief_determinize_from(
    model: &Model,
    initial: Belief,
    depth: usize,
    cap: usize,
) -> Result<Model> {
    if let Some(a) = model.arrows.iter().find(|a| !a.arrow_prob.is_point()) {
        return Err(Error::NotPoint(format!(
            "world probability {} from {}",
            a.arrow_prob, model.states[a.from].id
        )));
    }
    if let Some(s) = model.states.iter().find(|s| !s.trace.is_point()) {
        return Err(Error::NotPoint(format!("trace of {}", s.id)));
    }
    let colours: Vec<Option<&ObsSymbol>> = initial
        .support()
        .map(|s| model.states[s].trace.deterministic())
        .collect();
    let init_obs = match colours.first() {
        Some(Some(first)) if colours.iter().all(|c| c == &Some(*first)) => Some((*first).clone()),
        _ => None,
    };
    let mut nodes = vec![Node {
        belief: initial,
        obs: init_obs,
    }];
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut capped = false;
    while let Some((n, level)) = queue.pop_front() {
        if level >= depth {
            continue;
        }
        let belief = nodes[n].belief.clone();
        let labels: Vec<Symbol> = model
            .labels
            .iter()
            .filter(|l| {
                belief
                    .support()
                    .any(|s| model.outgoing(s).any(|(_, a)| &a.label == *l))
            })
            .cloned()
            .collect();
        for label in labels {
            let mut weights: BTreeMap<ObsSymbol, BTreeMap<usize, f64>> = BTreeMap::new();
            for (s, p) in belief.iter() {
                for (_, a) in model.outgoing(s).filter(|(_, a)| a.label == label) {
                    for (o, tp) in &model.states[a.to].trace.entries {
                        let w = p * a.arrow_prob.lo() * tp.lo();
                        if w > 0.0 {
                            *weights
                                .entry(o.clone())
                                .or_default()
                                .entry(a.to)
                                .or_default() += w;
                        }
                    }
                }
            }
            let total: f64 = weights.values().flat_map(|m| m.values()).sum();
            if total <= 0.0 {
                continue;
            }
            let lp = label_prob(model, &belief, &label);
            for (obs, w) in weights {
                let mass: f64 = w.values().sum();
                let next = Node {
                    belief: Belief::from_weights(w)?,
                    obs: Some(obs),
                };
                let target = match nodes.iter().position(|m| same(m, &next)) {
                    Some(t) => t,
                    None => {
                        if nodes.len() >= cap {
                            capped = true;
                            continue;
                        }
                        nodes.push(next);
                        queue.push_back((nodes.len() - 1, level + 1));
                        nodes.len() - 1
                    }
                };
                arrows.push(Arrow {
                    from: n,
                    label: label.clone(),
                    to: target,
                    label_prob: lp,
                    arrow_prob: ProbInterval::clamped(mass / total, mass / total),
                });
            }
        }
    }

    let states = nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let trace = match &node.obs {
                Some(o) => TraceSpec::point(o.clone()),
                None => {
                    let mut mix: BTreeMap<ObsSymbol, f64> = BTreeMap::new();
                    for (s, p) in node.belief.iter() {
                        for (o, tp) in &model.states[s].trace.entries {
                            *mix.entry(o.clone()).or_default() += p * tp.lo();
                        }
                    }
                    TraceSpec::from_entries(
                        mix.into_iter()
                            .map(|(o, p)| (o, ProbInterval::clamped(p, p))),
                    )
                }
            };
            State {
                id: Symbol::new(format!("b{i}")).expect("valid id"),
                trace,
            }
        })
        .collect();
    let kind = if model.kind.is_single_label() {
        ModelKind::Hmm
    } else {
        model.kind
    };
    let mut out = Model {
        kind,
        obs: model.obs.clone(),
        labels: model.labels.clone(),
        states,
        initial: 0,
        arrows,
        priorities: model.priorities.clone(),
        notes: BTreeMap::new(),
    };
    for (i, node) in nodes.iter().enumerate() {
        let desc: Vec<String> = node
            .belief
            .iter()
            .map(|(s, p)| format!("{}:{}", model.states[s].id, format_prob(p)))
            .collect();
        out.note(format!("belief.b{i}"), desc.join(","));
    }
    if capped {
        return Err(Error::CapExceeded {
            cap,
            partial: Box::new(out),
        });
    }
    Ok(out)
}
