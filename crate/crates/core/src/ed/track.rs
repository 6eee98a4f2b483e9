use std::collections::BTreeMap;

use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::events::{EventStream, Occurrence};
use crate::model::Model;
use crate::oracle::Collision;
use crate::prob::EPS;
use crate::symbol::{EventLabel, ObsSymbol};
use crate::trajectory::Trajectory;

#[derive(Clone, Debug, PartialEq)]
pub struct TrackResult {
    /// Belief at every step.
    pub beliefs: Vec<Belief>,
    /// Last observation seen in each memory-flagged state, as of the end.
    pub memory: BTreeMap<usize, ObsSymbol>,
    /// What the memory of the most likely state held at each step, before
    /// that step's observation was stored.
    pub recalled: Vec<Option<ObsSymbol>>,
    pub warnings: Vec<String>,
    /// Occurrences that moved the belief.
    pub applied: Vec<Occurrence>,
}

impl TrackResult {
    /// The answer to "where am I now": the final belief.
    pub fn current(&self) -> Option<&Belief> {
        self.beliefs.last()
    }
}

/// Keeps only states whose trace allows `obs`.
fn consistent(model: &Model, belief: &Belief, obs: &ObsSymbol) -> Option<Belief> {
    Belief::from_weights(
        belief
            .iter()
            .filter(|(s, _)| model.states[*s].trace.prob(obs).hi() > 0.0),
    )
    .ok()
}

/// Moves the belief along `label`. States without the event drop out; `None`
/// when no state can take it.
fn fire(model: &Model, belief: &Belief, label: &EventLabel) -> Option<Belief> {
    let mut next: BTreeMap<usize, f64> = BTreeMap::new();
    let mut approximate = belief.approximate;
    for (s, p) in belief.iter() {
        for (_, a) in model.outgoing(s).filter(|(_, a)| &a.label == label) {
            approximate |= !a.label_prob.is_point() || !a.arrow_prob.is_point();
            *next.entry(a.to).or_default() += p * a.label_prob.midpoint() * a.arrow_prob.midpoint();
        }
    }
    let mut out = Belief::from_weights(next).ok()?;
    out.approximate = approximate;
    Some(out)
}

fn remember(
    model: &Model,
    belief: &Belief,
    obs: &ObsSymbol,
    memory: &mut BTreeMap<usize, ObsSymbol>,
) {
    let top = belief.max_prob();
    for (s, p) in belief.iter() {
        if model.states[s].trace.memory && p >= top - EPS {
            memory.insert(s, obs.clone());
        }
    }
}

/// Follows an ED model along a trajectory, starting from its initial state.
pub fn track(
    model: &Model,
    trajectory: &Trajectory,
    events: &EventStream,
    collision: Collision,
) -> Result<TrackResult> {
    track_from(
        model,
        trajectory,
        events,
        collision,
        Belief::point(model.initial),
        0,
    )
}

/// Follows an ED model from `start` with belief `initial`. The state changes
/// only when a monitored event occurs; an occurrence at time `t` moves the
/// model between steps `t` and `t + 1`. Every belief is restricted to states
/// whose trace allows the current observation. An event no believed state
/// can take leaves the belief as it is and is reported as a warning.
pub fn track_from(
    model: &Model,
    trajectory: &Trajectory,
    events: &EventStream,
    collision: Collision,
    initial: Belief,
    start: usize,
) -> Result<TrackResult> {
    let steps = &trajectory.steps;
    let mut warnings = Vec::new();
    let mut applied = Vec::new();
    let mut memory = BTreeMap::new();
    let mut recalled = Vec::new();
    let mut beliefs = Vec::new();
    if start >= steps.len() {
        return Ok(TrackResult {
            beliefs,
            memory,
            recalled,
            warnings,
            applied,
        });
    }
    let mut belief = consistent(model, &initial, &steps[start].obs)
        .ok_or(Error::TrackingFailed { time: start })?;
    for o in events
        .iter()
        .filter(|o| o.time + 1 >= steps.len() && o.time >= start)
    {
        warnings.push(format!(
            "{} at {} is past the end of the trajectory",
            o.label, o.time
        ));
    }
    for (t, step) in steps.iter().enumerate().skip(start) {
        if t > start {
            let mut here: Vec<&Occurrence> = Vec::new();
            for o in events.at(t - 1) {
                if model.labels.contains(&o.label) {
                    here.push(o);
                } else {
                    warnings.push(format!("unknown event {} at {} ignored", o.label, o.time));
                }
            }
            if collision == Collision::Priority && here.len() > 1 {
                let rank =
                    |o: &&Occurrence| model.priorities.get(&o.label).copied().unwrap_or(i64::MAX);
                let winner = here.iter().min_by_key(|o| rank(o)).copied();
                here = winner.into_iter().collect();
            }
            for o in here {
                match fire(model, &belief, &o.label) {
                    Some(next) => {
                        belief = next;
                        applied.push(o.clone());
                    }
                    None => warnings.push(format!(
                        "event {} at {} is impossible in the current state",
                        o.label, o.time
                    )),
                }
            }
            belief =
                consistent(model, &belief, &step.obs).ok_or(Error::TrackingFailed { time: t })?;
        }
        recalled.push(memory.get(&belief.argmax()).cloned());
        remember(model, &belief, &step.obs, &mut memory);
        beliefs.push(belief.clone());
    }
    Ok(TrackResult {
        beliefs,
        memory,
        recalled,
        warnings,
        applied,
    })
}
