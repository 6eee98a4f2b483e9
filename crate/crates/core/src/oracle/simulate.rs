use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::preference_to_policy;
use crate::error::{Error, Result};
use crate::events::{EventStream, Occurrence, Provenance};
use crate::model::{Model, ModelKind};
use crate::policy::{Policy, Preference};
use crate::prob::ProbInterval;
use crate::symbol::{ObsSymbol, Symbol};
use crate::trajectory::{Step, Trajectory};

/// How the agent's choice is resolved when the model leaves it open.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Resolution {
    /// Use the model's own label probabilities, which must be points.
    #[default]
    Model,
    Policy(Policy),
    Preference(Preference),
}

/// What happens when several events fire in the same step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Collision {
    /// Only the event with the lowest priority rank moves the model.
    #[default]
    Priority,
    /// Every fired event moves the model, one after the other.
    BothArrows,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub steps: usize,
    pub seed: u64,
    pub resolution: Resolution,
    pub collision: Collision,
}

impl SimulationConfig {
    pub fn new(steps: usize, seed: u64) -> Self {
        SimulationConfig {
            steps,
            seed,
            resolution: Resolution::Model,
            collision: Collision::Priority,
        }
    }
}

/// A simulated run: the observable trajectory plus the hidden ground truth.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationRun {
    pub trajectory: Trajectory,
    /// State at each step.
    pub states: Vec<usize>,
    /// Arrows used between step `t` and `t + 1`.
    pub arrows: Vec<Vec<usize>>,
    /// Event occurrences for ED generators, stamped with the step they end.
    pub events: EventStream,
}

fn point(p: ProbInterval, what: impl FnOnce() -> String) -> Result<f64> {
    if p.is_point() {
        Ok(p.lo())
    } else {
        Err(Error::Unresolved(format!("{} has interval {p}", what())))
    }
}

fn pick<R: Rng>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return Some(i);
        }
    }
    weights.iter().rposition(|w| *w > 0.0)
}

struct Simulator<'a> {
    model: &'a Model,
    policy: Option<Policy>,
    rng: ChaCha8Rng,
}

impl Simulator<'_> {
    fn observe(&mut self, s: usize) -> Result<ObsSymbol> {
        let trace = &self.model.states[s].trace;
        let id = &self.model.states[s].id;
        let entries: Vec<(&ObsSymbol, f64)> = trace
            .entries
            .iter()
            .map(|(o, p)| Ok((o, point(*p, || format!("trace of {id}"))?)))
            .collect::<Result<_>>()?;
        let weights: Vec<f64> = entries.iter().map(|(_, p)| *p).collect();
        pick(&weights, &mut self.rng)
            .map(|i| entries[i].0.clone())
            .ok_or_else(|| Error::Structure(format!("state {id} shows nothing")))
    }

    fn label_prob(&self, s: usize, label: &Symbol, lp: ProbInterval) -> Result<f64> {
        let id = &self.model.states[s].id;
        match &self.policy {
            Some(policy) => Ok(policy.get(id, label)),
            None => point(lp, || format!("label {label} in {id}")),
        }
    }

    /// Takes one arrow labeled `label` out of `s`.
    fn world(&mut self, s: usize, label: &Symbol) -> Result<usize> {
        let model = self.model;
        let candidates: Vec<(usize, f64)> = model
            .outgoing(s)
            .filter(|(_, a)| &a.label == label)
            .map(|(i, a)| {
                let p = point(a.arrow_prob, || format!("arrow {}", model.arrow_name(i)))?;
                Ok((i, p))
            })
            .collect::<Result<_>>()?;
        let weights: Vec<f64> = candidates.iter().map(|c| c.1).collect();
        pick(&weights, &mut self.rng)
            .map(|k| candidates[k].0)
            .ok_or_else(|| {
                Error::Structure(format!(
                    "state {} has no usable arrow for {label}",
                    model.states[s].id
                ))
            })
    }

    fn agent_step(&mut self, s: usize) -> Result<(Symbol, usize)> {
        let model = self.model;
        let labels: Vec<(Symbol, ProbInterval)> = model
            .labels_from(s)
            .into_iter()
            .map(|l| {
                let lp = model.agent_interval(s, &l).unwrap_or(ProbInterval::ZERO);
                (l, lp)
            })
            .collect();
        let weights: Vec<f64> = labels
            .iter()
            .map(|(l, lp)| self.label_prob(s, l, *lp))
            .collect::<Result<_>>()?;
        let k = pick(&weights, &mut self.rng).ok_or_else(|| {
            Error::Structure(format!(
                "state {} has no outgoing arrow",
                model.states[s].id
            ))
        })?;
        let label = labels[k].0.clone();
        let arrow = self.world(s, &label)?;
        Ok((label, arrow))
    }

    fn event_step(&mut self, s: usize, collision: Collision) -> Result<(Vec<Symbol>, Vec<usize>)> {
        let model = self.model;
        let mut fired = Vec::new();
        for label in model.labels_from(s) {
            let lp = model
                .agent_interval(s, &label)
                .unwrap_or(ProbInterval::ZERO);
            let p = self.label_prob(s, &label, lp)?;
            if self.rng.random::<f64>() < p {
                fired.push(label);
            }
        }
        if collision == Collision::Priority && fired.len() > 1 {
            let rank = |l: &Symbol| model.priorities.get(l).copied().unwrap_or(i64::MAX);
            let best = fired.iter().min_by_key(|l| rank(l)).cloned();
            fired = best.into_iter().collect();
        }
        let mut state = s;
        let mut used = Vec::new();
        let mut applied = Vec::new();
        for label in fired {
            if model.outgoing(state).any(|(_, a)| a.label == label) {
                let i = self.world(state, &label)?;
                state = model.arrows[i].to;
                used.push(i);
                applied.push(label);
            }
        }
        Ok((applied, used))
    }
}

/// Runs the model as a generator for `config.steps` steps. Every step shows an
/// observation of the current state, then the agent acts (or events fire) and
/// the world moves. Deterministic in the seed.
pub fn simulate(model: &Model, config: &SimulationConfig) -> Result<SimulationRun> {
    let policy = match &config.resolution {
        Resolution::Model => None,
        Resolution::Policy(p) => {
            p.check(model)?;
            Some(p.clone())
        }
        Resolution::Preference(pref) => Some(preference_to_policy(model, pref)?),
    };
    let mut sim = Simulator {
        model,
        policy,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
    };
    let is_ed = model.kind == ModelKind::Ed;
    let single = model.kind.is_single_label();
    let mut steps = Vec::with_capacity(config.steps);
    let mut states = Vec::with_capacity(config.steps);
    let mut arrows = Vec::with_capacity(config.steps);
    let mut occurrences = Vec::new();
    let mut s = model.initial;
    for t in 0..config.steps {
        let obs = sim.observe(s)?;
        states.push(s);
        if is_ed {
            let (labels, used) = sim.event_step(s, config.collision)?;
            for label in labels {
                occurrences.push(Occurrence {
                    time: t,
                    label,
                    confidence: ProbInterval::ONE,
                    provenance: Provenance::Direct,
                });
            }
            if let Some(&last) = used.last() {
                s = model.arrows[last].to;
            }
            steps.push(Step::new(obs, None));
            arrows.push(used);
        } else {
            let (label, arrow) = sim.agent_step(s)?;
            s = model.arrows[arrow].to;
            steps.push(Step::new(obs, (!single).then_some(label)));
            arrows.push(vec![arrow]);
        }
    }
    let mut trajectory = Trajectory::new(steps);
    trajectory.obs_alphabet = Some(model.obs.clone());
    if !single && !is_ed {
        trajectory.act_alphabet = Some(model.labels.clone());
    }
    Ok(SimulationRun {
        trajectory,
        states,
        arrows,
        events: EventStream::from_occurrences(occurrences)?,
    })
}
