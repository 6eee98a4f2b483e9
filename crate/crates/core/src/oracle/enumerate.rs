use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::decimal_rational;
use crate::development::{DevStep, Development, Direction, FutureSet};
use crate::error::{Error, Result};
use crate::inversion::invert_chain;
use crate::model::Model;
use crate::policy::Policy;
use crate::prob::ProbInterval;
use crate::symbol::ObsSymbol;

/// Largest number of developments kept at any depth.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

fn resolved(model: &Model, policy: Option<&Policy>) -> Result<Model> {
    match policy {
        Some(p) => p.apply(model),
        None => Ok(model.clone()),
    }
}

/// One-step transitions `(from, step, to, effective probability)`, where the
/// effective probability includes the trace of the target state.
fn transitions(model: &Model) -> Vec<Vec<(DevStep, usize, ProbInterval)>> {
    let mut out = vec![Vec::new(); model.states.len()];
    for a in &model.arrows {
        let eff = a.effective();
        if eff.hi() <= 0.0 {
            continue;
        }
        for (o, tp) in &model.states[a.to].trace.entries {
            let p = eff.product(tp);
            if p.hi() > 0.0 {
                let step = DevStep {
                    label: a.label.clone(),
                    obs: o.clone(),
                };
                out[a.from].push((step, a.to, p));
            }
        }
    }
    out
}

/// Developments of length `depth` from the initial state with their
/// probabilities. Interval models compose per-step bounds multiplicatively,
/// which is sound but not always tight; upper bounds are capped at 1.
pub fn enumerate_future(model: &Model, depth: usize, policy: Option<&Policy>) -> Result<FutureSet> {
    enumerate_future_capped(model, depth, policy, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_future_capped(
    model: &Model,
    depth: usize,
    policy: Option<&Policy>,
    cap: usize,
) -> Result<FutureSet> {
    let model = resolved(model, policy)?;
    let moves = transitions(&model);
    type Mass = BTreeMap<usize, (f64, f64)>;
    let mut frontier: BTreeMap<Development, Mass> = BTreeMap::new();
    frontier.insert(
        Development::empty(Direction::Future),
        BTreeMap::from([(model.initial, (1.0, 1.0))]),
    );
    for _ in 0..depth {
        let mut next: BTreeMap<Development, Mass> = BTreeMap::new();
        for (dev, mass) in &frontier {
            for (&s, &(lo, hi)) in mass {
                for (step, to, p) in &moves[s] {
                    let mut d = dev.clone();
                    d.steps.push(step.clone());
                    let e = next.entry(d).or_default().entry(*to).or_default();
                    e.0 += lo * p.lo();
                    e.1 += hi * p.hi();
                }
            }
            if next.len() > cap {
                return Err(Error::EnumerationCap(cap));
            }
        }
        frontier = next;
    }
    let entries = frontier
        .into_iter()
        .filter_map(|(dev, mass)| {
            let lo: f64 = mass.values().map(|m| m.0).sum();
            let hi: f64 = mass.values().map(|m| m.1).sum();
            (hi > 0.0).then(|| (dev, ProbInterval::clamped(lo, hi.min(1.0))))
        })
        .collect();
    Ok(FutureSet {
        direction: Direction::Future,
        depth,
        entries,
    })
}

fn reverse(fs: FutureSet) -> FutureSet {
    FutureSet {
        direction: Direction::Past,
        depth: fs.depth,
        entries: fs
            .entries
            .into_iter()
            .map(|(mut dev, p)| {
                dev.steps.reverse();
                dev.direction = Direction::Past;
                (dev, p)
            })
            .collect(),
    }
}

/// Possible pasts of length `depth` ending in the initial state, in
/// chronological order.
pub fn enumerate_past(model: &Model, depth: usize) -> Result<FutureSet> {
    enumerate_past_from(model, depth, model.initial)
}

/// Possible pasts of length `depth` ending in `state`.
pub fn enumerate_past_from(model: &Model, depth: usize, state: usize) -> Result<FutureSet> {
    let mut inverse = invert_chain(model)?;
    if state >= inverse.states.len() {
        return Err(Error::UnknownState(state.to_string()));
    }
    inverse.initial = state;
    Ok(reverse(enumerate_future(&inverse, depth, None)?))
}

/// Development probabilities in exact rational arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactFutureSet {
    pub direction: Direction,
    pub depth: usize,
    pub entries: BTreeMap<Development, BigRational>,
}

impl ExactFutureSet {
    pub fn total(&self) -> BigRational {
        self.entries
            .values()
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn observation_words(&self) -> BTreeMap<Vec<ObsSymbol>, BigRational> {
        let mut out: BTreeMap<Vec<ObsSymbol>, BigRational> = BTreeMap::new();
        for (dev, p) in &self.entries {
            let e = out
                .entry(dev.observations())
                .or_insert_with(BigRational::zero);
            *e += p;
        }
        out
    }
}

/// Exact enumeration for point models. Every probability is read as the
/// decimal it prints as.
pub fn enumerate_future_exact(
    model: &Model,
    depth: usize,
    policy: Option<&Policy>,
) -> Result<ExactFutureSet> {
    let model = resolved(model, policy)?;
    if !model.is_point() {
        return Err(Error::NotPoint(
            "exact enumeration needs point probabilities".into(),
        ));
    }
    let mut moves: Vec<Vec<(DevStep, usize, BigRational)>> = vec![Vec::new(); model.states.len()];
    for a in &model.arrows {
        let eff = decimal_rational(a.label_prob.lo())? * decimal_rational(a.arrow_prob.lo())?;
        if eff.is_zero() {
            continue;
        }
        for (o, tp) in &model.states[a.to].trace.entries {
            let p = &eff * decimal_rational(tp.lo())?;
            if !p.is_zero() {
                let step = DevStep {
                    label: a.label.clone(),
                    obs: o.clone(),
                };
                moves[a.from].push((step, a.to, p));
            }
        }
    }
    let mut frontier: BTreeMap<Development, BTreeMap<usize, BigRational>> = BTreeMap::new();
    frontier.insert(
        Development::empty(Direction::Future),
        BTreeMap::from([(model.initial, BigRational::one())]),
    );
    for _ in 0..depth {
        let mut next: BTreeMap<Development, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (dev, mass) in &frontier {
            for (s, m) in mass {
                for (step, to, p) in &moves[*s] {
                    let mut d = dev.clone();
                    d.steps.push(step.clone());
                    let e = next
                        .entry(d)
                        .or_default()
                        .entry(*to)
                        .or_insert_with(BigRational::zero);
                    *e += m * p;
                }
            }
            if next.len() > DEFAULT_ENUMERATION_CAP {
                return Err(Error::EnumerationCap(DEFAULT_ENUMERATION_CAP));
            }
        }
        frontier = next;
    }
    let entries = frontier
        .into_iter()
        .map(|(dev, mass)| {
            let p = mass.into_values().fold(BigRational::zero(), |a, b| a + b);
            (dev, p)
        })
        .filter(|(_, p)| !p.is_zero())
        .collect();
    Ok(ExactFutureSet {
        direction: Direction::Future,
        depth,
        entries,
    })
}
