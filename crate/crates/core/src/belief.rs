//! Probability distributions over model states and the dynamic-memory metric.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::prob::{ProbInterval, EPS};
use crate::symbol::{ObsSymbol, Symbol};

/// A distribution over state indices. Entries are strictly positive and sum
/// to one. `approximate` is set when interval midpoints were used.
#[derive(Clone, Debug, PartialEq)]
pub struct Belief {
    probs: BTreeMap<usize, f64>,
    pub approximate: bool,
}

impl Belief {
    pub fn point(state: usize) -> Self {
        Belief {
            probs: BTreeMap::from([(state, 1.0)]),
            approximate: false,
        }
    }

    pub fn uniform(states: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_weights(states.into_iter().map(|s| (s, 1.0)))
    }

    /// Normalizes non-negative weights; zero weights are dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (s, w) in weights {
            if w > 0.0 {
                *probs.entry(s).or_insert(0.0) += w;
            }
        }
        let total: f64 = probs.values().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::Numeric("belief has no mass".into()));
        }
        probs.values_mut().for_each(|p| *p /= total);
        Ok(Belief {
            probs,
            approximate: false,
        })
    }

    pub fn get(&self, state: usize) -> f64 {
        self.probs.get(&state).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().map(|(&s, &p)| (s, p))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The most likely state; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for (&s, &p) in &self.probs {
            if p > best.1 + EPS {
                best = (s, p);
            }
        }
        best.0
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.values().copied().fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Belief, tol: f64) -> bool {
        self.probs
            .keys()
            .chain(other.probs.keys())
            .all(|&s| (self.get(s) - other.get(s)).abs() <= tol)
    }

    /// Renders as `{id:p, ...}` using the model's state ids.
    pub fn describe(&self, model: &Model) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(s, p)| format!("{}:{}", model.states[s].id, crate::prob::format_prob(p)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn value(p: ProbInterval, approximate: &mut bool) -> f64 {
    if !p.is_point() {
        *approximate = true;
    }
    p.midpoint()
}

fn check_obs(model: &Model, obs: &ObsSymbol) -> Result<()> {
    if model.obs.contains(obs) {
        Ok(())
    } else {
        Err(Error::Symbol(format!(
            "{obs} is not an observation of the model"
        )))
    }
}

/// Conditions `belief` on seeing `obs` in the current state.
pub fn condition(model: &Model, belief: &Belief, obs: &ObsSymbol) -> Result<Belief> {
    check_obs(model, obs)?;
    let mut approximate = belief.approximate;
    let weights: Vec<(usize, f64)> = belief
        .iter()
        .map(|(s, p)| {
            (
                s,
                p * value(model.states[s].trace.prob(obs), &mut approximate),
            )
        })
        .collect();
    let mut out = Belief::from_weights(weights).map_err(|_| Error::InconsistentObservation {
        obs: obs.to_string(),
        step: 0,
    })?;
    out.approximate = approximate;
    Ok(out)
}

/// Posterior after the labeled transition and the observation in the new
/// state. The label is known to have occurred, so only arrow probabilities
/// weigh the successors.
pub fn step_belief(
    model: &Model,
    belief: &Belief,
    label: &Symbol,
    obs: &ObsSymbol,
) -> Result<Belief> {
    check_obs(model, obs)?;
    let mut approximate = belief.approximate;
    let mut next: BTreeMap<usize, f64> = BTreeMap::new();
    for (s, p) in belief.iter() {
        for (_, a) in model.outgoing(s).filter(|(_, a)| &a.label == label) {
            let ap = value(a.arrow_prob, &mut approximate);
            let tr = value(model.states[a.to].trace.prob(obs), &mut approximate);
            *next.entry(a.to).or_insert(0.0) += p * ap * tr;
        }
    }
    let mut out = Belief::from_weights(next).map_err(|_| Error::InconsistentObservation {
        obs: obs.to_string(),
        step: 0,
    })?;
    out.approximate = approximate;
    Ok(out)
}

/// Bits of memory needed to know the state given the current observation:
/// `ceil(log2 m)` where `m` is the largest number of states sharing a colour.
pub fn memory_bits(model: &Model) -> u32 {
    let mut counts: BTreeMap<Vec<ObsSymbol>, usize> = BTreeMap::new();
    for s in &model.states {
        *counts.entry(s.trace.colour()).or_default() += 1;
    }
    let m = counts.values().copied().max().unwrap_or(1);
    usize::BITS - (m - 1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fomm, ModelBuilder, ModelKind, TraceSpec};
    use crate::symbol::sym;

    fn coin() -> Model {
        fomm(
            "B",
            &[
                ("B", "B", 0.5),
                ("B", "W", 0.5),
                ("W", "B", 0.5),
                ("W", "W", 0.5),
            ],
        )
        .unwrap()
    }

    pub(crate) fn bbww() -> Model {
        ModelBuilder::new(ModelKind::Hmm)
            .obs(["B", "W"])
            .state("B1", TraceSpec::point(sym("B")))
            .state("B2", TraceSpec::point(sym("B")))
            .state("W1", TraceSpec::point(sym("W")))
            .state("W2", TraceSpec::point(sym("W")))
            .initial("B1")
            .arrow("B1", "true", "B2", 1.0)
            .unwrap()
            .arrow("B2", "true", "W1", 1.0)
            .unwrap()
            .arrow("W1", "true", "W2", 1.0)
            .unwrap()
            .arrow("W2", "true", "B1", 1.0)
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn coin_step() {
        let m = coin();
        let b = step_belief(&m, &Belief::point(0), &sym("true"), &sym("W")).unwrap();
        assert_eq!(b, Belief::point(m.state_index("W").unwrap()));
    }

    #[test]
    fn bbww_two_threads() {
        let m = bbww();
        let b = Belief::uniform([0, 1]).unwrap();
        let b = condition(&m, &b, &sym("B")).unwrap();
        let b = step_belief(&m, &b, &sym("true"), &sym("W")).unwrap();
        assert_eq!(b, Belief::point(m.state_index("W1").unwrap()));
    }

    #[test]
    fn unknown_obs_is_error() {
        let m = coin();
        assert!(step_belief(&m, &Belief::point(0), &sym("true"), &sym("X")).is_err());
    }

    #[test]
    fn impossible_obs_is_inconsistent() {
        let m = bbww();
        let err = step_belief(&m, &Belief::point(0), &sym("true"), &sym("W")).unwrap_err();
        assert!(matches!(err, Error::InconsistentObservation { .. }));
    }

    #[test]
    fn memory_bits_examples() {
        assert_eq!(memory_bits(&coin()), 0);
        assert_eq!(memory_bits(&bbww()), 1);
        let mut b = ModelBuilder::new(ModelKind::Hmm).obs(["red", "blue"]);
        for (id, c) in [("r1", "red"), ("r2", "red"), ("r3", "red"), ("b1", "blue")] {
            b = b.state(id, TraceSpec::point(sym(c)));
        }
        let m = b
            .initial("r1")
            .arrow("r1", "true", "r2", 1.0)
            .unwrap()
            .arrow("r2", "true", "r3", 1.0)
            .unwrap()
            .arrow("r3", "true", "b1", 1.0)
            .unwrap()
            .arrow("b1", "true", "r1", 1.0)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(memory_bits(&m), 2);
    }

    #[test]
    fn interval_midpoints_flag_approximate() {
        let m = ModelBuilder::new(ModelKind::MdpPlus)
            .obs(["o"])
            .labels(["a"])
            .state("x", TraceSpec::point(sym("o")))
            .state("y", TraceSpec::point(sym("o")))
            .initial("x")
            .arrow_with(
                "x",
                "a",
                "y",
                ProbInterval::UNIT,
                ProbInterval::new(0.2, 0.6).unwrap(),
            )
            .arrow_with(
                "x",
                "a",
                "x",
                ProbInterval::UNIT,
                ProbInterval::new(0.4, 0.8).unwrap(),
            )
            .build()
            .unwrap();
        let b = step_belief(&m, &Belief::point(0), &sym("a"), &sym("o")).unwrap();
        assert!(b.approximate);
        assert!((b.get(1) - 0.4 / 1.0).abs() < 1e-12);
    }
}
