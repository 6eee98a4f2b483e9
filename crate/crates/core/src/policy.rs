//! Policies (per-state action probabilities) and preferences (ranked actions).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Model, ModelKind};
use crate::prob::{ProbInterval, EPS};
use crate::symbol::{ActSymbol, Symbol};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Policy {
    /// `(state id, action) -> probability`; missing entries are 0.
    pub entries: BTreeMap<(Symbol, ActSymbol), f64>,
    /// Set when a preference had to be repaired to respect lower bounds.
    pub adjusted: bool,
}

impl Policy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, state: Symbol, action: ActSymbol, p: f64) {
        self.entries.insert((state, action), p);
    }

    pub fn get(&self, state: &Symbol, action: &ActSymbol) -> f64 {
        self.entries
            .get(&(state.clone(), action.clone()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Checks that every entry refers to a real state and action, lies inside
    /// the model's agent interval, and that each state's actions sum to 1.
    pub fn check(&self, model: &Model) -> Result<()> {
        for ((state, action), p) in &self.entries {
            let s = model.require_state(state.as_str())?;
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Policy(format!(
                    "{state} {action}: {p} is not a probability"
                )));
            }
            match model.agent_interval(s, action) {
                Some(iv) if iv.contains(*p) => {}
                Some(iv) => {
                    return Err(Error::Policy(format!(
                        "{state} {action}: {p} outside the allowed interval {iv}"
                    )))
                }
                None if *p > EPS => {
                    return Err(Error::Policy(format!("{state} has no action {action}")))
                }
                None => {}
            }
        }
        for s in 0..model.states.len() {
            let labels = model.labels_from(s);
            if labels.is_empty() {
                continue;
            }
            let id = model.state_id(s);
            let sum: f64 = labels.iter().map(|a| self.get(id, a)).sum();
            if (sum - 1.0).abs() > 1e-6 {
                return Err(Error::Policy(format!(
                    "state {id}: action probabilities sum to {sum}"
                )));
            }
        }
        Ok(())
    }

    /// Fixes the agent: returns an `mdp-fixed` model whose label
    /// probabilities are this policy's values.
    pub fn apply(&self, model: &Model) -> Result<Model> {
        self.check(model)?;
        let mut out = model.clone();
        out.kind = ModelKind::MdpFixed;
        for a in &mut out.arrows {
            let p = self.get(&model.states[a.from].id, &a.label);
            a.label_prob = ProbInterval::point(p.clamp(0.0, 1.0))?;
        }
        Ok(out)
    }

    /// The policy already carried by a model whose agent probabilities are
    /// points.
    pub fn from_model(model: &Model) -> Result<Policy> {
        let mut policy = Policy::new();
        for a in &model.arrows {
            if !a.label_prob.is_point() {
                return Err(Error::Unresolved(format!(
                    "agent interval {} on {}",
                    a.label_prob, model.states[a.from].id
                )));
            }
            policy.set(
                model.states[a.from].id.clone(),
                a.label.clone(),
                a.label_prob.lo(),
            );
        }
        Ok(policy)
    }
}

/// Per-state action rankings, most wanted first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Preference {
    pub ranking: BTreeMap<Symbol, Vec<ActSymbol>>,
}

impl Preference {
    /// The same ranking in every state, restricted to the actions available
    /// there.
    pub fn uniform(model: &Model, order: &[ActSymbol]) -> Preference {
        let ranking = (0..model.states.len())
            .filter_map(|s| {
                let avail = model.labels_from(s);
                if avail.is_empty() {
                    return None;
                }
                let mut list: Vec<ActSymbol> = order
                    .iter()
                    .filter(|a| avail.contains(*a))
                    .cloned()
                    .collect();
                list.extend(avail.into_iter().filter(|a| !order.contains(a)));
                Some((model.state_id(s).clone(), list))
            })
            .collect();
        Preference { ranking }
    }

    /// Each ranked list must be a permutation of the actions available in its
    /// state, and every state with actions must be ranked.
    pub fn check(&self, model: &Model) -> Result<()> {
        for (state, list) in &self.ranking {
            let s = model
                .state_index(state.as_str())
                .ok_or_else(|| Error::Preference(format!("unknown state {state}")))?;
            let avail = model.labels_from(s);
            let listed: BTreeSet<_> = list.iter().cloned().collect();
            if listed.len() != list.len() || listed != avail {
                return Err(Error::Preference(format!(
                    "state {state}: ranking must list each available action once"
                )));
            }
        }
        for s in 0..model.states.len() {
            if !model.labels_from(s).is_empty() && !self.ranking.contains_key(model.state_id(s)) {
                return Err(Error::Preference(format!(
                    "state {} has no ranking",
                    model.state_id(s)
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelBuilder, TraceSpec};
    use crate::symbol::sym;

    fn two_action() -> Model {
        ModelBuilder::new(ModelKind::Mdp)
            .obs(["o"])
            .labels(["a", "b"])
            .state("s", TraceSpec::point(sym("o")))
            .initial("s")
            .arrow("s", "a", "s", 1.0)
            .unwrap()
            .arrow("s", "b", "s", 1.0)
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn policy_must_sum_to_one() {
        let m = two_action();
        let mut p = Policy::new();
        p.set(sym("s"), sym("a"), 0.3);
        assert!(p.check(&m).is_err());
        p.set(sym("s"), sym("b"), 0.7);
        p.check(&m).unwrap();
        let fixed = p.apply(&m).unwrap();
        assert_eq!(fixed.kind, ModelKind::MdpFixed);
        assert_eq!(
            fixed.arrows[1].label_prob,
            ProbInterval::point(0.7).unwrap()
        );
    }

    #[test]
    fn preference_is_a_permutation() {
        let m = two_action();
        let mut pref = Preference::default();
        pref.ranking.insert(sym("s"), vec![sym("a")]);
        assert!(pref.check(&m).is_err());
        pref.ranking.insert(sym("s"), vec![sym("b"), sym("a")]);
        pref.check(&m).unwrap();
        assert_eq!(Preference::uniform(&m, &[sym("b")]), pref);
    }
}
