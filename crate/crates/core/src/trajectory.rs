//! Recorded observation/action words with a designated current moment.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::symbol::{ActSymbol, ObsSymbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub obs: ObsSymbol,
    /// `None` when actions are not modeled (written `-`).
    pub act: Option<ActSymbol>,
}

impl Step {
    pub fn new(obs: ObsSymbol, act: Option<ActSymbol>) -> Self {
        Step { obs, act }
    }
}

/// A sequence of steps. Steps before `t0` are the past; the step at `t0` is
/// the current moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub t0: usize,
    /// Alphabets declared in the document header, if any.
    pub obs_alphabet: Option<Vec<ObsSymbol>>,
    pub act_alphabet: Option<Vec<ActSymbol>>,
}

impl Trajectory {
    /// All steps in the past (`t0` at the end).
    pub fn new(steps: Vec<Step>) -> Self {
        let t0 = steps.len();
        Trajectory {
            steps,
            t0,
            obs_alphabet: None,
            act_alphabet: None,
        }
    }

    pub fn from_observations(obs: impl IntoIterator<Item = ObsSymbol>) -> Self {
        Self::new(obs.into_iter().map(|o| Step::new(o, None)).collect())
    }

    pub fn with_t0(mut self, t0: usize) -> Result<Self> {
        if t0 > self.steps.len() {
            return Err(Error::Structure(format!(
                "t0 {t0} beyond trajectory length {}",
                self.steps.len()
            )));
        }
        self.t0 = t0;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn past(&self) -> &[Step] {
        &self.steps[..self.t0]
    }

    pub fn future(&self) -> &[Step] {
        &self.steps[self.t0..]
    }

    pub fn observations(&self) -> impl Iterator<Item = &ObsSymbol> {
        self.steps.iter().map(|s| &s.obs)
    }

    /// Checks every symbol against the declared alphabets.
    pub fn check_alphabets(&self) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(obs) = &self.obs_alphabet {
                if !obs.contains(&step.obs) {
                    return Err(Error::Symbol(format!(
                        "unknown observation {} at step {i}",
                        step.obs
                    )));
                }
            }
            if let (Some(acts), Some(a)) = (&self.act_alphabet, &step.act) {
                if !acts.contains(a) {
                    return Err(Error::Symbol(format!("unknown action {a} at step {i}")));
                }
            }
        }
        Ok(())
    }

    /// Checks observations (and actions, for action-bearing kinds) against a
    /// model's alphabets.
    pub fn check_against(&self, model: &Model) -> Result<()> {
        let check_acts = !model.kind.is_single_label();
        for (i, step) in self.steps.iter().enumerate() {
            if !model.obs.contains(&step.obs) {
                return Err(Error::Symbol(format!(
                    "unknown observation {} at step {i}",
                    step.obs
                )));
            }
            if let (true, Some(a)) = (check_acts, &step.act) {
                if !model.labels.contains(a) {
                    return Err(Error::Symbol(format!("unknown action {a} at step {i}")));
                }
            }
        }
        Ok(())
    }
}
