//! The labeled stochastic graph shared by every model kind.
//!
//! A [`Model`] is a directed graph whose vertices are states and whose arrows
//! carry a label (an action, an event, or the distinguished label `true`) and two
//! probabilities: `label_prob`, the probability that the label is chosen in the
//! source state, and `arrow_prob`, the probability that this arrow is taken
//! among the arrows with the same label. Each state has a trace describing what
//! can be observed there.
//!
//! Fields are public so transformations can build models directly; call
//! [`Model::check_structure`] (or [`crate::validate::validate`]) on anything
//! assembled by hand.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::prob::ProbInterval;
use crate::symbol::{is_token, ObsSymbol, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Fomm,
    Hmm,
    Mdp,
    MdpFixed,
    Smdp,
    MdpPlus,
    Ed,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Fomm,
        ModelKind::Hmm,
        ModelKind::Mdp,
        ModelKind::MdpFixed,
        ModelKind::Smdp,
        ModelKind::MdpPlus,
        ModelKind::Ed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Fomm => "fomm",
            ModelKind::Hmm => "hmm",
            ModelKind::Mdp => "mdp",
            ModelKind::MdpFixed => "mdp-fixed",
            ModelKind::Smdp => "smdp",
            ModelKind::MdpPlus => "mdp-plus",
            ModelKind::Ed => "ed",
        }
    }

    /// FOMM and HMM have the single label `true`.
    pub fn is_single_label(self) -> bool {
        matches!(self, ModelKind::Fomm | ModelKind::Hmm)
    }

    /// Kinds whose arrows carry exact probabilities.
    pub fn is_perfect(self) -> bool {
        matches!(
            self,
            ModelKind::Fomm | ModelKind::Hmm | ModelKind::Mdp | ModelKind::MdpFixed
        )
    }

    /// Label probability assumed when an arrow omits `lp`.
    pub fn default_label_prob(self) -> Option<ProbInterval> {
        match self {
            ModelKind::Fomm | ModelKind::Hmm => Some(ProbInterval::ONE),
            ModelKind::Mdp | ModelKind::Smdp | ModelKind::MdpPlus | ModelKind::Ed => {
                Some(ProbInterval::UNIT)
            }
            ModelKind::MdpFixed => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Structure(format!("unknown model kind {s:?}")))
    }
}

/// What can be observed in a state. Observations not listed have probability
/// `[0, 0]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceSpec {
    pub entries: BTreeMap<ObsSymbol, ProbInterval>,
    /// The state remembers the last observation seen in it.
    pub memory: bool,
    /// Names of other models expected to be observable in this state.
    pub phenomena: Vec<String>,
}

impl TraceSpec {
    /// A trace that always shows `obs`.
    pub fn point(obs: ObsSymbol) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(obs, ProbInterval::ONE);
        TraceSpec {
            entries,
            ..Default::default()
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (ObsSymbol, ProbInterval)>) -> Self {
        TraceSpec {
            entries: entries.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn prob(&self, obs: &ObsSymbol) -> ProbInterval {
        self.entries.get(obs).copied().unwrap_or(ProbInterval::ZERO)
    }

    /// The observation this trace always shows, if it is deterministic.
    pub fn deterministic(&self) -> Option<&ObsSymbol> {
        let mut live = self.entries.iter().filter(|(_, p)| !p.is_zero());
        let (obs, p) = live.next()?;
        if live.next().is_none() && p.lo() >= 1.0 - crate::prob::EPS {
            Some(obs)
        } else {
            None
        }
    }

    /// The colour of a state: its deterministic observation, or else the set of
    /// observations that are possible there.
    pub fn colour(&self) -> Vec<ObsSymbol> {
        self.entries
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(o, _)| o.clone())
            .collect()
    }

    pub fn is_point(&self) -> bool {
        self.entries.values().all(ProbInterval::is_point)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub id: Symbol,
    pub trace: TraceSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrow {
    pub from: usize,
    pub label: Symbol,
    pub to: usize,
    pub label_prob: ProbInterval,
    pub arrow_prob: ProbInterval,
}

impl Arrow {
    /// Probability that this arrow is actually used.
    pub fn effective(&self) -> ProbInterval {
        self.label_prob.product(&self.arrow_prob)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub kind: ModelKind,
    /// Observation alphabet.
    pub obs: Vec<ObsSymbol>,
    /// Actions, events, or `{true}` for single-label kinds.
    pub labels: Vec<Symbol>,
    pub states: Vec<State>,
    pub initial: usize,
    pub arrows: Vec<Arrow>,
    /// Event priorities for ED models; a lower rank wins a collision.
    pub priorities: BTreeMap<Symbol, i64>,
    /// Free-form notes recorded by transformations.
    pub notes: BTreeMap<String, String>,
}

impl Model {
    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id.as_str() == id)
    }

    pub fn require_state(&self, id: &str) -> Result<usize> {
        self.state_index(id)
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    pub fn state_id(&self, idx: usize) -> &Symbol {
        &self.states[idx].id
    }

    pub fn initial_id(&self) -> &Symbol {
        self.state_id(self.initial)
    }

    /// Indices of arrows leaving `state`.
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.from == state)
    }

    /// Arrow indices grouped by source state.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.states.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            adj[a.from].push(i);
        }
        adj
    }

    /// Labels with at least one arrow from `state`, sorted.
    pub fn labels_from(&self, state: usize) -> BTreeSet<Symbol> {
        self.outgoing(state).map(|(_, a)| a.label.clone()).collect()
    }

    /// The agent (or event) interval for `label` in `state`: the label
    /// probability shared by the arrows with that label.
    pub fn agent_interval(&self, state: usize, label: &Symbol) -> Option<ProbInterval> {
        self.outgoing(state)
            .find(|(_, a)| &a.label == label)
            .map(|(_, a)| a.label_prob)
    }

    /// Whether every probability in the model is a point value.
    pub fn is_point(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| a.label_prob.is_point() && a.arrow_prob.is_point())
            && self.states.iter().all(|s| s.trace.is_point())
    }

    pub fn label_index(&self, label: &Symbol) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.insert(key.into(), value.into());
    }

    /// Structural checks independent of the model kind: non-empty alphabets,
    /// unique state ids, in-range references, traces over the alphabet.
    pub fn check_structure(&self) -> Result<()> {
        if self.obs.is_empty() {
            return Err(Error::Structure("empty observation alphabet".into()));
        }
        if self.labels.is_empty() {
            return Err(Error::Structure("empty label alphabet".into()));
        }
        if self.states.is_empty() {
            return Err(Error::Structure("no states".into()));
        }
        if self.initial >= self.states.len() {
            return Err(Error::Structure("initial state out of range".into()));
        }
        let mut seen = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if !is_token(s.id.as_str()) {
                return Err(Error::Structure(format!("invalid state id {:?}", s.id)));
            }
            if let Some(prev) = seen.insert(s.id.clone(), i) {
                let _ = prev;
                return Err(Error::Structure(format!("duplicate state id {}", s.id)));
            }
            for obs in s.trace.entries.keys() {
                if !self.obs.contains(obs) {
                    return Err(Error::Structure(format!(
                        "state {} traces undeclared observation {}",
                        s.id, obs
                    )));
                }
            }
        }
        let obs_set: BTreeSet<_> = self.obs.iter().collect();
        if obs_set.len() != self.obs.len() {
            return Err(Error::Structure("duplicate observation symbol".into()));
        }
        let label_set: BTreeSet<_> = self.labels.iter().collect();
        if label_set.len() != self.labels.len() {
            return Err(Error::Structure("duplicate label symbol".into()));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if a.from >= self.states.len() || a.to >= self.states.len() {
                return Err(Error::Structure(format!("arrow {i} has a dangling state")));
            }
        }
        Ok(())
    }

    /// Human-readable `from label to` name of an arrow.
    pub fn arrow_name(&self, idx: usize) -> String {
        let a = &self.arrows[idx];
        format!(
            "{}-{}->{}",
            self.states[a.from].id, a.label, self.states[a.to].id
        )
    }

    /// Keeps only the states for which `keep` is true, dropping arrows that
    /// touch removed states. The initial state must be kept.
    pub fn retain_states(&self, keep: &[bool]) -> Model {
        let mut remap = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (i, s) in self.states.iter().enumerate() {
            if keep[i] {
                remap[i] = states.len();
                states.push(s.clone());
            }
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|a| keep[a.from] && keep[a.to])
            .map(|a| Arrow {
                from: remap[a.from],
                to: remap[a.to],
                ..a.clone()
            })
            .collect();
        Model {
            states,
            arrows,
            initial: remap[self.initial],
            ..self.clone()
        }
    }
}

/// Assembles a [`Model`] from string ids.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    kind: ModelKind,
    obs: Vec<String>,
    labels: Vec<String>,
    states: Vec<(String, TraceSpec)>,
    initial: Option<String>,
    arrows: Vec<(String, String, String, Option<ProbInterval>, ProbInterval)>,
    priorities: Vec<(String, i64)>,
}

impl ModelBuilder {
    pub fn new(kind: ModelKind) -> Self {
        ModelBuilder {
            kind,
            obs: Vec::new(),
            labels: Vec::new(),
            states: Vec::new(),
            initial: None,
            arrows: Vec::new(),
            priorities: Vec::new(),
        }
    }

    pub fn obs<I, S>(mut self, symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.obs.extend(symbols.into_iter().map(Into::into));
        self
    }

    pub fn labels<I, S>(mut self, symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels.extend(symbols.into_iter().map(Into::into));
        self
    }

    pub fn state(mut self, id: impl Into<String>, trace: TraceSpec) -> Self {
        self.states.push((id.into(), trace));
        self
    }

    /// A state whose trace always shows the observation named like the state.
    pub fn observed_state(self, id: &str) -> Result<Self> {
        let obs = Symbol::new(id)?;
        Ok(self.state(id, TraceSpec::point(obs)))
    }

    pub fn initial(mut self, id: impl Into<String>) -> Self {
        self.initial = Some(id.into());
        self
    }

    /// Arrow with the kind's default label probability.
    pub fn arrow(mut self, from: &str, label: &str, to: &str, arrow_prob: f64) -> Result<Self> {
        let ap = ProbInterval::point(arrow_prob)?;
        self.arrows
            .push((from.into(), label.into(), to.into(), None, ap));
        Ok(self)
    }

    pub fn arrow_with(
        mut self,
        from: &str,
        label: &str,
        to: &str,
        label_prob: ProbInterval,
        arrow_prob: ProbInterval,
    ) -> Self {
        self.arrows.push((
            from.into(),
            label.into(),
            to.into(),
            Some(label_prob),
            arrow_prob,
        ));
        self
    }

    pub fn priority(mut self, event: &str, rank: i64) -> Self {
        self.priorities.push((event.into(), rank));
        self
    }

    pub fn build(self) -> Result<Model> {
        let obs = self
            .obs
            .iter()
            .map(Symbol::new)
            .collect::<Result<Vec<_>>>()?;
        let labels = if self.kind.is_single_label() && self.labels.is_empty() {
            vec![Symbol::true_label()]
        } else {
            self.labels
                .iter()
                .map(Symbol::new)
                .collect::<Result<Vec<_>>>()?
        };
        let states = self
            .states
            .into_iter()
            .map(|(id, trace)| {
                Ok(State {
                    id: Symbol::new(id)?,
                    trace,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let index = |id: &str| -> Result<usize> {
            states
                .iter()
                .position(|s| s.id.as_str() == id)
                .ok_or_else(|| Error::UnknownState(id.to_string()))
        };
        let initial = match &self.initial {
            Some(id) => index(id)?,
            None => return Err(Error::Structure("no initial state".into())),
        };
        let mut arrows = Vec::with_capacity(self.arrows.len());
        for (from, label, to, lp, ap) in &self.arrows {
            let label_prob = match lp {
                Some(lp) => *lp,
                None => self.kind.default_label_prob().ok_or_else(|| {
                    Error::Structure(format!("{} arrows need an explicit lp", self.kind))
                })?,
            };
            arrows.push(Arrow {
                from: index(from)?,
                label: Symbol::new(label)?,
                to: index(to)?,
                label_prob,
                arrow_prob: *ap,
            });
        }
        let priorities = self
            .priorities
            .iter()
            .map(|(e, r)| Ok((Symbol::new(e)?, *r)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let model = Model {
            kind: self.kind,
            obs,
            labels,
            states,
            initial,
            arrows,
            priorities,
            notes: BTreeMap::new(),
        };
        model.check_structure()?;
        Ok(model)
    }
}

/// Builds a FOMM from `(from, to, p)` triples; every state observes its own id.
pub fn fomm(initial: &str, arrows: &[(&str, &str, f64)]) -> Result<Model> {
    let mut ids: Vec<&str> = Vec::new();
    for (a, b, _) in arrows {
        for id in [a, b] {
            if !ids.contains(id) {
                ids.push(id);
            }
        }
    }
    if !ids.contains(&initial) {
        ids.push(initial);
    }
    let mut b = ModelBuilder::new(ModelKind::Fomm).obs(ids.iter().copied());
    for id in &ids {
        b = b.observed_state(id)?;
    }
    b = b.initial(initial);
    for (from, to, p) in arrows {
        b = b.arrow(from, crate::symbol::TRUE_LABEL, to, *p)?;
    }
    b.build()
}
