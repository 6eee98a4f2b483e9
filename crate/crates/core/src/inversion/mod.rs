//! Inverse models that predict the past.
//!
//! A journey starts in the initial state and follows arrows until it returns
//! to the initial state or enters the black hole. Expected arrow counts per
//! journey give inbound probabilities: the reversed arrow `j -> i` gets
//! `c(i, j) / sum_k c(k, j)`.

mod plus;

pub use plus::{invert_mdp_plus, PlusMode};

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{find_black_hole, find_white_peak, StructureReport};
use crate::error::{Error, Result};
use crate::model::{Arrow, Model, ModelKind};
use crate::policy::Policy;
use crate::prob::{ProbInterval, EPS};
use crate::symbol::Symbol;

/// Expected per-journey quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct JourneyStatistics {
    /// Expected visits per state; the initial state has exactly 1, terminal
    /// black-hole states 0.
    pub visits: Vec<f64>,
    /// Expected traversals per arrow, indexed like `model.arrows`.
    pub arrow_counts: Vec<f64>,
    /// Expected arrivals back at the initial state.
    pub returns: f64,
    /// Expected arrivals into the black hole.
    pub absorbed: f64,
    pub black_hole: BTreeSet<usize>,
}

impl JourneyStatistics {
    /// Total expected count over arrows entering `state`.
    pub fn inbound(&self, model: &Model, state: usize) -> f64 {
        model
            .arrows
            .iter()
            .zip(&self.arrow_counts)
            .filter(|(a, _)| a.to == state)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn outbound(&self, model: &Model, state: usize) -> f64 {
        model
            .arrows
            .iter()
            .zip(&self.arrow_counts)
            .filter(|(a, _)| a.from == state)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Point probability of every arrow, or an error naming the first interval.
pub(crate) fn point_probs(model: &Model) -> Result<Vec<f64>> {
    model
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let e = a.effective();
            if e.is_point() {
                Ok(e.lo())
            } else {
                Err(Error::NotPoint(format!(
                    "arrow {} has probability {e}",
                    model.arrow_name(i)
                )))
            }
        })
        .collect()
}

fn require_no_white_peak(model: &Model) -> Result<()> {
    let peak = find_white_peak(model);
    if peak.is_empty() {
        Ok(())
    } else {
        Err(Error::WhitePeak(StructureReport::ids(model, &peak)))
    }
}

/// Solves the journey flow system `v(s0) = 1`,
/// `v(s) = sum_k v(k) p(k, s)` for states that are neither the initial state
/// nor in the black hole.
pub fn journey_statistics(model: &Model) -> Result<JourneyStatistics> {
    let p = point_probs(model)?;
    let n = model.states.len();
    let s0 = model.initial;
    let black_hole = find_black_hole(model);
    let inner: Vec<usize> = (0..n)
        .filter(|s| *s != s0 && !black_hole.contains(s))
        .collect();
    let mut pos = vec![usize::MAX; n];
    for (k, &s) in inner.iter().enumerate() {
        pos[s] = k;
    }
    let m = inner.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    let mut b = DVector::<f64>::zeros(m);
    for (arrow, &pr) in model.arrows.iter().zip(&p) {
        let to = pos[arrow.to];
        if to == usize::MAX {
            continue;
        }
        if arrow.from == s0 {
            b[to] += pr;
        } else if pos[arrow.from] != usize::MAX {
            a[(to, pos[arrow.from])] -= pr;
        }
    }
    let solution = if m == 0 {
        DVector::zeros(0)
    } else {
        a.lu().solve(&b).ok_or_else(|| {
            Error::Numeric(format!(
                "singular journey flow system over {} inner states",
                m
            ))
        })?
    };
    if solution.iter().any(|v| !v.is_finite() || *v < -1e-9) {
        return Err(Error::NonTerminating(
            "expected visit counts are unbounded".into(),
        ));
    }
    let mut visits = vec![0.0; n];
    visits[s0] = 1.0;
    for (k, &s) in inner.iter().enumerate() {
        visits[s] = solution[k].max(0.0);
    }
    let arrow_counts: Vec<f64> = model
        .arrows
        .iter()
        .zip(&p)
        .map(|(a, &pr)| {
            if black_hole.contains(&a.from) {
                0.0
            } else {
                visits[a.from] * pr
            }
        })
        .collect();
    let returns = model
        .arrows
        .iter()
        .zip(&arrow_counts)
        .filter(|(a, _)| a.to == s0)
        .map(|(_, c)| c)
        .sum();
    let absorbed = model
        .arrows
        .iter()
        .zip(&arrow_counts)
        .filter(|(a, _)| black_hole.contains(&a.to))
        .map(|(_, c)| c)
        .sum();
    Ok(JourneyStatistics {
        visits,
        arrow_counts,
        returns,
        absorbed,
        black_hole,
    })
}

/// Builds the reversed model from arrow counts. The reversed arrow keeps the
/// label; its label probability is the share of inbound mass carried by that
/// label and its arrow probability the share of this arrow within the label.
pub(crate) fn inverse_from_counts(model: &Model, counts: &[f64], kind: ModelKind) -> Result<Model> {
    let n = model.states.len();
    let mut inbound = vec![0.0; n];
    let mut label_mass: BTreeMap<(usize, Symbol), f64> = BTreeMap::new();
    let mut label_arrows: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut in_arrows = vec![0usize; n];
    for (a, &c) in model.arrows.iter().zip(counts) {
        inbound[a.to] += c;
        *label_mass.entry((a.to, a.label.clone())).or_default() += c;
        *label_arrows.entry((a.to, a.label.clone())).or_default() += 1;
        in_arrows[a.to] += 1;
    }
    let mut uniform = Vec::new();
    let mut arrows = Vec::new();
    for (a, &c) in model.arrows.iter().zip(counts) {
        let j = a.to;
        let key = (j, a.label.clone());
        let (lp, ap) = if inbound[j] > EPS * EPS {
            let mass = label_mass[&key];
            if c <= 0.0 || mass <= 0.0 {
                continue;
            }
            (mass / inbound[j], c / mass)
        } else {
            if !uniform.contains(&j) {
                uniform.push(j);
            }
            (
                label_arrows[&key] as f64 / in_arrows[j] as f64,
                1.0 / label_arrows[&key] as f64,
            )
        };
        arrows.push(Arrow {
            from: j,
            label: a.label.clone(),
            to: a.from,
            label_prob: ProbInterval::point(lp.clamp(0.0, 1.0))?,
            arrow_prob: ProbInterval::point(ap.clamp(0.0, 1.0))?,
        });
    }
    let mut out = Model {
        kind,
        arrows,
        ..model.clone()
    };
    out.notes.insert("direction".into(), "past".into());
    if !uniform.is_empty() {
        let mut ids: Vec<String> = uniform
            .iter()
            .map(|&s| model.states[s].id.to_string())
            .collect();
        ids.sort();
        out.notes.insert("uniform-inbound".into(), ids.join(","));
    }
    if kind.is_single_label() {
        for a in &mut out.arrows {
            a.label_prob = ProbInterval::ONE;
        }
    }
    Ok(out)
}

fn invert_point(model: &Model, kind: ModelKind) -> Result<Model> {
    require_no_white_peak(model)?;
    let stats = journey_statistics(model)?;
    inverse_from_counts(model, &stats.arrow_counts, kind)
}

/// Analytic inverse of a point-probability chain (fomm, hmm, or a model
/// whose agent is already fixed).
pub fn invert_chain(model: &Model) -> Result<Model> {
    let kind = match model.kind {
        ModelKind::Mdp | ModelKind::Smdp | ModelKind::MdpPlus => ModelKind::MdpFixed,
        k => k,
    };
    invert_point(model, kind)
}

/// Fixes the agent with `policy`, then inverts.
pub fn invert_mdp_fixed(model: &Model, policy: &Policy) -> Result<Model> {
    let fixed = policy.apply(model)?;
    invert_point(&fixed, ModelKind::MdpFixed)
}

/// Per-state cumulative distributions over outgoing arrows.
pub(crate) struct ArrowSampler {
    rows: Vec<Vec<(usize, f64)>>,
}

impl ArrowSampler {
    pub(crate) fn new(model: &Model, probs: &[f64]) -> Self {
        let mut rows = vec![Vec::new(); model.states.len()];
        for (i, (a, &p)) in model.arrows.iter().zip(probs).enumerate() {
            if p > 0.0 {
                rows[a.from].push((i, p));
            }
        }
        for row in &mut rows {
            let mut acc = 0.0;
            for entry in row.iter_mut() {
                acc += entry.1;
                entry.1 = acc;
            }
        }
        ArrowSampler { rows }
    }

    /// Samples an outgoing arrow of `state`; `None` when the state has no
    /// outgoing probability mass left at the drawn point.
    pub(crate) fn sample<R: Rng>(&self, state: usize, rng: &mut R) -> Option<usize> {
        let row = &self.rows[state];
        let total = row.last()?.1;
        let u = rng.random::<f64>() * total.max(1.0);
        row.iter().find(|(_, c)| u < *c).map(|(i, _)| *i)
    }
}

const MAX_JOURNEY_STEPS: usize = 10_000_000;

/// Arrow counts from `journeys` simulated journeys.
pub fn simulate_journeys(model: &Model, journeys: usize, seed: u64) -> Result<Vec<f64>> {
    if journeys == 0 {
        return Err(Error::NoStatistics("zero journeys requested".into()));
    }
    let probs = point_probs(model)?;
    let black_hole = find_black_hole(model);
    let sampler = ArrowSampler::new(model, &probs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; model.arrows.len()];
    for _ in 0..journeys {
        let mut s = model.initial;
        for step in 0.. {
            if step == MAX_JOURNEY_STEPS {
                return Err(Error::NonTerminating(format!(
                    "journey exceeded {MAX_JOURNEY_STEPS} steps"
                )));
            }
            let Some(i) = sampler.sample(s, &mut rng) else {
                break;
            };
            counts[i] += 1;
            s = model.arrows[i].to;
            if s == model.initial || black_hole.contains(&s) {
                break;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / journeys as f64)
        .collect())
}

/// Inverse from empirical journey counts; deterministic in `seed`.
pub fn monte_carlo_invert(model: &Model, journeys: usize, seed: u64) -> Result<Model> {
    require_no_white_peak(model)?;
    let counts = simulate_journeys(model, journeys, seed)?;
    let kind = match model.kind {
        ModelKind::Mdp | ModelKind::Smdp | ModelKind::MdpPlus => ModelKind::MdpFixed,
        k => k,
    };
    let mut out = inverse_from_counts(model, &counts, kind)?;
    out.notes.insert("journeys".into(), journeys.to_string());
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::{fomm, ModelBuilder, TraceSpec};
    use crate::symbol::sym;

    pub(crate) fn chain_ab() -> Model {
        fomm("A", &[("A", "B", 1.0), ("B", "A", 0.5), ("B", "B", 0.5)]).unwrap()
    }

    fn prob(m: &Model, from: &str, to: &str) -> f64 {
        let (f, t) = (m.state_index(from).unwrap(), m.state_index(to).unwrap());
        m.arrows
            .iter()
            .filter(|a| a.from == f && a.to == t)
            .map(|a| a.effective().lo())
            .sum()
    }

    #[test]
    fn chain_statistics() {
        let m = chain_ab();
        let st = journey_statistics(&m).unwrap();
        assert!((st.visits[0] - 1.0).abs() < 1e-12);
        assert!((st.visits[1] - 2.0).abs() < 1e-12);
        for c in &st.arrow_counts {
            assert!((c - 1.0).abs() < 1e-12);
        }
        assert!((st.returns - 1.0).abs() < 1e-12);
        assert_eq!(st.absorbed, 0.0);
    }

    #[test]
    fn chain_inverse() {
        let inv = invert_chain(&chain_ab()).unwrap();
        assert!((prob(&inv, "B", "A") - 0.5).abs() < 1e-12);
        assert!((prob(&inv, "B", "B") - 0.5).abs() < 1e-12);
        assert!((prob(&inv, "A", "B") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coin_is_self_inverse() {
        let m = fomm(
            "B",
            &[
                ("B", "B", 0.5),
                ("B", "W", 0.5),
                ("W", "B", 0.5),
                ("W", "W", 0.5),
            ],
        )
        .unwrap();
        let inv = invert_chain(&m).unwrap();
        for (f, t) in [("B", "B"), ("B", "W"), ("W", "B"), ("W", "W")] {
            assert!((prob(&inv, f, t) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn three_cycle_reverses() {
        let m = fomm("s0", &[("s0", "x", 1.0), ("x", "y", 1.0), ("y", "s0", 1.0)]).unwrap();
        let st = journey_statistics(&m).unwrap();
        assert!(st.arrow_counts.iter().all(|c| (c - 1.0).abs() < 1e-12));
        let inv = invert_chain(&m).unwrap();
        assert_eq!(prob(&inv, "s0", "y"), 1.0);
        assert_eq!(prob(&inv, "y", "x"), 1.0);
        assert_eq!(prob(&inv, "x", "s0"), 1.0);
    }

    #[test]
    fn straight_into_black_hole() {
        let m = fomm("s0", &[("s0", "z", 1.0), ("z", "z", 1.0)]).unwrap();
        let st = journey_statistics(&m).unwrap();
        assert_eq!(st.returns, 0.0);
        assert!((st.absorbed - 1.0).abs() < 1e-12);
        let inv = invert_chain(&m).unwrap();
        assert!((prob(&inv, "z", "s0") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn white_peak_rejected() {
        let m = fomm(
            "2",
            &[
                ("1", "2", 0.8),
                ("2", "2", 0.5),
                ("2", "3", 0.5),
                ("3", "3", 1.0),
            ],
        )
        .unwrap();
        match invert_chain(&m) {
            Err(Error::WhitePeak(ids)) => assert_eq!(ids, vec!["1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monte_carlo_agrees() {
        let m = chain_ab();
        let exact = invert_chain(&m).unwrap();
        let mc = monte_carlo_invert(&m, 100_000, 7).unwrap();
        for (f, t) in [("B", "A"), ("B", "B"), ("A", "B")] {
            assert!((prob(&exact, f, t) - prob(&mc, f, t)).abs() < 0.01);
        }
        assert_eq!(mc, monte_carlo_invert(&m, 100_000, 7).unwrap());
        assert!(matches!(
            monte_carlo_invert(&m, 0, 1),
            Err(Error::NoStatistics(_))
        ));
    }

    fn two_state_mdp() -> Model {
        ModelBuilder::new(ModelKind::Mdp)
            .obs(["x", "y"])
            .labels(["go", "stay"])
            .state("X", TraceSpec::point(sym("x")))
            .state("Y", TraceSpec::point(sym("y")))
            .initial("X")
            .arrow("X", "go", "Y", 1.0)
            .unwrap()
            .arrow("X", "stay", "X", 1.0)
            .unwrap()
            .arrow("Y", "go", "X", 0.5)
            .unwrap()
            .arrow("Y", "go", "Y", 0.5)
            .unwrap()
            .arrow("Y", "stay", "Y", 1.0)
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn mdp_fixed_split() {
        let m = two_state_mdp();
        let mut policy = Policy::new();
        policy.set(sym("X"), sym("go"), 1.0);
        policy.set(sym("X"), sym("stay"), 0.0);
        policy.set(sym("Y"), sym("go"), 1.0);
        policy.set(sym("Y"), sym("stay"), 0.0);
        let inv = invert_mdp_fixed(&m, &policy).unwrap();
        assert_eq!(inv.kind, ModelKind::MdpFixed);
        for s in 0..inv.states.len() {
            let sum: f64 = inv
                .labels_from(s)
                .iter()
                .map(|l| inv.agent_interval(s, l).unwrap().lo())
                .sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        let mut bad = policy.clone();
        bad.set(sym("X"), sym("go"), 1.2);
        assert!(invert_mdp_fixed(&m, &bad).is_err());
    }

    #[test]
    fn single_action_matches_chain() {
        let chain = chain_ab();
        let mut m = chain.clone();
        m.kind = ModelKind::MdpFixed;
        m.labels = vec![sym("go")];
        for a in &mut m.arrows {
            a.label = sym("go");
        }
        let mut policy = Policy::new();
        policy.set(sym("A"), sym("go"), 1.0);
        policy.set(sym("B"), sym("go"), 1.0);
        let inv = invert_mdp_fixed(&m, &policy).unwrap();
        let expected = invert_chain(&chain).unwrap();
        for (a, b) in inv.arrows.iter().zip(&expected.arrows) {
            assert_eq!((a.from, a.to), (b.from, b.to));
            assert!((a.effective().lo() - b.effective().lo()).abs() < 1e-12);
        }
    }
}
