//! Event-driven quotient of a model by a partition of its states.

use std::collections::{BTreeMap, BTreeSet};

use super::{EventSet, Partition};
use crate::error::{Error, Result};
use crate::model::{Arrow, Model, ModelKind, State, TraceSpec};
use crate::prob::ProbInterval;
use crate::symbol::Symbol;

fn hull(a: Option<ProbInterval>, b: ProbInterval) -> ProbInterval {
    a.map_or(b, |a| a.hull(&b))
}

/// Builds the ED model whose states are the partition classes and whose
/// arrows are induced by the monitored events. Every arrow that crosses
/// classes must belong to a monitored event.
///
/// The occurrence probability of an event in a class is the hull of its
/// per-member probabilities; the world probability of reaching a class is
/// the hull of the members' normalized target distributions. Class traces
/// are hulls of member traces.
pub fn quotient(model: &Model, partition: &Partition, monitored: &[EventSet]) -> Result<Model> {
    let class = partition.class_of(model)?;
    for e in monitored {
        e.check(model)?;
    }
    let covered: BTreeSet<usize> = monitored
        .iter()
        .flat_map(|e| e.arrows.iter().copied())
        .collect();
    let uncovered: Vec<String> = model
        .arrows
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            class[a.from] != class[a.to] && a.effective().hi() > 0.0 && !covered.contains(i)
        })
        .map(|(i, _)| model.arrow_name(i))
        .collect();
    if !uncovered.is_empty() {
        return Err(Error::Coverage(uncovered));
    }

    let k = partition.classes.len();
    let mut states = Vec::with_capacity(k);
    for members in &partition.classes {
        let idx: Vec<usize> = members
            .iter()
            .map(|id| model.require_state(id.as_str()))
            .collect::<Result<_>>()?;
        let observed: BTreeSet<&Symbol> = idx
            .iter()
            .flat_map(|&s| model.states[s].trace.entries.keys())
            .collect();
        let entries = observed
            .into_iter()
            .map(|o| {
                let p = idx
                    .iter()
                    .map(|&s| model.states[s].trace.prob(o))
                    .reduce(|a, b| a.hull(&b))
                    .unwrap_or(ProbInterval::ZERO);
                (o.clone(), p)
            })
            .collect();
        let phenomena: Vec<String> = idx
            .iter()
            .flat_map(|&s| model.states[s].trace.phenomena.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ids: Vec<&str> = members.iter().map(Symbol::as_str).collect();
        states.push(State {
            id: Symbol::new(ids.join("+"))?,
            trace: TraceSpec {
                entries,
                memory: idx.iter().any(|&s| model.states[s].trace.memory),
                phenomena,
            },
        });
    }

    let mut arrows = Vec::new();
    for e in monitored {
        for c in 0..k {
            let members: Vec<usize> = (0..model.states.len()).filter(|&s| class[s] == c).collect();
            let mut occurrence: Option<ProbInterval> = None;
            let mut world: BTreeMap<usize, Option<ProbInterval>> = BTreeMap::new();
            let mut targets: Vec<BTreeMap<usize, (f64, f64)>> = Vec::new();
            for &s in &members {
                let mut per_target: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
                for (i, a) in model.outgoing(s) {
                    if e.arrows.contains(&i) {
                        let p = a.effective();
                        let t = per_target.entry(class[a.to]).or_default();
                        t.0 += p.lo();
                        t.1 += p.hi();
                    }
                }
                let lo: f64 = per_target.values().map(|t| t.0).sum();
                let hi: f64 = per_target.values().map(|t| t.1).sum();
                occurrence = Some(hull(occurrence, ProbInterval::clamped(lo, hi)));
                if hi > 0.0 {
                    for &d in per_target.keys() {
                        world.entry(d).or_insert(None);
                    }
                    targets.push(per_target);
                }
            }
            if targets.is_empty() {
                continue;
            }
            for (&d, slot) in world.iter_mut() {
                for per_target in &targets {
                    let (dlo, dhi) = per_target.get(&d).copied().unwrap_or((0.0, 0.0));
                    let (olo, ohi) = per_target
                        .iter()
                        .filter(|(t, _)| **t != d)
                        .fold((0.0, 0.0), |acc, (_, v)| (acc.0 + v.0, acc.1 + v.1));
                    let lo = if dlo + ohi > 0.0 {
                        dlo / (dlo + ohi)
                    } else {
                        0.0
                    };
                    let hi = if dhi + olo > 0.0 {
                        dhi / (dhi + olo)
                    } else {
                        0.0
                    };
                    *slot = Some(hull(*slot, ProbInterval::clamped(lo, hi)));
                }
            }
            let lp = occurrence.unwrap_or(ProbInterval::ZERO);
            for (d, ap) in world {
                let ap = ap.unwrap_or(ProbInterval::ZERO);
                if ap.hi() > 0.0 {
                    arrows.push(Arrow {
                        from: c,
                        label: e.name.clone(),
                        to: d,
                        label_prob: lp,
                        arrow_prob: ap,
                    });
                }
            }
        }
    }

    let mut labels: Vec<Symbol> = Vec::new();
    for e in monitored {
        if !labels.contains(&e.name) {
            labels.push(e.name.clone());
        }
    }
    if labels.is_empty() {
        labels.push(Symbol::new("none")?);
    }
    let mut out = Model {
        kind: ModelKind::Ed,
        obs: model.obs.clone(),
        labels,
        states,
        initial: class[model.initial],
        arrows,
        priorities: BTreeMap::new(),
        notes: BTreeMap::new(),
    };
    out.note("quotient-of", model.kind.as_str());
    out.check_structure()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fomm;
    use crate::symbol::sym;

    fn bbww() -> Model {
        crate::format::parse_model(
            "model hmm
obs B W
state B1 initial trace B=1
state B2 trace B=1
state W1 trace W=1
state W2 trace W=1
arrow B1 true B2 ap=1
arrow B2 true W1 ap=1
arrow W1 true W2 ap=1
arrow W2 true B1 ap=1
",
        )
        .unwrap()
    }

    fn halves() -> Partition {
        Partition {
            classes: vec![vec![sym("B1"), sym("B2")], vec![sym("W1"), sym("W2")]],
        }
    }

    #[test]
    fn bbww_day_night() {
        let m = bbww();
        let change = EventSet::from_triples(
            &m,
            sym("change"),
            &[
                ("B2".into(), "true".into(), "W1".into()),
                ("W2".into(), "true".into(), "B1".into()),
            ],
        )
        .unwrap();
        let q = quotient(&m, &halves(), &[change]).unwrap();
        assert_eq!(q.kind, ModelKind::Ed);
        assert_eq!(q.states.len(), 2);
        assert_eq!(q.states[0].id.as_str(), "B1+B2");
        assert_eq!(q.arrows.len(), 2);
        for a in &q.arrows {
            assert_ne!(a.from, a.to);
            assert_eq!(a.label_prob, ProbInterval::UNIT);
            assert_eq!(a.arrow_prob, ProbInterval::ONE);
        }
        assert_eq!(q.states[0].trace.deterministic(), Some(&sym("B")));
        assert!(crate::validate::validate(&q).unwrap().is_ok());
    }

    #[test]
    fn coverage_violation_lists_arrows() {
        match quotient(&bbww(), &halves(), &[]) {
            Err(Error::Coverage(arrows)) => {
                assert_eq!(arrows, ["B2-true->W1", "W2-true->B1"])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_partition_is_isomorphic() {
        let m = fomm(
            "B",
            &[
                ("B", "B", 0.5),
                ("B", "W", 0.5),
                ("W", "B", 0.5),
                ("W", "W", 0.25),
                ("W", "B", 0.25),
            ],
        )
        .unwrap();
        let q = quotient(
            &m,
            &Partition::identity(&m),
            &[EventSet::all(&m, sym("step"))],
        )
        .unwrap();
        assert_eq!(q.states.len(), 2);
        assert_eq!(q.initial, m.initial);
        let p = |q: &Model, f: usize, t: usize| -> f64 {
            q.arrows
                .iter()
                .filter(|a| a.from == f && a.to == t)
                .map(|a| a.effective().lo())
                .sum()
        };
        for f in 0..2 {
            for t in 0..2 {
                assert!((p(&q, f, t) - p(&m, f, t)).abs() < 1e-12);
            }
        }
    }
}
