//! Forward minimization by partition refinement.

use std::collections::BTreeMap;

use super::Partition;
use crate::model::{Arrow, Model, State};
use crate::prob::ProbInterval;
use crate::symbol::Symbol;

fn q(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn trace_key(model: &Model, s: usize) -> Vec<(Symbol, i64, i64)> {
    model.states[s]
        .trace
        .entries
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(o, p)| (o.clone(), q(p.lo()), q(p.hi())))
        .collect()
}

type Signature = Vec<(Symbol, i64, i64, usize, i64, i64)>;

fn signature(model: &Model, s: usize, class: &[usize]) -> Signature {
    let mut agg: BTreeMap<(Symbol, i64, i64, usize), (f64, f64)> = BTreeMap::new();
    for (_, a) in model.outgoing(s) {
        let e = agg
            .entry((
                a.label.clone(),
                q(a.label_prob.lo()),
                q(a.label_prob.hi()),
                class[a.to],
            ))
            .or_default();
        e.0 += a.arrow_prob.lo();
        e.1 += a.arrow_prob.hi();
    }
    agg.into_iter()
        .filter(|(_, (_, hi))| *hi > 0.0)
        .map(|((l, llo, lhi, c), (lo, hi))| (l, llo, lhi, c, q(lo), q(hi)))
        .collect()
}

fn renumber<K: Ord>(keys: Vec<K>) -> (Vec<usize>, usize) {
    let mut ids: BTreeMap<&K, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(keys.len());
    for k in &keys {
        let next = ids.len();
        out.push(*ids.entry(k).or_insert(next));
    }
    let n = ids.len();
    (out, n)
}

/// Merges states with the same trace and the same per-label distribution
/// over classes. Starts from the partition by trace and refines at most
/// `depth` times (stopping early at a fixpoint). Each class is named after
/// its smallest member id and copies that member's arrows, aggregated by
/// target class.
pub fn minimize_forward(model: &Model, depth: usize) -> (Model, Partition) {
    let n = model.states.len();
    let (mut class, mut count) = renumber((0..n).map(|s| trace_key(model, s)).collect());
    for _ in 0..depth {
        let keys: Vec<_> = (0..n)
            .map(|s| (class[s], signature(model, s, &class)))
            .collect();
        let (next, next_count) = renumber(keys);
        let stable = next_count == count;
        class = next;
        count = next_count;
        if stable {
            break;
        }
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for s in 0..n {
        members[class[s]].push(s);
    }
    for m in &mut members {
        m.sort_by(|&a, &b| model.states[a].id.cmp(&model.states[b].id));
    }
    let reps: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let states: Vec<State> = reps.iter().map(|&r| model.states[r].clone()).collect();
    let mut arrows = Vec::new();
    for (c, &r) in reps.iter().enumerate() {
        let mut agg: BTreeMap<(Symbol, usize), (ProbInterval, f64, f64)> = BTreeMap::new();
        for (_, a) in model.outgoing(r) {
            let e = agg
                .entry((a.label.clone(), class[a.to]))
                .or_insert((a.label_prob, 0.0, 0.0));
            e.1 += a.arrow_prob.lo();
            e.2 += a.arrow_prob.hi();
        }
        for ((label, to), (lp, lo, hi)) in agg {
            arrows.push(Arrow {
                from: c,
                label,
                to,
                label_prob: lp,
                arrow_prob: ProbInterval::clamped(lo, hi),
            });
        }
    }
    let out = Model {
        states,
        arrows,
        initial: class[model.initial],
        ..model.clone()
    };
    let partition = Partition {
        classes: members
            .iter()
            .map(|m| m.iter().map(|&s| model.states[s].id.clone()).collect())
            .collect(),
    };
    (out, partition)
}
