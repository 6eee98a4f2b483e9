//! Inversion of interval models over a family of point resolutions.
//!
//! Each state's agent intervals and each `(state, label)` group of world
//! intervals form a polytope `{x : lo <= x <= hi, sum x = 1}`. Members of the
//! family pick one point per polytope: either every combination of vertices,
//! or random convex combinations of them. Every member is inverted as a
//! fixed model and the reversed probabilities are reported as `[min, max]`
//! over the members. The bounds hold for the explored family only.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{invert_point, point_probs};
use crate::analysis::find_white_peak;
use crate::error::{Error, Result};
use crate::model::{Model, ModelKind};
use crate::prob::{ProbInterval, EPS};
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlusMode {
    VertexEnumeration,
    MonteCarlo { seed: u64 },
}

/// A polytope over some arrows: `targets[k]` lists the arrows that take the
/// `k`-th coordinate (all arrows of a label share the agent coordinate).
struct Group {
    targets: Vec<Vec<usize>>,
    agent: bool,
    vertices: Vec<Vec<f64>>,
}

fn vertices(bounds: &[ProbInterval]) -> Vec<Vec<f64>> {
    let n = bounds.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    if n == 0 {
        return out;
    }
    for free in 0..n {
        for mask in 0u64..(1u64 << (n - 1)) {
            let mut x = vec![0.0; n];
            let mut bit = 0;
            let mut rest = 0.0;
            for (k, b) in bounds.iter().enumerate() {
                if k == free {
                    continue;
                }
                x[k] = if mask >> bit & 1 == 1 { b.hi() } else { b.lo() };
                rest += x[k];
                bit += 1;
            }
            let v = 1.0 - rest;
            if bounds[free].contains(v) {
                x[free] = v.clamp(bounds[free].lo(), bounds[free].hi());
                if !out
                    .iter()
                    .any(|y| y.iter().zip(&x).all(|(a, b)| (a - b).abs() <= EPS))
                {
                    out.push(x);
                }
            }
        }
    }
    out
}

fn groups(model: &Model) -> Result<Vec<Group>> {
    let mut agent: BTreeMap<usize, BTreeMap<Symbol, (ProbInterval, Vec<usize>)>> = BTreeMap::new();
    let mut world: BTreeMap<(usize, Symbol), Vec<usize>> = BTreeMap::new();
    for (i, a) in model.arrows.iter().enumerate() {
        agent
            .entry(a.from)
            .or_default()
            .entry(a.label.clone())
            .or_insert((a.label_prob, Vec::new()))
            .1
            .push(i);
        world.entry((a.from, a.label.clone())).or_default().push(i);
    }
    let mut out = Vec::new();
    for (state, labels) in agent {
        let (bounds, targets): (Vec<_>, Vec<_>) = labels.into_values().unzip();
        out.push(Group {
            vertices: vertices(&bounds),
            targets,
            agent: true,
        });
        if out.last().is_some_and(|g| g.vertices.is_empty()) {
            return Err(Error::Infeasible(format!(
                "agent intervals of state {} admit no policy",
                model.states[state].id
            )));
        }
    }
    for ((state, label), arrows) in world {
        let bounds: Vec<_> = arrows.iter().map(|&i| model.arrows[i].arrow_prob).collect();
        let vs = vertices(&bounds);
        if vs.is_empty() {
            return Err(Error::Infeasible(format!(
                "world intervals of state {} label {label} cannot sum to 1",
                model.states[state].id
            )));
        }
        out.push(Group {
            targets: arrows.into_iter().map(|i| vec![i]).collect(),
            agent: false,
            vertices: vs,
        });
    }
    Ok(out)
}

fn resolve(model: &Model, groups: &[Group], points: &[Vec<f64>]) -> Result<Model> {
    let mut m = model.clone();
    m.kind = ModelKind::MdpFixed;
    for (g, x) in groups.iter().zip(points) {
        for (targets, &v) in g.targets.iter().zip(x) {
            let p = ProbInterval::point(v.clamp(0.0, 1.0))?;
            for &i in targets {
                if g.agent {
                    m.arrows[i].label_prob = p;
                } else {
                    m.arrows[i].arrow_prob = p;
                }
            }
        }
    }
    Ok(m)
}

fn dirichlet_mix<R: Rng>(vs: &[Vec<f64>], rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = vs
        .iter()
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = w.iter().sum();
    let mut x = vec![0.0; vs[0].len()];
    for (v, wi) in vs.iter().zip(&w) {
        for (xk, vk) in x.iter_mut().zip(v) {
            *xk += vk * wi / total;
        }
    }
    x
}

type ArrowKey = (Symbol, Symbol, Symbol);

#[derive(Default)]
struct Bounds {
    lp: (f64, f64),
    ap: (f64, f64),
    seen: usize,
}

/// Interval inverse over a family of resolutions of `model`'s intervals.
/// `budget` caps the number of vertex combinations (vertex mode) or is the
/// number of sampled members (Monte-Carlo mode). Members whose zero
/// probabilities cut the model into a white peak are skipped.
pub fn invert_mdp_plus(model: &Model, mode: PlusMode, budget: usize) -> Result<Model> {
    let peak = find_white_peak(model);
    if !peak.is_empty() {
        return Err(Error::WhitePeak(crate::analysis::StructureReport::ids(
            model, &peak,
        )));
    }
    let groups = groups(model)?;
    let members: Vec<Vec<Vec<f64>>> = match mode {
        PlusMode::VertexEnumeration => {
            let total = groups
                .iter()
                .try_fold(1usize, |acc, g| acc.checked_mul(g.vertices.len()));
            match total {
                Some(t) if t <= budget => {}
                _ => {
                    return Err(Error::Budget(format!(
                        "{} vertex combinations exceed the budget of {budget}",
                        total.map_or("too many".to_string(), |t| t.to_string())
                    )))
                }
            }
            let mut all = vec![Vec::new()];
            for g in &groups {
                all = all
                    .into_iter()
                    .flat_map(|prefix: Vec<Vec<f64>>| {
                        g.vertices.iter().map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v.clone());
                            p
                        })
                    })
                    .collect();
            }
            all
        }
        PlusMode::MonteCarlo { seed } => {
            if budget == 0 {
                return Err(Error::Budget("zero samples requested".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| {
                    groups
                        .iter()
                        .map(|g| dirichlet_mix(&g.vertices, &mut rng))
                        .collect()
                })
                .collect()
        }
    };

    let mut bounds: BTreeMap<ArrowKey, Bounds> = BTreeMap::new();
    let mut valid = 0usize;
    for member in &members {
        let resolved = resolve(model, &groups, member)?;
        point_probs(&resolved)?;
        let inv = match invert_point(&resolved, ModelKind::MdpFixed) {
            Ok(inv) => inv,
            Err(Error::WhitePeak(_)) => continue,
            Err(e) => return Err(e),
        };
        valid += 1;
        for a in &inv.arrows {
            let key = (
                inv.states[a.from].id.clone(),
                a.label.clone(),
                inv.states[a.to].id.clone(),
            );
            let b = bounds.entry(key).or_insert(Bounds {
                lp: (f64::INFINITY, f64::NEG_INFINITY),
                ap: (f64::INFINITY, f64::NEG_INFINITY),
                seen: 0,
            });
            b.lp = (b.lp.0.min(a.label_prob.lo()), b.lp.1.max(a.label_prob.hi()));
            b.ap = (b.ap.0.min(a.arrow_prob.lo()), b.ap.1.max(a.arrow_prob.hi()));
            b.seen += 1;
        }
    }
    if valid == 0 {
        return Err(Error::Budget(
            "no valid member in the explored family".into(),
        ));
    }

    let mut out = model.clone();
    out.kind = ModelKind::MdpPlus;
    out.arrows.clear();
    for ((from, label, to), b) in bounds {
        let (lp_lo, ap_lo) = if b.seen < valid {
            (0.0, 0.0)
        } else {
            (b.lp.0, b.ap.0)
        };
        out.arrows.push(crate::model::Arrow {
            from: out.require_state(from.as_str())?,
            label,
            to: out.require_state(to.as_str())?,
            label_prob: ProbInterval::clamped(lp_lo, b.lp.1),
            arrow_prob: ProbInterval::clamped(ap_lo, b.ap.1),
        });
    }
    out.notes.insert("direction".into(), "past".into());
    out.notes
        .insert("approximate".into(), "family-relative".into());
    out.notes.insert("members".into(), valid.to_string());
    Ok(out)
}
