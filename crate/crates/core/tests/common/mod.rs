#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use worldmodel::format::parse_model;
use worldmodel::model::{fomm, Model, ModelBuilder, ModelKind, TraceSpec};
use worldmodel::prob::ProbInterval;
use worldmodel::symbol::sym;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn data_model(name: &str) -> Model {
    let text = std::fs::read_to_string(data_path(name)).expect("data file");
    parse_model(&text).expect("data model parses")
}

/// Strongly connected FOMM with 5 to 8 states: a ring through every state
/// plus one or two random shortcuts per state.
pub fn random_chain(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(5..=8);
    let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut triples = Vec::new();
    for i in 0..n {
        let mut targets = BTreeSet::from([(i + 1) % n]);
        for _ in 0..rng.random_range(1..=2) {
            targets.insert(rng.random_range(0..n));
        }
        let weights: Vec<f64> = targets
            .iter()
            .map(|_| rng.random_range(1..=9) as f64)
            .collect();
        let total: f64 = weights.iter().sum();
        for (&j, w) in targets.iter().zip(&weights) {
            triples.push((i, j, w / total));
        }
    }
    let refs: Vec<(&str, &str, f64)> = triples
        .iter()
        .map(|&(i, j, p)| (ids[i].as_str(), ids[j].as_str(), p))
        .collect();
    fomm("s0", &refs).expect("random chain")
}

/// Splits one into `k` positive multiples of 1/8.
fn eighths<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut units = vec![1u32; k];
    for _ in k..8 {
        units[rng.random_range(0..k)] += 1;
    }
    units.into_iter().map(|u| f64::from(u) / 8.0).collect()
}

/// FOMM or HMM with 1 to 4 states, every state with at least one way out.
pub fn random_small(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=4);
    let hidden = rng.random_bool(0.5);
    let ids: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let colours = ["a", "b"];
    let (kind, obs): (ModelKind, Vec<String>) = if hidden {
        (
            ModelKind::Hmm,
            colours.iter().map(|c| c.to_string()).collect(),
        )
    } else {
        (ModelKind::Fomm, ids.clone())
    };
    let mut b = ModelBuilder::new(kind)
        .obs(obs.iter().cloned())
        .initial("q0");
    for id in &ids {
        let o = if hidden {
            colours[rng.random_range(0..2)]
        } else {
            id.as_str()
        };
        b = b.state(id, TraceSpec::point(sym(o)));
    }
    for id in &ids {
        let k = rng.random_range(1..=n.min(3));
        let targets: Vec<&String> = ids.choose_multiple(&mut rng, k).collect();
        for (t, p) in targets.into_iter().zip(eighths(k, &mut rng)) {
            b = b.arrow(id, "true", t, p).expect("probability");
        }
    }
    b.build().expect("small model")
}

fn widen<R: Rng>(p: f64, rng: &mut R) -> ProbInterval {
    let d = f64::from(rng.random_range(0..=2u8)) / 8.0;
    ProbInterval::new((p - d).max(0.0), (p + d).min(1.0)).expect("widened interval")
}

fn eighth_interval<R: Rng>(rng: &mut R) -> ProbInterval {
    let a = rng.random_range(0..=8u8);
    let b = rng.random_range(a..=8u8);
    ProbInterval::new(f64::from(a) / 8.0, f64::from(b) / 8.0).expect("interval")
}

const STATE_IDS: [&str; 6] = ["s0", "room.1", "a_b", "x-2", "Q", "n'"];
const OBS: [&str; 3] = ["o0", "light", "o.2"];
const LABELS: [&str; 3] = ["go", "stay", "day.night"];

/// A valid model of any kind, with probabilities on a 1/8 grid so that every
/// number prints exactly.
pub fn random_model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = *ModelKind::ALL.choose(&mut rng).expect("kinds");
    let n = rng.random_range(1..=5);
    let mut ids: Vec<&str> = STATE_IDS.choose_multiple(&mut rng, n).copied().collect();
    ids.sort_by_key(|_| rng.random::<u32>());
    let single = kind.is_single_label();
    let obs: Vec<String> = if kind == ModelKind::Fomm {
        ids.iter().map(|s| s.to_string()).collect()
    } else {
        OBS[..rng.random_range(1..=3)]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let labels: Vec<&str> = if single {
        vec!["true"]
    } else {
        LABELS[..rng.random_range(1..=3)].to_vec()
    };
    let initial = ids[rng.random_range(0..n)];
    let mut b = ModelBuilder::new(kind)
        .obs(obs.iter().cloned())
        .initial(initial);
    if !single {
        b = b.labels(labels.iter().copied());
    }
    for id in &ids {
        let mut trace = match kind {
            ModelKind::Fomm => TraceSpec::point(sym(id)),
            ModelKind::Hmm => TraceSpec::point(sym(obs.choose(&mut rng).expect("obs"))),
            _ => {
                let k = rng.random_range(1..=obs.len());
                let shown: Vec<&String> = obs.choose_multiple(&mut rng, k).collect();
                let ps = eighths(k, &mut rng);
                let imprecise =
                    matches!(kind, ModelKind::Smdp | ModelKind::MdpPlus | ModelKind::Ed);
                TraceSpec::from_entries(shown.into_iter().zip(ps).map(|(o, p)| {
                    let p = if imprecise {
                        widen(p, &mut rng)
                    } else {
                        ProbInterval::point(p).expect("point")
                    };
                    (sym(o), p)
                }))
            }
        };
        if kind == ModelKind::Ed {
            trace.memory = rng.random_bool(0.5);
            if rng.random_bool(0.3) {
                trace.phenomena = vec!["daynight".into()];
            }
        }
        b = b.state(*id, trace);
    }
    for id in &ids {
        let k = rng.random_range(1..=labels.len());
        let used: Vec<&str> = labels.choose_multiple(&mut rng, k).copied().collect();
        let agent = eighths(k, &mut rng);
        for (label, share) in used.iter().zip(agent) {
            let lp = match kind {
                ModelKind::Fomm | ModelKind::Hmm => ProbInterval::ONE,
                ModelKind::Mdp | ModelKind::Smdp => ProbInterval::UNIT,
                ModelKind::MdpFixed => ProbInterval::point(share).expect("point"),
                ModelKind::MdpPlus => widen(share, &mut rng),
                ModelKind::Ed => eighth_interval(&mut rng),
            };
            let m = rng.random_range(1..=n.min(3));
            let targets: Vec<&&str> = ids.choose_multiple(&mut rng, m).collect();
            for (t, p) in targets.into_iter().zip(eighths(m, &mut rng)) {
                let ap = match kind {
                    ModelKind::Smdp if m == 1 => ProbInterval::ONE,
                    ModelKind::Smdp => ProbInterval::UNIT,
                    ModelKind::MdpPlus | ModelKind::Ed => widen(p, &mut rng),
                    _ => ProbInterval::point(p).expect("point"),
                };
                b = b.arrow_with(id, label, t, lp, ap);
            }
        }
    }
    if kind == ModelKind::Ed {
        for (rank, label) in labels.iter().enumerate() {
            if rng.random_bool(0.5) {
                b = b.priority(label, rank as i64 - 1);
            }
        }
    }
    let mut model = b.build().expect("random model");
    if rng.random_bool(0.3) {
        model.note("origin", format!("random {seed}"));
    }
    model
}

/// Point probability of every arrow.
fn point_probs(model: &Model) -> Vec<f64> {
    model.arrows.iter().map(|a| a.effective().lo()).collect()
}

/// One long walk from the initial state, cut into journeys at every return.
/// For each return the last `depth` `(obs before, label)` steps are counted;
/// the walk is never reset, so a past may span several journeys.
pub fn empirical_past(
    model: &Model,
    depth: usize,
    journeys: usize,
    seed: u64,
) -> BTreeMap<Vec<(String, String)>, f64> {
    let probs = point_probs(model);
    let mut out: BTreeMap<Vec<(String, String)>, f64> = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history: Vec<(String, String)> = Vec::new();
    let mut state = model.initial;
    let mut recorded = 0usize;
    let mut returns = 0usize;
    while returns < journeys {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for (i, _) in model
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.from == state)
        {
            acc += probs[i];
            chosen = Some(i);
            if u < acc {
                break;
            }
        }
        let arrow = &model.arrows[chosen.expect("every state has a way out")];
        let obs = model.states[state]
            .trace
            .deterministic()
            .expect("point trace")
            .to_string();
        history.push((obs, arrow.label.to_string()));
        if history.len() > depth {
            history.remove(0);
        }
        state = arrow.to;
        if state == model.initial {
            returns += 1;
            if history.len() == depth {
                *out.entry(history.clone()).or_default() += 1.0;
                recorded += 1;
            }
        }
    }
    for v in out.values_mut() {
        *v /= recorded as f64;
    }
    out
}
