use std::collections::BTreeMap;

use super::parse_prob;
use crate::error::{Error, Result};
use crate::model::{Arrow, Model, ModelKind, State, TraceSpec};
use crate::prob::ProbInterval;
use crate::symbol::Symbol;

struct PendingArrow {
    line: usize,
    from: String,
    label: Symbol,
    to: String,
    lp: Option<ProbInterval>,
    ap: ProbInterval,
}

fn symbol(tok: &str, line: usize) -> Result<Symbol> {
    Symbol::new(tok).map_err(|_| Error::parse(line, format!("invalid symbol {tok:?}")))
}

/// Parses a model document. Structural problems are errors; kind rules are
/// left to [`crate::validate::validate`].
pub fn parse_model(text: &str) -> Result<Model> {
    let mut kind: Option<ModelKind> = None;
    let mut obs: Vec<Symbol> = Vec::new();
    let mut labels: Vec<Symbol> = Vec::new();
    let mut states: Vec<State> = Vec::new();
    let mut initial: Option<usize> = None;
    let mut pending: Vec<PendingArrow> = Vec::new();
    let mut priorities = BTreeMap::new();
    let mut notes = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if let Some(note) = l.strip_prefix("# note:") {
            let (k, v) = note
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "note needs key=value"))?;
            notes.insert(k.trim().to_string(), v.trim().to_string());
            continue;
        }
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let head = toks[0];
        if kind.is_none() && head != "model" {
            return Err(Error::parse(
                line,
                "document must start with `model <kind>`",
            ));
        }
        match head {
            "model" => {
                if kind.is_some() {
                    return Err(Error::parse(line, "duplicate model line"));
                }
                let k = toks
                    .get(1)
                    .ok_or_else(|| Error::parse(line, "missing model kind"))?;
                kind = Some(
                    k.parse()
                        .map_err(|_| Error::parse(line, format!("unknown model kind {k:?}")))?,
                );
                if toks.len() > 2 {
                    return Err(Error::parse(line, "trailing tokens after model kind"));
                }
            }
            "obs" => {
                for t in &toks[1..] {
                    let s = symbol(t, line)?;
                    if obs.contains(&s) {
                        return Err(Error::parse(line, format!("duplicate observation {s}")));
                    }
                    obs.push(s);
                }
            }
            "act" | "event" => {
                for t in &toks[1..] {
                    let s = symbol(t, line)?;
                    if labels.contains(&s) {
                        return Err(Error::parse(line, format!("duplicate label {s}")));
                    }
                    labels.push(s);
                }
            }
            "state" => {
                let (state, is_initial) = parse_state(&toks, line, &obs)?;
                if states.iter().any(|s| s.id == state.id) {
                    return Err(Error::parse(
                        line,
                        format!("duplicate state id {}", state.id),
                    ));
                }
                if is_initial {
                    if initial.is_some() {
                        return Err(Error::parse(line, "more than one initial state"));
                    }
                    initial = Some(states.len());
                }
                states.push(state);
            }
            "arrow" => pending.push(parse_arrow(&toks, line)?),
            "priority" => {
                if toks.len() != 3 {
                    return Err(Error::parse(line, "expected `priority <event> <rank>`"));
                }
                let rank = toks[2]
                    .parse::<i64>()
                    .map_err(|_| Error::parse(line, format!("invalid rank {:?}", toks[2])))?;
                priorities.insert(symbol(toks[1], line)?, rank);
            }
            other => return Err(Error::parse(line, format!("unknown directive {other:?}"))),
        }
    }

    let kind = kind.ok_or_else(|| Error::parse(0, "empty document"))?;
    if kind.is_single_label() && labels.is_empty() {
        labels.push(Symbol::true_label());
    }
    let initial = initial.ok_or_else(|| Error::parse(0, "no initial state"))?;
    let index = |id: &str, line: usize| {
        states
            .iter()
            .position(|s| s.id.as_str() == id)
            .ok_or_else(|| Error::parse(line, format!("unknown state {id}")))
    };
    let mut arrows = Vec::with_capacity(pending.len());
    for p in &pending {
        let label_prob = match p.lp {
            Some(lp) => lp,
            None => kind
                .default_label_prob()
                .ok_or_else(|| Error::parse(p.line, format!("{kind} arrows need lp=")))?,
        };
        arrows.push(Arrow {
            from: index(&p.from, p.line)?,
            label: p.label.clone(),
            to: index(&p.to, p.line)?,
            label_prob,
            arrow_prob: p.ap,
        });
    }
    let model = Model {
        kind,
        obs,
        labels,
        states,
        initial,
        arrows,
        priorities,
        notes,
    };
    model.check_structure()?;
    Ok(model)
}

fn parse_state(toks: &[&str], line: usize, obs: &[Symbol]) -> Result<(State, bool)> {
    let id = toks
        .get(1)
        .ok_or_else(|| Error::parse(line, "missing state id"))?;
    let id = symbol(id, line)?;
    let mut i = 2;
    let mut is_initial = false;
    let mut memory = false;
    while let Some(&t) = toks.get(i) {
        match t {
            "initial" => is_initial = true,
            "memory" => memory = true,
            _ => break,
        }
        i += 1;
    }
    if toks.get(i) != Some(&"trace") {
        return Err(Error::parse(line, "expected `trace` in state line"));
    }
    i += 1;
    let mut entries = BTreeMap::new();
    let mut phenomena = Vec::new();
    while let Some(&t) = toks.get(i) {
        i += 1;
        if t == "phenomena" {
            phenomena.extend(toks[i..].iter().map(|s| s.to_string()));
            break;
        }
        let (o, p) = t
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected obs=p, got {t:?}")))?;
        let o = symbol(o, line)?;
        if !obs.contains(&o) {
            return Err(Error::parse(line, format!("undeclared observation {o}")));
        }
        if entries.insert(o.clone(), parse_prob(p, line)?).is_some() {
            return Err(Error::parse(line, format!("observation {o} listed twice")));
        }
    }
    let trace = TraceSpec {
        entries,
        memory,
        phenomena,
    };
    Ok((State { id, trace }, is_initial))
}

fn parse_arrow(toks: &[&str], line: usize) -> Result<PendingArrow> {
    if toks.len() < 5 {
        return Err(Error::parse(
            line,
            "expected `arrow <from> <label> <to> [lp=..] ap=..`",
        ));
    }
    let mut lp = None;
    let mut ap = None;
    for t in &toks[4..] {
        if let Some(v) = t.strip_prefix("lp=") {
            lp = Some(parse_prob(v, line)?);
        } else if let Some(v) = t.strip_prefix("ap=") {
            ap = Some(parse_prob(v, line)?);
        } else {
            return Err(Error::parse(line, format!("unexpected token {t:?}")));
        }
    }
    Ok(PendingArrow {
        line,
        from: toks[1].to_string(),
        label: symbol(toks[2], line)?,
        to: toks[3].to_string(),
        lp,
        ap: ap.ok_or_else(|| Error::parse(line, "arrow needs ap="))?,
    })
}

fn interval_key(p: &ProbInterval) -> (u64, u64) {
    (p.lo().to_bits(), p.hi().to_bits())
}

/// Sorts alphabets, states and arrows into canonical order. Serialization
/// always writes this form.
pub fn canonicalize(model: &Model) -> Model {
    let mut order: Vec<usize> = (0..model.states.len()).collect();
    order.sort_by(|&a, &b| model.states[a].id.cmp(&model.states[b].id));
    let mut remap = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let states = order.iter().map(|&i| model.states[i].clone()).collect();
    let mut arrows: Vec<Arrow> = model
        .arrows
        .iter()
        .map(|a| Arrow {
            from: remap[a.from],
            to: remap[a.to],
            ..a.clone()
        })
        .collect();
    arrows.sort_by(|a, b| {
        (
            a.from,
            &a.label,
            a.to,
            interval_key(&a.label_prob),
            interval_key(&a.arrow_prob),
        )
            .cmp(&(
                b.from,
                &b.label,
                b.to,
                interval_key(&b.label_prob),
                interval_key(&b.arrow_prob),
            ))
    });
    let mut obs = model.obs.clone();
    obs.sort();
    let mut labels = model.labels.clone();
    labels.sort();
    Model {
        kind: model.kind,
        obs,
        labels,
        states,
        initial: remap[model.initial],
        arrows,
        priorities: model.priorities.clone(),
        notes: model.notes.clone(),
    }
}

/// Writes the canonical document.
pub fn serialize_model(model: &Model) -> String {
    let m = canonicalize(model);
    let mut out = format!("model {}\n", m.kind);
    for (k, v) in &m.notes {
        let v = v.replace(['\n', '\r'], " ");
        out.push_str(&format!("# note: {k}={v}\n"));
    }
    out.push_str("obs");
    for o in &m.obs {
        out.push(' ');
        out.push_str(o.as_str());
    }
    out.push('\n');
    if !m.kind.is_single_label() {
        out.push_str(if m.kind == ModelKind::Ed {
            "event"
        } else {
            "act"
        });
        for l in &m.labels {
            out.push(' ');
            out.push_str(l.as_str());
        }
        out.push('\n');
    }
    for (i, s) in m.states.iter().enumerate() {
        out.push_str("state ");
        out.push_str(s.id.as_str());
        if i == m.initial {
            out.push_str(" initial");
        }
        if s.trace.memory {
            out.push_str(" memory");
        }
        out.push_str(" trace");
        for (o, p) in &s.trace.entries {
            out.push_str(&format!(" {o}={p}"));
        }
        if !s.trace.phenomena.is_empty() {
            out.push_str(" phenomena");
            for n in &s.trace.phenomena {
                out.push(' ');
                out.push_str(n);
            }
        }
        out.push('\n');
    }
    let default_lp = m.kind.default_label_prob();
    for a in &m.arrows {
        out.push_str(&format!(
            "arrow {} {} {}",
            m.states[a.from].id, a.label, m.states[a.to].id
        ));
        if default_lp != Some(a.label_prob) {
            out.push_str(&format!(" lp={}", a.label_prob));
        }
        out.push_str(&format!(" ap={}\n", a.arrow_prob));
    }
    for (e, r) in &m.priorities {
        out.push_str(&format!("priority {e} {r}\n"));
    }
    out
}
