//! Characteristic functions: interval-valued detectors of an event, looking
//! at a window of the past and a window of the future around a step.
//!
//! A function evaluated at step `t` judges whether the event happened between
//! `t` and `t + 1`. Its past window ends with observation `t`, its future
//! window starts with observation `t + 1`.

use std::collections::BTreeMap;
use std::path::Path;

use regex::Regex;

use crate::error::{Error, Result};
use crate::format::parse_prob;
use crate::prob::ProbInterval;
use crate::symbol::{ActSymbol, EventLabel, ObsSymbol, Symbol};
use crate::trajectory::Trajectory;

/// Past and future observation words mapped to a probability; unlisted pairs
/// are `[0,0]`.
pub type Table = BTreeMap<(Vec<ObsSymbol>, Vec<ObsSymbol>), ProbInterval>;

#[derive(Clone, Debug)]
pub enum CharFnKind {
    /// 1 when the agent played this action at `t`, else 0.
    ActionMatch(ActSymbol),
    /// 1 when observation `t` is this symbol, else 0.
    ObsMatch(ObsSymbol),
    /// 1 when both windows, joined with single spaces, fully match.
    Pattern {
        past: Regex,
        future: Regex,
    },
    Table(Table),
}

#[derive(Clone, Debug)]
pub struct CharFn {
    pub name: EventLabel,
    pub kind: CharFnKind,
    pub past_len: usize,
    pub future_len: usize,
}

fn anchored(re: &str, line: usize) -> Result<Regex> {
    Regex::new(&format!("^(?:{re})$"))
        .map_err(|e| Error::parse(line, format!("invalid pattern {re:?}: {e}")))
}

impl CharFn {
    pub fn action(name: EventLabel, action: ActSymbol) -> Self {
        CharFn {
            name,
            kind: CharFnKind::ActionMatch(action),
            past_len: 1,
            future_len: 0,
        }
    }

    pub fn observation(name: EventLabel, obs: ObsSymbol) -> Self {
        CharFn {
            name,
            kind: CharFnKind::ObsMatch(obs),
            past_len: 1,
            future_len: 0,
        }
    }

    pub fn pattern(
        name: EventLabel,
        past_len: usize,
        past: &str,
        future_len: usize,
        future: &str,
    ) -> Result<Self> {
        Ok(CharFn {
            name,
            kind: CharFnKind::Pattern {
                past: anchored(past, 0)?,
                future: anchored(future, 0)?,
            },
            past_len,
            future_len,
        })
    }

    pub fn table(name: EventLabel, table: Table) -> Result<Self> {
        let mut lens = table.keys().map(|(p, f)| (p.len(), f.len()));
        let (past_len, future_len) = lens.next().unwrap_or((0, 0));
        if lens.any(|l| l != (past_len, future_len)) {
            return Err(Error::Structure(format!(
                "table for {name} mixes window lengths"
            )));
        }
        Ok(CharFn {
            name,
            kind: CharFnKind::Table(table),
            past_len,
            future_len,
        })
    }

    /// Whether both windows around step `t` lie inside the trajectory.
    pub fn available(&self, trajectory: &Trajectory, t: usize) -> bool {
        t + 1 >= self.past_len
            && t + 1 + self.future_len <= trajectory.len()
            && t < trajectory.len()
    }

    /// The verdict for an event between `t` and `t + 1`; `[0,1]` when a
    /// window is missing.
    pub fn evaluate(&self, trajectory: &Trajectory, t: usize) -> ProbInterval {
        if !self.available(trajectory, t) {
            return ProbInterval::UNIT;
        }
        let steps = &trajectory.steps;
        let past: Vec<&ObsSymbol> = steps[t + 1 - self.past_len..=t]
            .iter()
            .map(|s| &s.obs)
            .collect();
        let future: Vec<&ObsSymbol> = steps[t + 1..t + 1 + self.future_len]
            .iter()
            .map(|s| &s.obs)
            .collect();
        let indicator = |b: bool| {
            if b {
                ProbInterval::ONE
            } else {
                ProbInterval::ZERO
            }
        };
        match &self.kind {
            CharFnKind::ActionMatch(a) => match &steps[t].act {
                Some(played) => indicator(played == a),
                None => ProbInterval::UNIT,
            },
            CharFnKind::ObsMatch(o) => indicator(&steps[t].obs == o),
            CharFnKind::Pattern { past: p, future: f } => {
                let join =
                    |w: &[&ObsSymbol]| w.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ");
                indicator(p.is_match(&join(&past)) && f.is_match(&join(&future)))
            }
            CharFnKind::Table(table) => {
                let key = (
                    past.into_iter().cloned().collect(),
                    future.into_iter().cloned().collect(),
                );
                table.get(&key).copied().unwrap_or(ProbInterval::ZERO)
            }
        }
    }
}

/// Splits on whitespace, keeping double-quoted runs together.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in line.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        out.push(cur);
    }
    out
}

fn symbol(s: &str, line: usize) -> Result<Symbol> {
    Symbol::new(s).map_err(|_| Error::parse(line, format!("invalid symbol {s:?}")))
}

fn window(s: &str, line: usize) -> Result<Vec<ObsSymbol>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| symbol(t, line)).collect()
}

/// Table lines: `<past> <future> <p>` where a window is a comma-joined word
/// or `-` when empty.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut table = Table::new();
    for (line, l) in crate::format::content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [past, future, p] = toks[..] else {
            return Err(Error::parse(line, "expected `<past> <future> <p>`"));
        };
        table.insert(
            (window(past, line)?, window(future, line)?),
            parse_prob(p, line)?,
        );
    }
    Ok(table)
}

fn length(value: &str, line: usize) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid window length {value:?}")))
}

/// Reads a characteristic-function file. Table paths are resolved against
/// `base` when relative.
pub fn parse_charfns(text: &str, base: Option<&Path>) -> Result<Vec<CharFn>> {
    let mut out = Vec::new();
    for (line, l) in crate::format::content_lines(text) {
        let toks = tokens(l);
        if toks.len() < 3 || toks[0] != "charfn" {
            return Err(Error::parse(line, "expected `charfn <name> <definition>`"));
        }
        let name = symbol(&toks[1], line)?;
        let def = &toks[2];
        let f = if let Some(a) = def.strip_prefix("action=") {
            CharFn::action(name, symbol(a, line)?)
        } else if let Some(o) = def.strip_prefix("obs=") {
            CharFn::observation(name, symbol(o, line)?)
        } else if def == "pattern" {
            let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
            for t in &toks[3..] {
                let (k, v) = t
                    .split_once('=')
                    .ok_or_else(|| Error::parse(line, format!("expected key=value, got {t:?}")))?;
                if !matches!(k, "past" | "future" | "plen" | "flen") {
                    return Err(Error::parse(line, format!("unknown pattern field {k:?}")));
                }
                fields.insert(k, v);
            }
            let past = fields.get("past").copied();
            let future = fields.get("future").copied();
            let plen = match fields.get("plen") {
                Some(v) => length(v, line)?,
                None => usize::from(past.is_some()),
            };
            let flen = match fields.get("flen") {
                Some(v) => length(v, line)?,
                None => usize::from(future.is_some()),
            };
            CharFn {
                name,
                kind: CharFnKind::Pattern {
                    past: anchored(past.unwrap_or(""), line)?,
                    future: anchored(future.unwrap_or(""), line)?,
                },
                past_len: plen,
                future_len: flen,
            }
        } else if def == "table" {
            let file = toks
                .get(3)
                .ok_or_else(|| Error::parse(line, "table needs a file"))?;
            let path = match base {
                Some(dir) if Path::new(file).is_relative() => dir.join(file),
                _ => Path::new(file).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path)?;
            CharFn::table(name, parse_table(&text)?)
                .map_err(|e| Error::parse(line, e.to_string()))?
        } else {
            return Err(Error::parse(line, format!("unknown definition {def:?}")));
        };
        out.push(f);
    }
    Ok(out)
}

/// Reads a characteristic-function file from disk.
pub fn load_charfns(path: &Path) -> Result<Vec<CharFn>> {
    let text = std::fs::read_to_string(path)?;
    parse_charfns(&text, path.parent())
}
