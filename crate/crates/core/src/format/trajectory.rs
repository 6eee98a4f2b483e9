use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::trajectory::{Step, Trajectory};

fn symbols(toks: &[&str], line: usize) -> Result<Vec<Symbol>> {
    toks.iter()
        .map(|t| Symbol::new(t).map_err(|_| Error::parse(line, format!("invalid symbol {t:?}"))))
        .collect()
}

/// Parses `t0 <n>`, optional `obs ...`/`act ...` headers, then one
/// `<obs> <act|->` line per step. Without a `t0` header every step is past.
pub fn parse_trajectory(text: &str) -> Result<Trajectory> {
    let mut t0: Option<(usize, usize)> = None;
    let mut obs_alphabet = None;
    let mut act_alphabet = None;
    let mut steps = Vec::new();
    for (line, l) in super::content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "t0" if steps.is_empty() => {
                let n = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|_| toks.len() == 2)
                    .ok_or_else(|| Error::parse(line, "expected `t0 <index>`"))?;
                t0 = Some((n, line));
            }
            "obs" if steps.is_empty() => obs_alphabet = Some(symbols(&toks[1..], line)?),
            "act" if steps.is_empty() => act_alphabet = Some(symbols(&toks[1..], line)?),
            _ => {
                if toks.len() != 2 {
                    return Err(Error::parse(line, "expected `<obs> <act|->`"));
                }
                let obs = Symbol::new(toks[0])
                    .map_err(|_| Error::parse(line, format!("invalid symbol {:?}", toks[0])))?;
                if let Some(alpha) = &obs_alphabet {
                    if !alpha.contains(&obs) {
                        return Err(Error::parse(line, format!("unknown observation {obs}")));
                    }
                }
                let act = match toks[1] {
                    "-" => None,
                    a => {
                        let a = Symbol::new(a)
                            .map_err(|_| Error::parse(line, format!("invalid symbol {a:?}")))?;
                        if let Some(alpha) = &act_alphabet {
                            if !alpha.contains(&a) {
                                return Err(Error::parse(line, format!("unknown action {a}")));
                            }
                        }
                        Some(a)
                    }
                };
                steps.push(Step { obs, act });
            }
        }
    }
    let len = steps.len();
    let t0 = match t0 {
        Some((n, line)) if n > len => {
            return Err(Error::parse(line, format!("t0 {n} beyond {len} steps")))
        }
        Some((n, _)) => n,
        None => len,
    };
    Ok(Trajectory {
        steps,
        t0,
        obs_alphabet,
        act_alphabet,
    })
}

pub fn serialize_trajectory(t: &Trajectory) -> String {
    let mut out = format!("t0 {}\n", t.t0);
    for (name, alpha) in [("obs", &t.obs_alphabet), ("act", &t.act_alphabet)] {
        if let Some(alpha) = alpha {
            out.push_str(name);
            for s in alpha {
                out.push(' ');
                out.push_str(s.as_str());
            }
            out.push('\n');
        }
    }
    for s in &t.steps {
        let act = s.act.as_ref().map_or("-", |a| a.as_str());
        out.push_str(&format!("{} {}\n", s.obs, act));
    }
    out
}
