use super::{bracketed, content_lines, parse_prob};
use crate::constructions::Partition;
use crate::error::{Error, Result};
use crate::events::{EventStream, Occurrence};
use crate::policy::{Policy, Preference};
use crate::prob::format_prob;
use crate::symbol::Symbol;

fn symbol(tok: &str, line: usize) -> Result<Symbol> {
    Symbol::new(tok).map_err(|_| Error::parse(line, format!("invalid symbol {tok:?}")))
}

/// One class per line, state ids separated by whitespace.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let classes = content_lines(text)
        .map(|(line, l)| {
            l.split_whitespace()
                .map(|t| symbol(t, line))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition { classes })
}

pub fn serialize_partition(p: &Partition) -> String {
    p.classes
        .iter()
        .map(|c| {
            let ids: Vec<&str> = c.iter().map(Symbol::as_str).collect();
            ids.join(" ") + "\n"
        })
        .collect()
}

/// `state <id>: a1 > a2 > a3`
pub fn parse_preference(text: &str) -> Result<Preference> {
    let mut pref = Preference::default();
    for (line, l) in content_lines(text) {
        let rest = l
            .strip_prefix("state ")
            .ok_or_else(|| Error::parse(line, "expected `state <id>: a1 > a2`"))?;
        let (id, list) = rest
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "missing `:` after state id"))?;
        let id = symbol(id.trim(), line)?;
        let actions = list
            .split('>')
            .map(|a| symbol(a.trim(), line))
            .collect::<Result<Vec<_>>>()?;
        if pref.ranking.insert(id.clone(), actions).is_some() {
            return Err(Error::parse(line, format!("state {id} ranked twice")));
        }
    }
    Ok(pref)
}

pub fn serialize_preference(p: &Preference) -> String {
    p.ranking
        .iter()
        .map(|(s, list)| {
            let acts: Vec<&str> = list.iter().map(Symbol::as_str).collect();
            format!("state {s}: {}\n", acts.join(" > "))
        })
        .collect()
}

/// `policy <state> <action> <p>`
pub fn parse_policy(text: &str) -> Result<Policy> {
    let mut policy = Policy::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "policy" {
            return Err(Error::parse(line, "expected `policy <state> <action> <p>`"));
        }
        let p = parse_prob(toks[3], line)?;
        if !p.is_point() {
            return Err(Error::parse(line, "policy probabilities are points"));
        }
        policy.set(symbol(toks[1], line)?, symbol(toks[2], line)?, p.lo());
    }
    Ok(policy)
}

pub fn serialize_policy(p: &Policy) -> String {
    let mut out = String::new();
    if p.adjusted {
        out.push_str("# adjusted to respect lower bounds\n");
    }
    for ((s, a), v) in &p.entries {
        out.push_str(&format!("policy {s} {a} {}\n", format_prob(*v)));
    }
    out
}

/// `<time> <label> [lo,hi] <provenance>`
pub fn parse_events(text: &str) -> Result<EventStream> {
    let mut occ = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::parse(
                line,
                "expected `<time> <label> [lo,hi] <provenance>`",
            ));
        }
        let time = toks[0]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid time {:?}", toks[0])))?;
        occ.push(Occurrence {
            time,
            label: symbol(toks[1], line)?,
            confidence: parse_prob(toks[2], line)?,
            provenance: toks[3]
                .parse()
                .map_err(|_| Error::parse(line, format!("unknown provenance {:?}", toks[3])))?,
        });
    }
    EventStream::from_occurrences(occ)
}

pub fn serialize_events(events: &EventStream) -> String {
    events
        .iter()
        .map(|o| {
            format!(
                "{} {} {} {}\n",
                o.time,
                o.label,
                bracketed(&o.confidence),
                o.provenance
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::sym;

    #[test]
    fn preference_file() {
        let p = parse_preference("state s: rain > dry\n# c\nstate t: a\n").unwrap();
        assert_eq!(p.ranking[&sym("s")], vec![sym("rain"), sym("dry")]);
        assert_eq!(parse_preference(&serialize_preference(&p)).unwrap(), p);
        assert!(parse_preference("s: a > b\n").is_err());
    }

    #[test]
    fn event_file() {
        let text = "3 sunset [1,1] direct\n7 sunrise [0.6,1] indirect\n";
        let e = parse_events(text).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(serialize_events(&e), text);
        assert!(parse_events("3 sunset [1,1] guessed\n").is_err());
    }

    #[test]
    fn policy_and_partition_files() {
        let p = parse_policy("policy s rain 0.8\npolicy s dry 0.2\n").unwrap();
        assert_eq!(p.get(&sym("s"), &sym("rain")), 0.8);
        assert_eq!(parse_policy(&serialize_policy(&p)).unwrap(), p);
        let part = parse_partition("B1 B2\nW1 W2\n").unwrap();
        assert_eq!(part.classes.len(), 2);
        assert_eq!(serialize_partition(&part), "B1 B2\nW1 W2\n");
    }
}
