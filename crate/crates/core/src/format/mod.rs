//! Line-oriented text formats and DOT export.

mod dot;
mod files;
mod model;
mod trajectory;

pub use dot::export_dot;
pub use files::{
    parse_events, parse_partition, parse_policy, parse_preference, serialize_events,
    serialize_partition, serialize_policy, serialize_preference,
};
pub use model::{canonicalize, parse_model, serialize_model};
pub use trajectory::{parse_trajectory, serialize_trajectory};

use crate::error::{Error, Result};
use crate::prob::ProbInterval;

/// Parses `p` or `[lo,hi]`.
pub(crate) fn parse_prob(token: &str, line: usize) -> Result<ProbInterval> {
    let bad = || Error::parse(line, format!("invalid probability {token:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let (lo, hi) = if let Some(inner) = token.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        (num(a)?, num(b)?)
    } else {
        let p = num(token)?;
        (p, p)
    };
    ProbInterval::new(lo, hi).map_err(|_| {
        Error::parse(
            line,
            format!("invalid interval {token} (need 0 <= lo <= hi <= 1)"),
        )
    })
}

/// Always bracketed, as used in event streams.
pub(crate) fn bracketed(p: &ProbInterval) -> String {
    format!(
        "[{},{}]",
        crate::prob::format_prob(p.lo()),
        crate::prob::format_prob(p.hi())
    )
}

/// Numbered content lines with comments and blanks removed.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then_some((i + 1, l))
    })
}
