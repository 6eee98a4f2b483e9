//! Time-stamped event occurrences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::prob::ProbInterval;
use crate::symbol::EventLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Direct,
    Indirect,
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Direct => "direct",
            Provenance::Indirect => "indirect",
            Provenance::Derived => "derived",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Provenance::Direct),
            "indirect" => Ok(Provenance::Indirect),
            "derived" => Ok(Provenance::Derived),
            _ => Err(Error::Structure(format!("unknown provenance {s:?}"))),
        }
    }
}

/// An event detected at time `time`. The event moves an ED model between the
/// state at `time` and the state at `time + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Occurrence {
    pub time: usize,
    pub label: EventLabel,
    pub confidence: ProbInterval,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventStream {
    occurrences: Vec<Occurrence>,
}

impl EventStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts by time (stable, so same-time order is kept) and rejects
    /// `[0,0]` confidences.
    pub fn from_occurrences(mut occurrences: Vec<Occurrence>) -> Result<Self> {
        if let Some(o) = occurrences.iter().find(|o| o.confidence.is_zero()) {
            return Err(Error::Structure(format!(
                "occurrence of {} at {} has zero confidence",
                o.label, o.time
            )));
        }
        occurrences.sort_by_key(|o| o.time);
        Ok(EventStream { occurrences })
    }

    pub fn push(&mut self, occ: Occurrence) {
        let pos = self.occurrences.partition_point(|o| o.time <= occ.time);
        self.occurrences.insert(pos, occ);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Occurrence> {
        self.occurrences.iter()
    }

    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    /// Occurrences at time `t`, in stream order.
    pub fn at(&self, t: usize) -> impl Iterator<Item = &Occurrence> {
        let start = self.occurrences.partition_point(|o| o.time < t);
        self.occurrences[start..]
            .iter()
            .take_while(move |o| o.time == t)
    }

    pub fn times_of<'a>(&'a self, label: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.occurrences
            .iter()
            .filter(move |o| o.label.as_str() == label)
            .map(|o| o.time)
    }

    pub fn merge(&self, other: &EventStream) -> EventStream {
        let mut all = self.occurrences.clone();
        all.extend(other.occurrences.iter().cloned());
        all.sort_by_key(|o| o.time);
        EventStream { occurrences: all }
    }
}

impl IntoIterator for EventStream {
    type Item = Occurrence;
    type IntoIter = std::vec::IntoIter<Occurrence>;

    fn into_iter(self) -> Self::IntoIter {
        self.occurrences.into_iter()
    }
}
