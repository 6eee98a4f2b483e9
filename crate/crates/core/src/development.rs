//! Possible developments and their truncated descriptions.

use std::collections::BTreeMap;
use std::fmt;

use crate::prob::ProbInterval;
use crate::symbol::{ObsSymbol, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Past,
    Future,
}

/// One step of a development: the label taken and the observation it is
/// paired with. For the future the observation is the one seen after the
/// label; for the past it is the one seen before it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DevStep {
    pub label: Symbol,
    pub obs: ObsSymbol,
}

/// A finite word beginning a possible future (`a1 o1 a2 o2 ...`) or ending a
/// possible past (`o-k a-k ... o-1 a-1`, chronological).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Development {
    pub direction: Direction,
    pub steps: Vec<DevStep>,
}

impl Development {
    pub fn empty(direction: Direction) -> Self {
        Development {
            direction,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn observations(&self) -> Vec<ObsSymbol> {
        self.steps.iter().map(|s| s.obs.clone()).collect()
    }
}

impl fmt::Display for Development {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("()");
        }
        let words: Vec<String> = self
            .steps
            .iter()
            .map(|s| match self.direction {
                Direction::Future => format!("{} {}", s.label, s.obs),
                Direction::Past => format!("{} {}", s.obs, s.label),
            })
            .collect();
        f.write_str(&words.join(" "))
    }
}

/// Developments of a fixed depth with their probabilities. Developments of
/// probability `[0,0]` are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct FutureSet {
    pub direction: Direction,
    pub depth: usize,
    pub entries: BTreeMap<Development, ProbInterval>,
}

impl FutureSet {
    pub fn get(&self, dev: &Development) -> ProbInterval {
        self.entries.get(dev).copied().unwrap_or(ProbInterval::ZERO)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of lower bounds; equals the total for point descriptions.
    pub fn total(&self) -> f64 {
        self.entries.values().map(ProbInterval::lo).sum()
    }

    /// Merges developments with the same observation word. Point
    /// probabilities add; interval bounds add with the upper end capped at 1.
    pub fn observation_words(&self) -> BTreeMap<Vec<ObsSymbol>, ProbInterval> {
        let mut out: BTreeMap<Vec<ObsSymbol>, (f64, f64)> = BTreeMap::new();
        for (dev, p) in &self.entries {
            let e = out.entry(dev.observations()).or_default();
            e.0 += p.lo();
            e.1 += p.hi();
        }
        out.into_iter()
            .map(|(k, (lo, hi))| (k, ProbInterval::clamped(lo, hi)))
            .collect()
    }

    /// Largest endpoint difference over the union of developments.
    pub fn max_difference(&self, other: &FutureSet) -> f64 {
        self.entries
            .keys()
            .chain(other.entries.keys())
            .map(|d| {
                let (a, b) = (self.get(d), other.get(d));
                (a.lo() - b.lo()).abs().max((a.hi() - b.hi()).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &FutureSet, tol: f64) -> bool {
        self.direction == other.direction && self.max_difference(other) <= tol
    }

    /// Renders one `<probability> <development>` line per entry.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (dev, p) in &self.entries {
            out.push_str(&format!("{p} {dev}\n"));
        }
        out
    }
}
