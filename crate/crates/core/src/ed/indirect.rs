use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::events::{EventStream, Occurrence, Provenance};
use crate::prob::ProbInterval;
use crate::symbol::{EventLabel, ObsSymbol, Symbol};
use crate::trajectory::Trajectory;

/// Label given to change points found without a characteristic function.
pub const INDIRECT_LABEL: &str = "change";

#[derive(Clone, Debug, PartialEq)]
pub struct IndirectDetection {
    pub events: EventStream,
    /// Indices where a new segment begins.
    pub boundaries: Vec<usize>,
    /// Half-open `[start, end)` segments covering the trajectory.
    pub segments: Vec<(usize, usize)>,
    /// Distance between the windows on either side of each candidate
    /// boundary `window..=len - window`.
    pub distances: Vec<(usize, f64)>,
}

fn histogram(obs: &[&ObsSymbol]) -> BTreeMap<ObsSymbol, f64> {
    let mut h = BTreeMap::new();
    for o in obs {
        *h.entry((*o).clone()).or_insert(0.0) += 1.0 / obs.len() as f64;
    }
    h
}

/// Total-variation distance between the observation frequencies of two
/// windows.
pub fn total_variation(a: &[&ObsSymbol], b: &[&ObsSymbol]) -> f64 {
    let (ha, hb) = (histogram(a), histogram(b));
    let keys: std::collections::BTreeSet<_> = ha.keys().chain(hb.keys()).collect();
    keys.into_iter()
        .map(|k| (ha.get(k).unwrap_or(&0.0) - hb.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

/// Finds shifts in the observation distribution by comparing two adjacent
/// windows of `window` steps. Boundaries whose distance exceeds `threshold`
/// are kept; hits closer than `window` to each other are merged into the one
/// with the largest distance. Each boundary `b` becomes an occurrence at
/// `b - 1` labeled [`INDIRECT_LABEL`] with confidence
/// `[(d - threshold) / (1 - threshold), 1]`.
///
/// A detection may lag the true change by up to `window` steps, and a return
/// to an earlier regime with the same distribution is indistinguishable
/// from staying put.
pub fn detect_indirect(
    trajectory: &Trajectory,
    window: usize,
    threshold: f64,
) -> Result<IndirectDetection> {
    detect_indirect_as(trajectory, window, threshold, &Symbol::new(INDIRECT_LABEL)?)
}

pub fn detect_indirect_as(
    trajectory: &Trajectory,
    window: usize,
    threshold: f64,
    label: &EventLabel,
) -> Result<IndirectDetection> {
    let n = trajectory.len();
    if window == 0 {
        return Err(Error::Structure("window must be positive".into()));
    }
    if n < 2 * window {
        return Err(Error::TooShort(format!(
            "{n} steps; two windows of {window} need {}",
            2 * window
        )));
    }
    let obs: Vec<&ObsSymbol> = trajectory.observations().collect();
    let distances: Vec<(usize, f64)> = (window..=n - window)
        .map(|b| (b, total_variation(&obs[b - window..b], &obs[b..b + window])))
        .collect();
    let mut clusters: Vec<Vec<(usize, f64)>> = Vec::new();
    for &(b, d) in distances.iter().filter(|(_, d)| *d > threshold) {
        match clusters.last_mut() {
            Some(c) if b - c.last().map_or(b, |x| x.0) <= window => c.push((b, d)),
            _ => clusters.push(vec![(b, d)]),
        }
    }
    let mut boundaries = Vec::new();
    let mut events = EventStream::new();
    for c in clusters {
        let (b, d) =
            c.into_iter().fold(
                (0, f64::NEG_INFINITY),
                |best, x| if x.1 > best.1 { x } else { best },
            );
        let lo = if threshold < 1.0 {
            (d - threshold) / (1.0 - threshold)
        } else {
            1.0
        };
        boundaries.push(b);
        events.push(Occurrence {
            time: b - 1,
            label: label.clone(),
            confidence: ProbInterval::clamped(lo, 1.0),
            provenance: Provenance::Indirect,
        });
    }
    let mut cuts = vec![0];
    cuts.extend(&boundaries);
    cuts.push(n);
    let segments = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    Ok(IndirectDetection {
        events,
        boundaries,
        segments,
        distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::sym;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn regimes(parts: &[(usize, f64)], seed: u64) -> Trajectory {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut obs = Vec::new();
        for &(len, p_light) in parts {
            for _ in 0..len {
                obs.push(sym(if rng.random::<f64>() < p_light {
                    "light"
                } else {
                    "dark"
                }));
            }
        }
        Trajectory::from_observations(obs)
    }

    #[test]
    fn finds_day_to_night() {
        let t = regimes(&[(200, 0.9), (200, 0.1)], 1);
        let d = detect_indirect(&t, 20, 0.5).unwrap();
        assert_eq!(d.boundaries.len(), 1);
        assert!(d.boundaries[0].abs_diff(200) <= 20);
        assert_eq!(d.segments.len(), 2);
        assert_eq!(d.events.iter().next().unwrap().time, d.boundaries[0] - 1);
    }

    #[test]
    fn stationary_is_quiet() {
        let t = regimes(&[(1000, 0.5)], 2);
        assert!(detect_indirect(&t, 50, 0.5).unwrap().events.is_empty());
    }

    #[test]
    fn identical_regimes_are_invisible() {
        let t = regimes(&[(200, 0.7), (200, 0.7)], 3);
        assert!(detect_indirect(&t, 30, 0.5).unwrap().boundaries.is_empty());
    }

    #[test]
    fn too_short() {
        let t = regimes(&[(10, 0.5)], 0);
        assert!(matches!(
            detect_indirect(&t, 6, 0.5),
            Err(Error::TooShort(_))
        ));
    }
}
