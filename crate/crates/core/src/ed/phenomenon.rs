use super::track::track_from;
use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::events::EventStream;
use crate::model::Model;
use crate::oracle::Collision;
use crate::trajectory::Trajectory;

/// Where an ED model describes a trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    /// Maximal half-open `[start, end)` intervals, in order.
    pub intervals: Vec<(usize, usize)>,
    /// The model fits everything observed so far. Whether it keeps fitting
    /// cannot be known from the data.
    pub permanent: bool,
}

/// Time intervals on which the model can be followed without contradiction.
/// Tracking may begin anywhere, in any state that shows the observation at
/// that step. An interval counts only if at least `min_events` monitored
/// events moved the model inside it; otherwise the model was merely idle
/// there and has not been confirmed.
pub fn phenomenon_validity(
    model: &Model,
    trajectory: &Trajectory,
    events: &EventStream,
    collision: Collision,
    min_events: usize,
) -> Result<Validity> {
    let n = trajectory.len();
    let everywhere = Belief::uniform(0..model.states.len())?;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        let run = match track_from(
            model,
            trajectory,
            events,
            collision,
            everywhere.clone(),
            start,
        ) {
            Ok(r) => Some((n, r.applied)),
            Err(Error::TrackingFailed { time }) if time > start => {
                let prefix = Trajectory::new(trajectory.steps[..time].to_vec());
                let r = track_from(model, &prefix, events, collision, everywhere.clone(), start)?;
                Some((time, r.applied))
            }
            Err(Error::TrackingFailed { .. }) => None,
            Err(e) => return Err(e),
        };
        let Some((end, applied)) = run else { continue };
        let inside = applied.iter().filter(|o| o.time + 1 < end).count();
        if inside >= min_events && candidates.last().is_none_or(|&(_, e)| e < end) {
            candidates.push((start, end));
        }
    }
    let permanent = candidates.len() == 1 && candidates[0] == (0, n);
    Ok(Validity {
        intervals: candidates,
        permanent,
    })
}
