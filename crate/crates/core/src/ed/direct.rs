use std::collections::BTreeMap;

use super::CharFn;
use crate::events::{EventStream, Occurrence, Provenance};
use crate::symbol::EventLabel;
use crate::trajectory::Trajectory;

/// Default lower bound a verdict must reach to count as an occurrence.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Evaluates every function at every step. Functions sharing a name are
/// variants of one detector: at each step the available variant with the
/// longest combined window decides. An occurrence is emitted when the
/// verdict's lower bound reaches `threshold`.
pub fn detect_direct(trajectory: &Trajectory, fns: &[CharFn], threshold: f64) -> EventStream {
    let mut variants: BTreeMap<&EventLabel, Vec<&CharFn>> = BTreeMap::new();
    for f in fns {
        variants.entry(&f.name).or_default().push(f);
    }
    let mut stream = EventStream::new();
    for t in 0..trajectory.len() {
        for (name, fs) in &variants {
            let best = fs.iter().filter(|f| f.available(trajectory, t)).fold(
                None::<&&CharFn>,
                |best, f| match best {
                    Some(b) if b.past_len + b.future_len >= f.past_len + f.future_len => Some(b),
                    _ => Some(f),
                },
            );
            let Some(f) = best else { continue };
            let verdict = f.evaluate(trajectory, t);
            if verdict.lo() >= threshold && !verdict.is_zero() {
                stream.push(Occurrence {
                    time: t,
                    label: (*name).clone(),
                    confidence: verdict,
                    provenance: Provenance::Direct,
                });
            }
        }
    }
    stream
}
