use crate::belief::Belief;
use crate::events::{EventStream, Occurrence, Provenance};
use crate::model::Model;
use crate::prob::ProbInterval;
use crate::symbol::Symbol;

/// Default belief level a state must rise above to count as entered.
pub const DERIVED_THRESHOLD: f64 = 0.5;

/// Events `<name>.<state>` for every time the belief in a state rises above
/// `threshold`. The occurrence is stamped one step before the belief change,
/// matching the time of the event that caused it, so the stream can drive a
/// higher-level model.
pub fn derived_events(
    name: &str,
    model: &Model,
    beliefs: &[Belief],
    threshold: f64,
) -> EventStream {
    let mut stream = EventStream::new();
    for (t, pair) in beliefs.windows(2).enumerate() {
        for (s, p) in pair[1].iter() {
            if p > threshold && pair[0].get(s) <= threshold {
                let label = Symbol::new(format!("{name}.{}", model.states[s].id))
                    .expect("model ids are tokens");
                stream.push(Occurrence {
                    time: t,
                    label,
                    confidence: ProbInterval::clamped(p, p),
                    provenance: Provenance::Derived,
                });
            }
        }
    }
    stream
}
