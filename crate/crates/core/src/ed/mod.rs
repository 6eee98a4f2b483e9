//! Event-driven runtime: detecting events in a trajectory, following an ED
//! model along it, finding where it holds, and feeding its states upward as
//! events for other models.

mod charfn;
mod derived;
mod direct;
mod indirect;
mod phenomenon;
mod track;

pub use charfn::{load_charfns, parse_charfns, parse_table, CharFn, CharFnKind, Table};
pub use derived::{derived_events, DERIVED_THRESHOLD};
pub use direct::{detect_direct, DEFAULT_THRESHOLD};
pub use indirect::{
    detect_indirect, detect_indirect_as, total_variation, IndirectDetection, INDIRECT_LABEL,
};
pub use phenomenon::{phenomenon_validity, Validity};
pub use track::{track, track_from, TrackResult};
