//! Walking through three rooms, each remembering its lamp. On entering a room
//! the model recalls how the lamp was left.

use worldmodel::ed::track;
use worldmodel::events::{EventStream, Occurrence, Provenance};
use worldmodel::format::parse_model;
use worldmodel::oracle::Collision;
use worldmodel::prob::ProbInterval;
use worldmodel::symbol::sym;
use worldmodel::trajectory::Trajectory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let house = parse_model(include_str!("../data/house.model"))?;
    let seen = [
        "on", "on", "off", "off", "off", "on", "on", "off", "off", "off", "on", "on",
    ];
    let traj = Trajectory::from_observations(seen.iter().map(|s| sym(s)));
    let moves = [1, 3, 5, 8, 10].map(|time| Occurrence {
        time,
        label: sym("move"),
        confidence: ProbInterval::ONE,
        provenance: Provenance::Direct,
    });
    let result = track(
        &house,
        &traj,
        &EventStream::from_occurrences(moves.to_vec())?,
        Collision::Priority,
    )?;
    for (t, b) in result.beliefs.iter().enumerate() {
        let recalled = result.recalled[t].as_ref().map_or("-", |o| o.as_str());
        println!(
            "t={t:<2} {} lamp={} recalled={recalled}",
            b.describe(&house),
            seen[t]
        );
    }
    Ok(())
}
