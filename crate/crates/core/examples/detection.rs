//! Finds sunsets and sunrises in a simulated sky, first with characteristic
//! functions and then without knowing what to look for.

use worldmodel::ed::{detect_direct, detect_indirect, parse_charfns, DEFAULT_THRESHOLD};
use worldmodel::format::{parse_model, serialize_events};
use worldmodel::oracle::{simulate, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let daynight = parse_model(include_str!("../data/daynight.model"))?;
    let run = simulate(&daynight, &SimulationConfig::new(80, 9))?;

    let fns = parse_charfns(include_str!("../data/daynight.charfn"), None)?;
    let found = detect_direct(&run.trajectory, &fns, DEFAULT_THRESHOLD);
    println!("truth:\n{}", serialize_events(&run.events));
    println!("direct:\n{}", serialize_events(&found));

    let blind = detect_indirect(&run.trajectory, 4, 0.5)?;
    println!("indirect:\n{}", serialize_events(&blind.events));
    println!("segments: {:?}", blind.segments);
    Ok(())
}
