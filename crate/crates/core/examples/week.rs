//! A week model driven by the days counted by the day/night model below it.

use worldmodel::ed::{derived_events, track, DERIVED_THRESHOLD};
use worldmodel::format::{parse_model, serialize_events};
use worldmodel::oracle::{simulate, Collision, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let daynight = parse_model(include_str!("../data/daynight.model"))?;
    let week = parse_model(include_str!("../data/week.model"))?;
    let run = simulate(&daynight, &SimulationConfig::new(200, 5))?;

    let days = track(&daynight, &run.trajectory, &run.events, Collision::Priority)?;
    let dawns = derived_events("daynight", &daynight, &days.beliefs, DERIVED_THRESHOLD);
    print!("{}", serialize_events(&dawns));

    let weekday = track(&week, &run.trajectory, &dawns, Collision::Priority)?;
    println!(
        "today: {}",
        weekday
            .current()
            .map(|b| b.describe(&week))
            .unwrap_or_default()
    );
    Ok(())
}
