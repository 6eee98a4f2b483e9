//! The day/night model holds on Earth. After the move to Mars the sky stays
//! lit while the Earth clock keeps announcing sunsets, and the model stops
//! fitting.

use worldmodel::ed::phenomenon_validity;
use worldmodel::format::parse_model;
use worldmodel::oracle::{simulate, Collision, SimulationConfig};
use worldmodel::symbol::sym;
use worldmodel::trajectory::Trajectory;

const LANDING: usize = 150;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let daynight = parse_model(include_str!("../data/daynight.model"))?;
    let earth = simulate(&daynight, &SimulationConfig::new(300, 3))?;
    let sky = earth.trajectory.observations().enumerate().map(|(t, o)| {
        if t < LANDING {
            o.clone()
        } else {
            sym("light")
        }
    });
    let traj = Trajectory::from_observations(sky);

    let v = phenomenon_validity(&daynight, &traj, &earth.events, Collision::Priority, 1)?;
    println!("landed at {LANDING}");
    for (start, end) in &v.intervals {
        println!("valid on [{start}, {end})");
    }
    println!("permanent so far: {}", v.permanent);
    Ok(())
}
