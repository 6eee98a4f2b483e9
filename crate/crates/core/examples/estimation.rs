//! A coin and a BBWW loop give the same standard FOMM. The Markov check tells
//! them apart.

use worldmodel::format::{parse_model, serialize_model};
use worldmodel::oracle::{check_markov, estimate_fomm, simulate, SimulationConfig};
use worldmodel::symbol::sym;
use worldmodel::trajectory::Trajectory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coin = parse_model(include_str!("../data/coin.model"))?;
    let tosses = simulate(&coin, &SimulationConfig::new(10_000, 42))?.trajectory;
    let bbww =
        Trajectory::from_observations((0..10_000).map(|t| sym(if t % 4 < 2 { "B" } else { "W" })));

    for (name, traj) in [("coin", &tosses), ("bbww", &bbww)] {
        println!("== {name}");
        print!("{}", serialize_model(&estimate_fomm(traj)?));
        print!("{}", check_markov(traj, 1, 0.01)?.render());
    }
    Ok(())
}
