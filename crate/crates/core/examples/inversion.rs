//! Builds models that predict the past: analytically, by sampling journeys,
//! and for a model whose probabilities are only known as intervals.

use worldmodel::format::{parse_model, parse_policy, serialize_model};
use worldmodel::inversion::{
    invert_chain, invert_mdp_fixed, invert_mdp_plus, monte_carlo_invert, PlusMode,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chain = parse_model(include_str!("../data/chain-ab.model"))?;
    println!("{}", serialize_model(&invert_chain(&chain)?));
    println!(
        "{}",
        serialize_model(&monte_carlo_invert(&chain, 20_000, 1)?)
    );

    let weather = parse_model(include_str!("../data/weather.model"))?;
    let policy = parse_policy(include_str!("../data/weather.policy"))?;
    println!("{}", serialize_model(&invert_mdp_fixed(&weather, &policy)?));

    let switch = parse_model(include_str!("../data/switch.model"))?;
    let hull = invert_mdp_plus(&switch, PlusMode::VertexEnumeration, 10_000)?;
    print!("{}", serialize_model(&hull));
    Ok(())
}
