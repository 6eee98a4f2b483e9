//! Turns an event into a fact, and tracks whether an event happened an odd
//! number of times.

use worldmodel::constructions::{event_to_fact, parity_model, EventSet};
use worldmodel::format::{parse_model, serialize_model};
use worldmodel::oracle::{simulate, SimulationConfig};
use worldmodel::symbol::sym;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse_model(include_str!("../data/chain-ab.model"))?;
    let leave_a = EventSet::from_triples(
        &model,
        sym("leave-a"),
        &[("A".into(), "true".into(), "B".into())],
    )?;

    let fact = event_to_fact(&model, &leave_a)?;
    print!("{}", serialize_model(&fact.model));

    let parity = parity_model(&model, &leave_a)?;
    let run = simulate(&parity.model, &SimulationConfig::new(12, 4))?;
    for (t, &s) in run.states.iter().enumerate() {
        let odd = parity.fact.states.contains(&s);
        println!("t={t:<2} state={:<4} odd={odd}", parity.model.state_id(s));
    }
    Ok(())
}
