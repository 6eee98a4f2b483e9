//! Collapses two blacks and two whites into an event-driven model that only
//! moves when the colour changes.

use worldmodel::constructions::{quotient, EventSet};
use worldmodel::format::{parse_model, parse_partition, serialize_model};
use worldmodel::symbol::sym;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse_model(include_str!("../data/bbww.model"))?;
    let halves = parse_partition(include_str!("../data/halves.partition"))?;
    let turn = EventSet::from_triples(
        &model,
        sym("turn"),
        &[
            ("B2".into(), "true".into(), "W1".into()),
            ("W2".into(), "true".into(), "B1".into()),
        ],
    )?;
    print!("{}", serialize_model(&quotient(&model, &halves, &[turn])?));
    Ok(())
}
