//! Merges states with the same future, then joins the forward and backward
//! minimal models at a fresh initial state.

use worldmodel::constructions::{backward_part, forward_part, minimal_model, minimize_forward};
use worldmodel::format::{parse_model, serialize_model};
use worldmodel::oracle::enumerate_future;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let colours = parse_model(include_str!("../data/colours.model"))?;
    let (reduced, classes) = minimize_forward(&colours, 6);
    println!(
        "{} states -> {} ({:?})",
        colours.states.len(),
        reduced.states.len(),
        classes.classes
    );

    let coin = parse_model(include_str!("../data/coin.model"))?;
    let joined = minimal_model(&coin, 6)?;
    print!("{}", serialize_model(&joined));

    let original = enumerate_future(&coin, 4, None)?;
    let forward = enumerate_future(&forward_part(&joined)?, 4, None)?;
    let backward = enumerate_future(&backward_part(&joined)?, 4, None)?;
    println!(
        "forward part off by {:.1e}",
        forward.max_difference(&original)
    );
    println!("backward developments: {}", backward.len());
    Ok(())
}
