//! Possible futures and pasts with their probabilities.

use worldmodel::format::parse_model;
use worldmodel::oracle::{enumerate_future, enumerate_future_exact, enumerate_past};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fig3 = parse_model(include_str!("../data/fig3.model"))?;
    print!("{}", enumerate_future(&fig3, 3, None)?.render());

    let chain = parse_model(include_str!("../data/chain-ab.model"))?;
    print!("{}", enumerate_past(&chain, 3)?.render());

    for (word, p) in enumerate_future_exact(&chain, 4, None)?.observation_words() {
        let word: Vec<&str> = word.iter().map(|o| o.as_str()).collect();
        println!("{p} {}", word.join(" "));
    }
    Ok(())
}
