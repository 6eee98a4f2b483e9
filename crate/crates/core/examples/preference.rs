use worldmodel::format::{parse_model, parse_preference, serialize_policy};
use worldmodel::oracle::preference_to_policy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Rain happens between 10% and 80% of the time, whatever the agent wants.
    let rain = parse_model(include_str!("../data/rain.model"))?;
    for text in [
        include_str!("../data/rain-first.preference"),
        include_str!("../data/dry-first.preference"),
    ] {
        let pref = parse_preference(text)?;
        print!(
            "{}{}",
            text,
            serialize_policy(&preference_to_policy(&rain, &pref)?)
        );
    }
    Ok(())
}
