//! Validates a model and finds the states that can only be left (white peak)
//! and the states that can only be entered (black hole).

use worldmodel::analysis::{analyze, StructureReport};
use worldmodel::format::parse_model;
use worldmodel::validate::validate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse_model(include_str!("../data/fig3.model"))?;
    let report = validate(&model)?;
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("valid: {}", report.is_ok());

    let s = analyze(&model);
    println!(
        "white peak: {:?}",
        StructureReport::ids(&model, &s.white_peak)
    );
    println!(
        "black hole: {:?}",
        StructureReport::ids(&model, &s.black_hole)
    );
    Ok(())
}
