use worldmodel::format::{export_dot, parse_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Pipe into `dot -Tsvg` to draw it.
    print!(
        "{}",
        export_dot(&parse_model(include_str!("../data/fig3.model"))?)
    );
    Ok(())
}
