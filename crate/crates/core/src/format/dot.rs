use std::collections::BTreeMap;
use std::fmt::Write;

use crate::model::Model;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Graphviz rendering: the initial state is double-circled, each label gets
/// its own edge colour, and edges read `<label> lp ap`.
pub fn export_dot(model: &Model) -> String {
    let colours: BTreeMap<_, _> = model
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), PALETTE[i % PALETTE.len()]))
        .collect();
    let mut out = String::from("digraph model {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (i, s) in model.states.iter().enumerate() {
        let shape = if i == model.initial {
            "doublecircle"
        } else {
            "circle"
        };
        let trace: Vec<String> = s
            .trace
            .entries
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(o, p)| format!("{o}={p}"))
            .collect();
        let _ = writeln!(
            out,
            "  {} [shape={shape}, label=\"{}\\n{}\"];",
            quote(s.id.as_str()),
            escape(s.id.as_str()),
            escape(&trace.join(" "))
        );
    }
    for a in &model.arrows {
        let colour = colours.get(&a.label).copied().unwrap_or("black");
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, color=\"{colour}\", fontcolor=\"{colour}\"];",
            quote(model.states[a.from].id.as_str()),
            quote(model.states[a.to].id.as_str()),
            quote(&format!("{} {} {}", a.label, a.label_prob, a.arrow_prob)),
        );
    }
    out.push_str("}\n");
    out
}
