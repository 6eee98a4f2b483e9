//! Kind-specific validation.
//!
//! Structural defects (dangling ids, empty alphabets) are errors; everything
//! a kind forbids is collected as a violation so callers can see all problems
//! at once and repair them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::analysis::find_white_peak;
use crate::error::Result;
use crate::model::{Model, ModelKind, TraceSpec};
use crate::prob::{ProbInterval, EPS};
use crate::symbol::{Symbol, TRUE_LABEL};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, code: &'static str, message: String) {
        self.violations.push(Violation { code, message });
    }
}

pub fn validate(model: &Model) -> Result<ValidationReport> {
    model.check_structure()?;
    let mut report = ValidationReport::default();
    let white_peak = find_white_peak(model);
    let groups = label_groups(model);

    check_labels(model, &mut report);
    check_agent_consistency(model, &groups, &mut report);

    match model.kind {
        ModelKind::Fomm => {
            check_fomm_traces(model, &mut report);
            check_unit_label_probs(model, &mut report);
            check_point_arrows(model, &mut report);
            check_point_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::Hmm => {
            check_deterministic_traces(model, &mut report);
            check_unit_label_probs(model, &mut report);
            check_point_arrows(model, &mut report);
            check_point_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::Mdp => {
            check_point_traces(model, &mut report);
            for a in &model.arrows {
                if !a.label_prob.approx_eq(&ProbInterval::UNIT, EPS) {
                    report.violation(
                        "agent",
                        format!(
                            "state {} action {}: mdp agent interval must be [0,1], got {}",
                            model.states[a.from].id, a.label, a.label_prob
                        ),
                    );
                }
            }
            check_point_arrows(model, &mut report);
            check_point_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::MdpFixed => {
            check_point_traces(model, &mut report);
            check_point_arrows(model, &mut report);
            for a in &model.arrows {
                if !a.label_prob.is_point() {
                    report.violation(
                        "agent",
                        format!(
                            "state {} action {}: mdp-fixed agent probability must be a point, got {}",
                            model.states[a.from].id, a.label, a.label_prob
                        ),
                    );
                }
            }
            check_point_sums(model, &groups, &white_peak, &mut report);
            check_agent_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::Smdp => {
            check_imperfect_traces(model, &mut report);
            for a in &model.arrows {
                for (what, p) in [("lp", a.label_prob), ("ap", a.arrow_prob)] {
                    let ok = [ProbInterval::ZERO, ProbInterval::UNIT, ProbInterval::ONE]
                        .iter()
                        .any(|c| c.approx_eq(&p, EPS));
                    if !ok {
                        report.violation(
                            "smdp",
                            format!(
                                "arrow {}-{}->{}: {} must be 0, 1 or [0,1], got {}",
                                model.states[a.from].id, a.label, model.states[a.to].id, what, p
                            ),
                        );
                    }
                }
            }
            check_interval_sums(model, &groups, &white_peak, &mut report);
            check_agent_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::MdpPlus => {
            check_imperfect_traces(model, &mut report);
            check_interval_sums(model, &groups, &white_peak, &mut report);
            check_agent_sums(model, &groups, &white_peak, &mut report);
        }
        ModelKind::Ed => {
            check_imperfect_traces(model, &mut report);
            check_interval_sums(model, &groups, &white_peak, &mut report);
            for e in model.priorities.keys() {
                if !model.labels.contains(e) {
                    report.violation("label", format!("priority for undeclared event {e}"));
                }
            }
        }
    }
    Ok(report)
}

type Groups = BTreeMap<(usize, Symbol), Vec<usize>>;

fn label_groups(model: &Model) -> Groups {
    let mut groups: Groups = BTreeMap::new();
    for (i, a) in model.arrows.iter().enumerate() {
        groups.entry((a.from, a.label.clone())).or_default().push(i);
    }
    groups
}

fn check_labels(model: &Model, report: &mut ValidationReport) {
    if model.kind.is_single_label()
        && (model.labels.len() != 1 || model.labels[0].as_str() != TRUE_LABEL)
    {
        report.violation(
            "label",
            format!("{} models have the single label \"true\"", model.kind),
        );
    }
    let mut reported = BTreeSet::new();
    for a in &model.arrows {
        if !model.labels.contains(&a.label) && reported.insert(a.label.clone()) {
            report.violation(
                "label",
                format!("arrow label {} is not in the label alphabet", a.label),
            );
        }
    }
}

fn check_agent_consistency(model: &Model, groups: &Groups, report: &mut ValidationReport) {
    for ((state, label), arrows) in groups {
        let first = model.arrows[arrows[0]].label_prob;
        if arrows
            .iter()
            .any(|&i| !model.arrows[i].label_prob.approx_eq(&first, EPS))
        {
            report.violation(
                "agent",
                format!(
                    "state {} label {}: arrows disagree on the label probability",
                    model.states[*state].id, label
                ),
            );
        }
    }
}

fn check_fomm_traces(model: &Model, report: &mut ValidationReport) {
    let mut owner: BTreeMap<Symbol, &Symbol> = BTreeMap::new();
    for s in &model.states {
        match s.trace.deterministic() {
            Some(obs) => {
                if let Some(prev) = owner.insert(obs.clone(), &s.id) {
                    report.violation(
                        "fomm",
                        format!("states {} and {} share observation {}", prev, s.id, obs),
                    );
                }
            }
            None => report.violation(
                "fomm",
                format!("state {} does not show exactly one observation", s.id),
            ),
        }
    }
    for o in &model.obs {
        if !owner.contains_key(o) {
            report.violation("fomm", format!("observation {o} has no state"));
        }
    }
}

fn check_deterministic_traces(model: &Model, report: &mut ValidationReport) {
    for s in &model.states {
        if s.trace.deterministic().is_none() {
            report.violation(
                "trace",
                format!("state {} does not show exactly one observation", s.id),
            );
        }
    }
}

fn check_point_traces(model: &Model, report: &mut ValidationReport) {
    for s in &model.states {
        if !s.trace.is_point() {
            report.violation(
                "trace",
                format!("state {} has interval trace probabilities", s.id),
            );
            continue;
        }
        let sum: f64 = s.trace.entries.values().map(ProbInterval::lo).sum();
        if (sum - 1.0).abs() > EPS {
            report.violation("trace", format!("state {} trace sums to {}", s.id, sum));
        }
    }
}

fn imperfect_ok(trace: &TraceSpec) -> bool {
    let lo: f64 = trace.entries.values().map(ProbInterval::lo).sum();
    let hi: f64 = trace.entries.values().map(ProbInterval::hi).sum();
    lo <= 1.0 + EPS && hi >= 1.0 - EPS
}

fn check_imperfect_traces(model: &Model, report: &mut ValidationReport) {
    for s in &model.states {
        if !imperfect_ok(&s.trace) {
            report.violation(
                "trace",
                format!("state {} trace intervals cannot sum to 1", s.id),
            );
        }
    }
}

fn check_unit_label_probs(model: &Model, report: &mut ValidationReport) {
    for a in &model.arrows {
        if !a.label_prob.approx_eq(&ProbInterval::ONE, EPS) {
            report.violation(
                "label",
                format!(
                    "arrow {}->{}: the event \"true\" has probability 1, got {}",
                    model.states[a.from].id, model.states[a.to].id, a.label_prob
                ),
            );
        }
    }
}

fn check_point_arrows(model: &Model, report: &mut ValidationReport) {
    for a in &model.arrows {
        if !a.arrow_prob.is_point() {
            report.violation(
                "world",
                format!(
                    "arrow {}-{}->{}: world probability must be a point, got {}",
                    model.states[a.from].id, a.label, model.states[a.to].id, a.arrow_prob
                ),
            );
        }
    }
}

fn deficit(
    model: &Model,
    state: usize,
    white_peak: &BTreeSet<usize>,
    what: String,
    report: &mut ValidationReport,
) {
    if white_peak.contains(&state) {
        report.warnings.push(format!(
            "state {} (white peak): {}",
            model.states[state].id, what
        ));
    } else {
        report.violation("sum", format!("state {}: {}", model.states[state].id, what));
    }
}

fn check_point_sums(
    model: &Model,
    groups: &Groups,
    white_peak: &BTreeSet<usize>,
    report: &mut ValidationReport,
) {
    for state in 0..model.states.len() {
        if !groups.keys().any(|(s, _)| *s == state) {
            deficit(
                model,
                state,
                white_peak,
                "no outgoing arrows".into(),
                report,
            );
        }
    }
    for ((state, label), arrows) in groups {
        let sum: f64 = arrows
            .iter()
            .map(|&i| model.arrows[i].arrow_prob.lo())
            .sum();
        if (sum - 1.0).abs() <= EPS {
            continue;
        }
        let what = format!("arrows labeled {label} sum to {sum}");
        if sum < 1.0 {
            deficit(model, *state, white_peak, what, report);
        } else {
            report.violation(
                "sum",
                format!("state {}: {}", model.states[*state].id, what),
            );
        }
    }
}

fn check_interval_sums(
    model: &Model,
    groups: &Groups,
    white_peak: &BTreeSet<usize>,
    report: &mut ValidationReport,
) {
    for ((state, label), arrows) in groups {
        let lo: f64 = arrows
            .iter()
            .map(|&i| model.arrows[i].arrow_prob.lo())
            .sum();
        let hi: f64 = arrows
            .iter()
            .map(|&i| model.arrows[i].arrow_prob.hi())
            .sum();
        if lo > 1.0 + EPS {
            report.violation(
                "sum",
                format!(
                    "state {} label {label}: lower bounds sum to {lo} > 1",
                    model.states[*state].id
                ),
            );
        } else if hi < 1.0 - EPS {
            let what = format!("label {label}: upper bounds sum to {hi} < 1");
            deficit(model, *state, white_peak, what, report);
        }
    }
}

fn check_agent_sums(
    model: &Model,
    groups: &Groups,
    white_peak: &BTreeSet<usize>,
    report: &mut ValidationReport,
) {
    let mut per_state: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for ((state, _), arrows) in groups {
        let lp = model.arrows[arrows[0]].label_prob;
        let e = per_state.entry(*state).or_default();
        e.0 += lp.lo();
        e.1 += lp.hi();
    }
    for (state, (lo, hi)) in per_state {
        if lo > 1.0 + EPS || hi < 1.0 - EPS {
            if white_peak.contains(&state) && hi < 1.0 {
                report.warnings.push(format!(
                    "state {} (white peak): action probabilities sum below 1",
                    model.states[state].id
                ));
            } else {
                report.violation(
                    "policy",
                    format!(
                        "state {}: interval sums exclude any policy (lower {lo}, upper {hi})",
                        model.states[state].id
                    ),
                );
            }
        }
    }
}
