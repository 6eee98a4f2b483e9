//! The `worldmodel` command line.
//!
//! Every subcommand reads the text formats of [`crate::format`] (a path of
//! `-` means standard input) and writes its result to standard output or to
//! `--output`. Failures print a single `error: <code>: <detail>` line on
//! standard error and exit with 1; malformed invocations exit with 2.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::analyze;
use crate::constructions::{
    event_to_fact, minimal_model, minimize_forward, parity_model, quotient, EventSet,
};
use crate::ed::{detect_direct, detect_indirect_as, load_charfns, phenomenon_validity, track};
use crate::error::Error;
use crate::events::EventStream;
use crate::format;
use crate::inversion::{
    invert_chain, invert_mdp_fixed, invert_mdp_plus, monte_carlo_invert, PlusMode,
};
use crate::model::Model;
use crate::oracle::{
    check_markov, enumerate_future, enumerate_past_from, estimate_fomm, preference_to_policy,
    simulate, Collision, Resolution, SimulationConfig,
};
use crate::policy::Policy;
use crate::symbol::Symbol;
use crate::trajectory::Trajectory;
use crate::validate::validate;

#[derive(Debug, Parser)]
#[command(
    name = "worldmodel",
    version,
    about = "Stochastic world models: validate, invert, reduce, simulate, detect"
)]
pub struct Invocation {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model against the rules of its kind.
    Validate { model: PathBuf },
    /// Report white peak, black hole and redundant states.
    Analyze { model: PathBuf },
    /// Build the model that predicts the past.
    Invert(InvertArgs),
    /// Double every state to turn an event into a fact or track its parity.
    Double(DoubleArgs),
    /// Collapse state classes into an event-driven model.
    Quotient(QuotientArgs),
    /// Merge states with the same future.
    Minimize(DepthArgs),
    /// Forward and backward minimal parts joined at a fresh initial state.
    Minimal(DepthArgs),
    /// Run a model as a generator.
    Simulate(SimulateArgs),
    /// Enumerate possible futures with their probabilities.
    Future(FutureArgs),
    /// Enumerate possible pasts with their probabilities.
    Past(PastArgs),
    /// Estimate the standard FOMM of a trajectory.
    Estimate { trajectory: PathBuf },
    /// Test whether longer histories improve prediction.
    MarkovCheck(MarkovArgs),
    /// Royal policy from a preference file.
    PolicyFromPreference { model: PathBuf, preference: PathBuf },
    /// Detect event occurrences in a trajectory.
    Detect(DetectArgs),
    /// Follow an event-driven model along a trajectory.
    Track(TrackArgs),
    /// Render a model as a Graphviz graph.
    ExportDot { model: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvertMode {
    Analytic,
    Mc,
    PlusVertex,
    PlusMc,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: InvertMode,
    #[arg(long, default_value_t = 100_000)]
    pub journeys: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vertex combinations (plus-vertex) or sampled members (plus-mc).
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    /// Fix the agent with this policy before inverting.
    #[arg(long)]
    pub policy: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DoubleMode {
    Fact,
    Parity,
}

#[derive(Debug, Args)]
pub struct DoubleArgs {
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub mode: DoubleMode,
    /// Event name; without `--arrow` it is every arrow with this label.
    #[arg(long)]
    pub event: String,
    /// Arrow of the event as `from,label,to`; repeatable.
    #[arg(long = "arrow")]
    pub arrows: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    pub model: PathBuf,
    /// Partition file: one class per line.
    #[arg(long)]
    pub classes: PathBuf,
    /// Monitor every arrow with this label as one event; repeatable.
    #[arg(long = "monitor")]
    pub monitor: Vec<String>,
    /// Monitor every arrow that crosses classes as one event with this name.
    #[arg(long)]
    pub crossing: Option<String>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CollisionArg {
    Priority,
    Both,
}

impl From<CollisionArg> for Collision {
    fn from(c: CollisionArg) -> Self {
        match c {
            CollisionArg::Priority => Collision::Priority,
            CollisionArg::Both => Collision::BothArrows,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, conflicts_with = "preference")]
    pub policy: Option<PathBuf>,
    #[arg(long)]
    pub preference: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "priority")]
    pub collision: CollisionArg,
    /// Also write the generator's event occurrences to this file.
    #[arg(long)]
    pub events_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FutureArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Merge developments with the same observations.
    #[arg(long)]
    pub observations: bool,
}

#[derive(Debug, Args)]
pub struct PastArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub depth: usize,
    /// State the pasts end in; defaults to the initial state.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Args)]
pub struct MarkovArgs {
    pub trajectory: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, default_value_t = 0.01)]
    pub significance: f64,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    pub trajectory: PathBuf,
    /// Characteristic-function file.
    #[arg(
        long,
        conflicts_with = "indirect",
        required_unless_present = "indirect"
    )]
    pub direct: Option<PathBuf>,
    #[arg(long, requires = "window")]
    pub indirect: bool,
    #[arg(long)]
    pub window: Option<usize>,
    /// Lower-bound cutoff (direct) or distance cutoff (indirect).
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Label of indirect occurrences.
    #[arg(long, default_value = crate::ed::INDIRECT_LABEL)]
    pub label: String,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    pub trajectory: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub events: PathBuf,
    #[arg(long, value_enum, default_value = "priority")]
    pub collision: CollisionArg,
    /// Report the intervals where the model holds instead of beliefs.
    #[arg(long)]
    pub validity: bool,
    #[arg(long, default_value_t = 1)]
    pub min_events: usize,
}

/// Why a run failed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags: exit code 2.
    Usage(String),
    /// The inputs broke a precondition: exit code 1.
    Run { code: String, detail: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run {
            code: e.code().to_string(),
            detail: e.detail(),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run { .. } => 1,
        }
    }

    pub fn line(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: usage: {m}"),
            Failure::Run { code, detail } => format!("error: {code}: {detail}"),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load_model(path: &Path) -> Result<Model, Error> {
    format::parse_model(&read(path)?)
}

fn load_trajectory(path: &Path) -> Result<Trajectory, Error> {
    format::parse_trajectory(&read(path)?)
}

fn load_policy(path: &Path) -> Result<Policy, Error> {
    format::parse_policy(&read(path)?)
}

fn seed_required(seed: Option<u64>, what: &str) -> std::result::Result<u64, Failure> {
    seed.ok_or_else(|| Failure::Usage(format!("{what} is stochastic and needs --seed")))
}

fn id_list(ids: Vec<String>) -> String {
    ids.join(" ")
}

/// Executes one parsed invocation and returns the text it produces.
pub fn run(inv: &Invocation) -> Outcome {
    match &inv.command {
        Command::Validate { model } => {
            let m = load_model(model)?;
            let report = validate(&m)?;
            let mut out = String::new();
            for w in &report.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            match report.violations.first() {
                None => {
                    out.push_str("ok\n");
                    Ok(out)
                }
                Some(first) => {
                    let rest = report.violations.len() - 1;
                    let detail = if rest == 0 {
                        first.message.clone()
                    } else {
                        format!("{} (and {rest} more)", first.message)
                    };
                    Err(Failure::Run {
                        code: first.code.to_string(),
                        detail,
                    })
                }
            }
        }
        Command::Analyze { model } => {
            let m = load_model(model)?;
            let r = analyze(&m);
            Ok(format!(
                "white-peak: {}\nblack-hole: {}\nredundant: {}\n",
                id_list(crate::analysis::StructureReport::ids(&m, &r.white_peak)),
                id_list(crate::analysis::StructureReport::ids(&m, &r.black_hole)),
                id_list(crate::analysis::StructureReport::ids(&m, &r.redundant)),
            )
            .replace(": \n", ":\n"))
        }
        Command::Invert(a) => {
            let m = load_model(&a.model)?;
            let inv = match (a.mode, &a.policy) {
                (InvertMode::Analytic, Some(p)) => invert_mdp_fixed(&m, &load_policy(p)?)?,
                (InvertMode::Analytic, None) => invert_chain(&m)?,
                (InvertMode::Mc, _) => {
                    let base = match &a.policy {
                        Some(p) => load_policy(p)?.apply(&m)?,
                        None => m,
                    };
                    monte_carlo_invert(&base, a.journeys, seed_required(a.seed, "--mode mc")?)?
                }
                (InvertMode::PlusVertex, _) => {
                    invert_mdp_plus(&m, PlusMode::VertexEnumeration, a.budget)?
                }
                (InvertMode::PlusMc, _) => {
                    let seed = seed_required(a.seed, "--mode plus-mc")?;
                    invert_mdp_plus(&m, PlusMode::MonteCarlo { seed }, a.budget)?
                }
            };
            Ok(format::serialize_model(&inv))
        }
        Command::Double(a) => {
            let m = load_model(&a.model)?;
            let name = Symbol::new(&a.event)?;
            let event = if a.arrows.is_empty() {
                if !m.labels.contains(&name) {
                    return Err(Error::Symbol(format!("{name} is not a label of the model")).into());
                }
                EventSet::by_label(&m, &name)
            } else {
                let triples = a
                    .arrows
                    .iter()
                    .map(|s| match s.split(',').collect::<Vec<_>>()[..] {
                        [f, l, t] => Ok((f.to_string(), l.to_string(), t.to_string())),
                        _ => Err(Failure::Usage(format!(
                            "--arrow {s:?} is not from,label,to"
                        ))),
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                EventSet::from_triples(&m, name, &triples)?
            };
            let mut d = match a.mode {
                DoubleMode::Fact => event_to_fact(&m, &event)?,
                DoubleMode::Parity => parity_model(&m, &event)?,
            };
            let fact: Vec<String> = d.fact.states.iter().map(|s| s.to_string()).collect();
            d.model.note("fact", fact.join(","));
            Ok(format::serialize_model(&d.model))
        }
        Command::Quotient(a) => {
            let m = load_model(&a.model)?;
            let partition = format::parse_partition(&read(&a.classes)?)?;
            let mut monitored = Vec::new();
            for l in &a.monitor {
                monitored.push(EventSet::by_label(&m, &Symbol::new(l)?));
            }
            if let Some(name) = &a.crossing {
                let class = partition.class_of(&m)?;
                monitored.push(EventSet {
                    name: Symbol::new(name)?,
                    arrows: m
                        .arrows
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| class[x.from] != class[x.to])
                        .map(|(i, _)| i)
                        .collect(),
                });
            }
            Ok(format::serialize_model(&quotient(
                &m, &partition, &monitored,
            )?))
        }
        Command::Minimize(a) => {
            let m = load_model(&a.model)?;
            let (min, partition) = minimize_forward(&m, a.depth);
            let mut out = format::serialize_model(&min);
            for line in format::serialize_partition(&partition).lines() {
                out.push_str(&format!("# class {line}\n"));
            }
            Ok(out)
        }
        Command::Minimal(a) => Ok(format::serialize_model(&minimal_model(
            &load_model(&a.model)?,
            a.depth,
        )?)),
        Command::Simulate(a) => {
            let m = load_model(&a.model)?;
            let resolution = match (&a.policy, &a.preference) {
                (Some(p), _) => Resolution::Policy(load_policy(p)?),
                (None, Some(p)) => Resolution::Preference(format::parse_preference(&read(p)?)?),
                (None, None) => Resolution::Model,
            };
            let config = SimulationConfig {
                steps: a.steps,
                seed: a.seed,
                resolution,
                collision: a.collision.into(),
            };
            let run = simulate(&m, &config)?;
            if let Some(path) = &a.events_out {
                fs::write(path, format::serialize_events(&run.events)).map_err(Error::from)?;
            }
            Ok(format::serialize_trajectory(&run.trajectory))
        }
        Command::Future(a) => {
            let m = load_model(&a.model)?;
            let policy = a.policy.as_deref().map(load_policy).transpose()?;
            let fs = enumerate_future(&m, a.depth, policy.as_ref())?;
            Ok(if a.observations {
                fs.observation_words()
                    .into_iter()
                    .map(|(w, p)| {
                        let w: Vec<&str> = w.iter().map(Symbol::as_str).collect();
                        format!(
                            "{p} {}\n",
                            if w.is_empty() {
                                "()".into()
                            } else {
                                w.join(" ")
                            }
                        )
                    })
                    .collect()
            } else {
                fs.render()
            })
        }
        Command::Past(a) => {
            let m = load_model(&a.model)?;
            let state = match &a.state {
                Some(id) => m.require_state(id)?,
                None => m.initial,
            };
            Ok(enumerate_past_from(&m, a.depth, state)?.render())
        }
        Command::Estimate { trajectory } => Ok(format::serialize_model(&estimate_fomm(
            &load_trajectory(trajectory)?,
        )?)),
        Command::MarkovCheck(a) => {
            let t = load_trajectory(&a.trajectory)?;
            Ok(check_markov(&t, a.order, a.significance)?.render())
        }
        Command::PolicyFromPreference { model, preference } => {
            let m = load_model(model)?;
            let p = format::parse_preference(&read(preference)?)?;
            let policy = preference_to_policy(&m, &p)?;
            let mut out = format::serialize_policy(&policy);
            if policy.adjusted {
                out.insert_str(0, "# adjusted to respect lower bounds\n");
            }
            Ok(out)
        }
        Command::Detect(a) => {
            let t = load_trajectory(&a.trajectory)?;
            let stream = if a.indirect {
                let window = a
                    .window
                    .ok_or_else(|| Failure::Usage("--indirect needs --window".into()))?;
                detect_indirect_as(&t, window, a.threshold, &Symbol::new(&a.label)?)?.events
            } else {
                let path = a
                    .direct
                    .as_ref()
                    .ok_or_else(|| Failure::Usage("give --direct <file> or --indirect".into()))?;
                detect_direct(&t, &load_charfns(path)?, a.threshold)
            };
            Ok(format::serialize_events(&stream))
        }
        Command::Track(a) => {
            let m = load_model(&a.model)?;
            let t = load_trajectory(&a.trajectory)?;
            let events: EventStream = format::parse_events(&read(&a.events)?)?;
            if a.validity {
                let v = phenomenon_validity(&m, &t, &events, a.collision.into(), a.min_events)?;
                let mut out: String = v
                    .intervals
                    .iter()
                    .map(|(s, e)| format!("valid {s} {e}\n"))
                    .collect();
                if v.permanent {
                    out.push_str("permanent-so-far\n");
                }
                return Ok(out);
            }
            let r = track(&m, &t, &events, a.collision.into())?;
            let mut out = String::new();
            for (i, b) in r.beliefs.iter().enumerate() {
                out.push_str(&format!("{i} {}\n", b.describe(&m)));
            }
            for (s, o) in &r.memory {
                out.push_str(&format!("memory {} {o}\n", m.states[*s].id));
            }
            for w in &r.warnings {
                out.push_str(&format!("# warning: {w}\n"));
            }
            Ok(out)
        }
        Command::ExportDot { model } => Ok(format::export_dot(&load_model(model)?)),
    }
}

/// Result of a full command-line execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs them.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Execution {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match run(&inv) {
        Ok(text) => match &inv.output {
            Some(path) => match fs::write(path, &text) {
                Ok(()) => Execution {
                    code: 0,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => {
                    let f = Failure::from(Error::from(e));
                    Execution {
                        code: f.exit_code(),
                        stdout: String::new(),
                        stderr: f.line() + "\n",
                    }
                }
            },
            None => Execution {
                code: 0,
                stdout: text,
                stderr: String::new(),
            },
        },
        Err(f) => Execution {
            code: f.exit_code(),
            stdout: String::new(),
            stderr: f.line() + "\n",
        },
    }
}

/// Entry point for the binary: runs with the process arguments and returns
/// the exit code.
pub fn main_entry() -> i32 {
    let e = execute(std::env::args_os());
    let _ = io::stdout().write_all(e.stdout.as_bytes());
    let _ = io::stderr().write_all(e.stderr.as_bytes());
    e.code
}
