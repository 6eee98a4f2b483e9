//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use common::{data_model, data_path, empirical_past, random_chain, random_model, random_small};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use worldmodel::analysis::{analyze, find_black_hole, find_white_peak, StructureReport};
use worldmodel::belief::memory_bits;
use worldmodel::constructions::{
    backward_part, event_to_fact, forward_part, minimal_model, parity_model, EventSet, INIT_ID,
};
use worldmodel::ed::{detect_indirect, phenomenon_validity, track};
use worldmodel::events::{EventStream, Occurrence, Provenance};
use worldmodel::format::{canonicalize, parse_model, parse_preference, serialize_model};
use worldmodel::inversion::{invert_chain, journey_statistics, monte_carlo_invert};
use worldmodel::model::{Model, ModelKind};
use worldmodel::oracle::{
    check_markov, enumerate_future, enumerate_future_exact, enumerate_past_from, estimate_fomm,
    preference_to_policy, simulate, Collision, MarkovVerdict, SimulationConfig,
};
use worldmodel::policy::Preference;
use worldmodel::prob::ProbInterval;
use worldmodel::symbol::{sym, Symbol};
use worldmodel::trajectory::Trajectory;
use worldmodel::validate::validate;

const ESTIMATE_TOL: f64 = 0.02;
const MARKOV_SIGNIFICANCE: f64 = 0.01;
const CHAINS: u64 = 20;
const JOURNEYS: usize = 100_000;
const INVERSION_TOL: f64 = 0.01;
const SUM_TOL: f64 = 1e-9;
const FLOW_TOL: f64 = 1e-9;
const PAST_TOL: f64 = 0.02;
const DOUBLE_INVERSION_TOL: f64 = 1e-6;
const PARITY_DEPTH: usize = 8;
const FACT_STEPS: usize = 1000;
const EXACT_DEPTH: usize = 6;
const MINIMAL_DEPTH: usize = 6;
const MINIMAL_TOL: f64 = 1e-6;
const INDIRECT_WINDOW: usize = 50;
const INDIRECT_THRESHOLD: f64 = 0.5;
const ROUND_TRIP_MODELS: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `(from, label, to)` ids mapped to the midpoint of the effective probability.
fn arrow_map(m: &Model) -> BTreeMap<(String, String, String), f64> {
    m.arrows
        .iter()
        .map(|a| {
            (
                (
                    m.state_id(a.from).to_string(),
                    a.label.to_string(),
                    m.state_id(a.to).to_string(),
                ),
                a.effective().midpoint(),
            )
        })
        .collect()
}

fn max_gap<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let keys: BTreeSet<&K> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn coin_run() -> Result<Trajectory, String> {
    let coin = data_model("coin.model");
    Ok(simulate(&coin, &SimulationConfig::new(10_000, 7))
        .map_err(err)?
        .trajectory)
}

fn bbww_trajectory() -> Trajectory {
    Trajectory::from_observations((0..10_000).map(|t| sym(if t % 4 < 2 { "B" } else { "W" })))
}

fn criterion_1() -> Outcome {
    let est = estimate_fomm(&coin_run()?).map_err(err)?;
    let probs = arrow_map(&est);
    ensure(probs.len() == 4, || {
        format!("expected 4 arrows, got {}", probs.len())
    })?;
    let worst = probs.values().map(|p| (p - 0.5).abs()).fold(0.0, f64::max);
    ensure(worst <= ESTIMATE_TOL, || {
        format!("max |p - 0.5| = {worst:.4}")
    })?;
    Ok(format!("max |p - 0.5| = {worst:.4}"))
}

fn criterion_2() -> Outcome {
    let coin = coin_run()?;
    let bbww = bbww_trajectory();
    let a = arrow_map(&estimate_fomm(&coin).map_err(err)?);
    let b = arrow_map(&estimate_fomm(&bbww).map_err(err)?);
    ensure(a.keys().eq(b.keys()), || {
        "estimates have different arrows".into()
    })?;
    let gap = max_gap(&a, &b);
    ensure(gap <= ESTIMATE_TOL, || {
        format!("estimates differ by {gap:.4}")
    })?;
    let flagged = check_markov(&bbww, 1, MARKOV_SIGNIFICANCE).map_err(err)?;
    ensure(flagged.verdict == MarkovVerdict::NonMarkov, || {
        format!("bbww verdict {}", flagged.verdict)
    })?;
    let worst_p = flagged.tested.iter().map(|c| c.p_value).fold(0.0, f64::max);
    ensure(worst_p < MARKOV_SIGNIFICANCE, || {
        format!("bbww p = {worst_p}")
    })?;
    let clean = check_markov(&coin, 1, MARKOV_SIGNIFICANCE).map_err(err)?;
    ensure(clean.verdict == MarkovVerdict::Markov, || {
        format!("coin verdict {}", clean.verdict)
    })?;
    Ok(format!(
        "estimate gap {gap:.4}, bbww p {worst_p:.1e}, coin markov"
    ))
}

fn criterion_3() -> Outcome {
    let m = data_model("fig3.model");
    let r = analyze(&m);
    let peak = StructureReport::ids(&m, &r.white_peak);
    let hole = StructureReport::ids(&m, &r.black_hole);
    ensure(peak == ["1"], || format!("white peak {peak:?}"))?;
    ensure(hole == ["3", "4"], || format!("black hole {hole:?}"))?;
    Ok("white peak {1}, black hole {3,4}".into())
}

fn chains() -> impl Iterator<Item = (u64, Model)> {
    (0..CHAINS).map(|k| (k, random_chain(1000 + k)))
}

fn criterion_4() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (k, m) in chains() {
        let report = validate(&m).map_err(err)?;
        ensure(report.is_ok(), || format!("chain {k} invalid"))?;
        ensure(find_white_peak(&m).is_empty(), || {
            format!("chain {k} has a white peak")
        })?;
        let exact = invert_chain(&m).map_err(err)?;
        let mc = monte_carlo_invert(&m, JOURNEYS, 500 + k).map_err(err)?;
        let gap = max_gap(&arrow_map(&exact), &arrow_map(&mc));
        ensure(gap <= INVERSION_TOL, || {
            format!("chain {k}: analytic and sampled differ by {gap:.4}")
        })?;
        let mut sums = BTreeMap::<usize, f64>::new();
        for a in &exact.arrows {
            *sums.entry(a.from).or_default() += a.effective().midpoint();
        }
        let sum_err = sums.values().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        ensure(sum_err <= SUM_TOL, || {
            format!("chain {k}: reversed sums off by {sum_err:e}")
        })?;
        let stats = journey_statistics(&m).map_err(err)?;
        let flow_err = (0..m.states.len())
            .map(|s| {
                let inflow =
                    stats.inbound(&m, s) + if s == m.initial { stats.absorbed } else { 0.0 };
                (inflow - stats.outbound(&m, s)).abs()
            })
            .fold(0.0, f64::max);
        ensure(flow_err <= FLOW_TOL, || {
            format!("chain {k}: flow off by {flow_err:e}")
        })?;
        worst = (
            worst.0.max(gap),
            worst.1.max(sum_err),
            worst.2.max(flow_err),
        );
    }
    Ok(format!(
        "max arrow gap {:.4}, max sum error {:.1e}, max flow error {:.1e}",
        worst.0, worst.1, worst.2
    ))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    for (k, m) in chains() {
        let predicted: BTreeMap<Vec<(String, String)>, f64> = enumerate_past_from(&m, 3, m.initial)
            .map_err(err)?
            .entries
            .iter()
            .map(|(dev, p)| {
                let key = dev
                    .steps
                    .iter()
                    .map(|s| (s.obs.to_string(), s.label.to_string()))
                    .collect();
                (key, p.midpoint())
            })
            .collect();
        let seen = empirical_past(&m, 3, JOURNEYS, 900 + k);
        let gap = max_gap(&predicted, &seen);
        ensure(gap <= PAST_TOL, || {
            format!("chain {k}: past frequencies differ by {gap:.4}")
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("max gap {worst:.4} over {CHAINS} chains"))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..CHAINS {
        let m = random_chain(2000 + k);
        ensure(
            find_white_peak(&m).is_empty() && find_black_hole(&m).is_empty(),
            || format!("chain {k} has a white peak or black hole"),
        )?;
        let twice = invert_chain(&invert_chain(&m).map_err(err)?).map_err(err)?;
        let gap = max_gap(&arrow_map(&m), &arrow_map(&twice));
        ensure(gap <= DOUBLE_INVERSION_TOL, || {
            format!("chain {k}: off by {gap:e}")
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("max gap {worst:.1e}"))
}

fn small_models() -> Vec<(String, Model)> {
    let mut out: Vec<(String, Model)> = ["coin", "cycle3", "chain-ab", "bbww", "colours", "fig3"]
        .iter()
        .map(|n| (n.to_string(), data_model(&format!("{n}.model"))))
        .collect();
    out.extend((0..40).map(|s| (format!("random-{s}"), random_small(s))));
    out
}

/// Walks every arrow sequence of length up to `PARITY_DEPTH` in the source
/// and the matching sequence in the parity model; checks the copy against
/// the number of event arrows used so far.
fn parity_exhaustive(m: &Model, event: usize) -> Result<usize, String> {
    let d = parity_model(
        m,
        &EventSet {
            name: sym("e"),
            arrows: [event].into(),
        },
    )
    .map_err(err)?;
    let lift: BTreeMap<(usize, usize), usize> = d
        .origin
        .iter()
        .enumerate()
        .map(|(i, &k)| ((k, d.model.arrows[i].from), i))
        .collect();
    let mut checked = 0;
    let mut stack = vec![(m.initial, d.model.initial, 0usize, 0usize)];
    while let Some((s, ds, depth, count)) = stack.pop() {
        checked += 1;
        ensure(d.copy_of[ds] == s, || {
            "doubled walk left the source walk".into()
        })?;
        ensure(d.fact.states.contains(&ds) == (count % 2 == 1), || {
            format!("parity mismatch after {depth} steps")
        })?;
        if depth == PARITY_DEPTH {
            continue;
        }
        for (k, a) in m.outgoing(s) {
            let lifted = *lift.get(&(k, ds)).ok_or("arrow has no copy")?;
            stack.push((
                a.to,
                d.model.arrows[lifted].to,
                depth + 1,
                count + usize::from(k == event),
            ));
        }
    }
    Ok(checked)
}

fn fact_simulated(m: &Model, event: usize, seed: u64) -> Result<(), String> {
    let d = event_to_fact(
        m,
        &EventSet {
            name: sym("e"),
            arrows: [event].into(),
        },
    )
    .map_err(err)?;
    let run = simulate(&d.model, &SimulationConfig::new(FACT_STEPS, seed)).map_err(err)?;
    for t in 0..run.states.len() - 1 {
        let used = run.arrows[t].iter().any(|&i| d.origin[i] == event);
        let holds = d.fact.states.contains(&run.states[t + 1]);
        ensure(used == holds, || {
            format!("fact disagrees with event at step {t}")
        })?;
    }
    ensure(run.states.len() >= FACT_STEPS, || {
        "simulation stopped early".into()
    })
}

fn criterion_7() -> Outcome {
    let mut walks = 0;
    let mut pairs = 0;
    for (name, m) in small_models() {
        let words = enumerate_future_exact(&m, EXACT_DEPTH, None)
            .map_err(err)?
            .observation_words();
        for event in 0..m.arrows.len() {
            let single = EventSet {
                name: sym("e"),
                arrows: [event].into(),
            };
            walks +=
                parity_exhaustive(&m, event).map_err(|e| format!("{name}, arrow {event}: {e}"))?;
            fact_simulated(&m, event, pairs as u64)
                .map_err(|e| format!("{name}, arrow {event}: {e}"))?;
            for doubled in [event_to_fact(&m, &single), parity_model(&m, &single)] {
                let doubled = doubled.map_err(err)?;
                let got = enumerate_future_exact(&doubled.model, EXACT_DEPTH, None)
                    .map_err(err)?
                    .observation_words();
                ensure(got == words, || {
                    format!("{name}, arrow {event}: future sets differ")
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} model/event pairs, {walks} walks checked"))
}

fn criterion_8() -> Outcome {
    let rain = data_model("rain.model");
    let read = |f: &str| {
        parse_preference(&std::fs::read_to_string(data_path(f)).map_err(err)?).map_err(err)
    };
    let sky = sym("sky");
    let wet = preference_to_policy(&rain, &read("rain-first.preference")?).map_err(err)?;
    let dry = preference_to_policy(&rain, &read("dry-first.preference")?).map_err(err)?;
    let (p_wet, p_dry) = (wet.get(&sky, &sym("rain")), dry.get(&sky, &sym("rain")));
    ensure(p_wet == 0.8, || format!("rain-first gives {p_wet}"))?;
    ensure(p_dry == 0.1, || format!("dry-first gives {p_dry}"))?;
    let weather = data_model("weather.model");
    let free = preference_to_policy(
        &weather,
        &Preference::uniform(&weather, &[sym("go"), sym("stay")]),
    )
    .map_err(err)?;
    ensure(free.entries.values().all(|&p| p == 0.0 || p == 1.0), || {
        "unconstrained policy is not deterministic".into()
    })?;
    Ok(format!(
        "rain-first {p_wet}, dry-first {p_dry}, unconstrained deterministic"
    ))
}

fn criterion_9() -> Outcome {
    let mut fomms: Vec<Model> = ["coin", "cycle3", "fig3", "chain-ab"]
        .iter()
        .map(|n| data_model(&format!("{n}.model")))
        .collect();
    fomms.extend(chains().map(|(_, m)| m));
    fomms.extend(
        (0..400)
            .map(random_model)
            .filter(|m| m.kind == ModelKind::Fomm),
    );
    let mut count = 0;
    for m in &fomms {
        if validate(m).map_err(err)?.is_ok() {
            ensure(memory_bits(m) == 0, || {
                format!("fomm with {} bits", memory_bits(m))
            })?;
            count += 1;
        }
    }
    let bits = memory_bits(&data_model("colours.model"));
    ensure(bits == 2, || format!("colours needs {bits} bits"))?;
    Ok(format!("{count} valid FOMMs at 0 bits, colours at 2 bits"))
}

fn observation_gap(a: &Model, b: &Model) -> Result<f64, String> {
    let fa = enumerate_future(a, MINIMAL_DEPTH, None)
        .map_err(err)?
        .observation_words();
    let fb = enumerate_future(b, MINIMAL_DEPTH, None)
        .map_err(err)?
        .observation_words();
    let keys: BTreeSet<_> = fa.keys().chain(fb.keys()).collect();
    Ok(keys
        .into_iter()
        .map(|k| {
            let x = fa.get(k).copied().unwrap_or(ProbInterval::ZERO);
            let y = fb.get(k).copied().unwrap_or(ProbInterval::ZERO);
            (x.lo() - y.lo()).abs().max((x.hi() - y.hi()).abs())
        })
        .fold(0.0, f64::max))
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for name in ["coin", "cycle3"] {
        let m = data_model(&format!("{name}.model"));
        let joined = minimal_model(&m, MINIMAL_DEPTH).map_err(err)?;
        let forward = forward_part(&joined).map_err(err)?;
        let backward = backward_part(&joined).map_err(err)?;
        let f_gap = observation_gap(&forward, &m)?;
        let b_gap = observation_gap(&backward, &invert_chain(&m).map_err(err)?)?;
        ensure(f_gap <= MINIMAL_TOL, || {
            format!("{name}: forward part off by {f_gap:e}")
        })?;
        ensure(b_gap <= MINIMAL_TOL, || {
            format!("{name}: backward part off by {b_gap:e}")
        })?;
        let init = joined.state_index(INIT_ID).ok_or("no init state")?;
        let entering = joined
            .arrows
            .iter()
            .filter(|a| a.to == init && joined.state_id(a.from).as_str().starts_with("f:"))
            .count();
        ensure(entering == 0, || {
            format!("{name}: {entering} forward arrows re-enter init")
        })?;
        ensure(
            forward.arrows.iter().all(|a| a.to != forward.initial),
            || format!("{name}: forward part re-enters init"),
        )?;
        notes.push(format!("{name} {} states", joined.states.len()));
    }
    Ok(notes.join(", "))
}

fn occurrence(time: usize, label: &str) -> Occurrence {
    Occurrence {
        time,
        label: sym(label),
        confidence: ProbInterval::ONE,
        provenance: Provenance::Direct,
    }
}

/// Three rooms visited in turn; the lamp of a room only changes while the
/// agent is inside, never on the step it enters.
fn house_world(steps: usize) -> (Trajectory, EventStream, Vec<usize>) {
    let mut lamps = [true, false, true];
    let (mut obs, mut rooms, mut events) = (Vec::new(), Vec::new(), Vec::new());
    let (mut room, mut stay) = (0usize, 0usize);
    while obs.len() < steps {
        let len = 3 + (stay * 7) % 5;
        let toggle = 1 + stay % (len - 1);
        for offset in 0..len {
            if offset == toggle && stay % 3 != 1 {
                lamps[room] = !lamps[room];
            }
            obs.push(sym(if lamps[room] { "on" } else { "off" }));
            rooms.push(room);
        }
        events.push(occurrence(obs.len() - 1, "move"));
        room = (room + 1) % 3;
        stay += 1;
    }
    events.pop();
    let events = EventStream::from_occurrences(events).expect("ordered events");
    (Trajectory::from_observations(obs), events, rooms)
}

fn earth_then_mars(seed: u64, boundary: usize) -> Result<(Trajectory, EventStream), String> {
    let run = simulate(
        &data_model("daynight.model"),
        &SimulationConfig::new(2 * boundary, seed),
    )
    .map_err(err)?;
    let obs = run.trajectory.observations().enumerate().map(|(t, o)| {
        if t < boundary {
            o.clone()
        } else {
            sym("light")
        }
    });
    Ok((Trajectory::from_observations(obs), run.events))
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64, n: usize) -> Vec<Symbol> {
    (0..n)
        .map(|_| sym(if rng.random_bool(p) { "light" } else { "dark" }))
        .collect()
}

fn criterion_11() -> Outcome {
    let (traj, events, rooms) = house_world(600);
    let result = track(
        &data_model("house.model"),
        &traj,
        &events,
        Collision::Priority,
    )
    .map_err(err)?;
    let mut reentries = 0;
    let mut visited = BTreeSet::from([rooms[0]]);
    for t in 1..rooms.len() {
        if rooms[t] != rooms[t - 1] && !visited.insert(rooms[t]) {
            reentries += 1;
            let want = traj.steps[t].obs.clone();
            ensure(result.recalled[t].as_ref() == Some(&want), || {
                format!("step {t}: recalled {:?}, lamp {want}", result.recalled[t])
            })?;
        }
    }
    ensure(reentries > 0, || "no room was re-entered".into())?;

    const BOUNDARY: usize = 200;
    let daynight = data_model("daynight.model");
    let mut ends = Vec::new();
    for seed in 0..5 {
        let (traj, events) = earth_then_mars(seed, BOUNDARY)?;
        let v =
            phenomenon_validity(&daynight, &traj, &events, Collision::Priority, 1).map_err(err)?;
        let before = events
            .iter()
            .map(|o| o.time)
            .filter(|&t| t < BOUNDARY)
            .max()
            .unwrap_or(0);
        let after = events
            .iter()
            .map(|o| o.time)
            .find(|&t| t >= BOUNDARY)
            .unwrap_or(traj.len());
        ensure(v.intervals.len() == 1 && v.intervals[0].0 == 0, || {
            format!("seed {seed}: intervals {:?}", v.intervals)
        })?;
        let end = v.intervals[0].1;
        ensure(before < end && end <= after + 1 && !v.permanent, || {
            format!("seed {seed}: end {end} outside ({before}, {}]", after + 1)
        })?;
        ends.push(end);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut located = Vec::new();
    for _ in 0..5 {
        let mut obs = bernoulli(&mut rng, 0.9, 200);
        obs.extend(bernoulli(&mut rng, 0.1, 200));
        let found = detect_indirect(
            &Trajectory::from_observations(obs),
            INDIRECT_WINDOW,
            INDIRECT_THRESHOLD,
        )
        .map_err(err)?;
        ensure(!found.events.is_empty(), || "change point missed".into())?;
        ensure(
            found.boundaries.len() == 1 && found.boundaries[0].abs_diff(200) <= INDIRECT_WINDOW,
            || format!("boundaries {:?}", found.boundaries),
        )?;
        located.push(found.boundaries[0]);
        let flat = bernoulli(&mut rng, 0.5, 400);
        let quiet = detect_indirect(
            &Trajectory::from_observations(flat),
            INDIRECT_WINDOW,
            INDIRECT_THRESHOLD,
        )
        .map_err(err)?;
        ensure(quiet.events.is_empty(), || {
            format!("stationary run gave {} events", quiet.events.len())
        })?;
    }
    Ok(format!(
        "{reentries} re-entries recalled, earth ends {ends:?}, change points {located:?}"
    ))
}

fn criterion_12() -> Outcome {
    let mut valid = 0;
    let mut seed = 0;
    while valid < ROUND_TRIP_MODELS {
        let m = random_model(seed);
        seed += 1;
        if !validate(&m).map_err(err)?.is_ok() {
            continue;
        }
        valid += 1;
        let text = serialize_model(&m);
        let back = parse_model(&text).map_err(|e| format!("seed {}: {e}\n{text}", seed - 1))?;
        ensure(back == canonicalize(&m), || {
            format!("seed {}: parse(serialize) differs\n{text}", seed - 1)
        })?;
        ensure(serialize_model(&back) == text, || {
            format!("seed {}: not byte stable", seed - 1)
        })?;
        ensure(seed < 20 * ROUND_TRIP_MODELS as u64, || {
            "generator rarely yields valid models".into()
        })?;
    }
    Ok(format!("{valid} valid models out of {seed} generated"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("coin-world estimation", criterion_1),
        ("bbww estimates and markov check", criterion_2),
        ("white peak and black hole", criterion_3),
        ("analytic and sampled inversion", criterion_4),
        ("past prediction", criterion_5),
        ("double inversion", criterion_6),
        ("doubling constructions", criterion_7),
        ("royal preference", criterion_8),
        ("memory bits", criterion_9),
        ("minimal model", criterion_10),
        ("event-driven runtime", criterion_11),
        ("format round trip", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
