use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Model, ModelBuilder, ModelKind};
use crate::symbol::ObsSymbol;
use crate::trajectory::Trajectory;

/// The standard FOMM of a trajectory: one state per observed symbol and
/// transition frequencies counted over consecutive pairs. Pairs never seen
/// get no arrow. The initial state is the observation at the current moment.
pub fn estimate_fomm(trajectory: &Trajectory) -> Result<Model> {
    if trajectory.len() < 2 {
        return Err(Error::TooShort(format!(
            "{} steps; estimation needs at least 2",
            trajectory.len()
        )));
    }
    let obs: Vec<&ObsSymbol> = trajectory.observations().collect();
    let symbols: BTreeSet<&ObsSymbol> = obs.iter().copied().collect();
    let mut counts: BTreeMap<(&ObsSymbol, &ObsSymbol), usize> = BTreeMap::new();
    let mut totals: BTreeMap<&ObsSymbol, usize> = BTreeMap::new();
    for pair in obs.windows(2) {
        *counts.entry((pair[0], pair[1])).or_default() += 1;
        *totals.entry(pair[0]).or_default() += 1;
    }
    let initial = obs[trajectory.t0.min(obs.len() - 1)];
    let mut b = ModelBuilder::new(ModelKind::Fomm).obs(symbols.iter().map(|s| s.to_string()));
    for s in &symbols {
        b = b.observed_state(s.as_str())?;
    }
    b = b.initial(initial.as_str());
    for ((from, to), c) in counts {
        b = b.arrow(
            from.as_str(),
            crate::symbol::TRUE_LABEL,
            to.as_str(),
            c as f64 / totals[from] as f64,
        )?;
    }
    let mut m = b.build()?;
    m.note("estimated-from-steps", trajectory.len().to_string());
    Ok(m)
}
