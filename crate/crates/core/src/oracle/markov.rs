use std::collections::BTreeMap;
use std::fmt;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::symbol::ObsSymbol;
use crate::trajectory::Trajectory;

/// Fewest occurrences of a context symbol for it to be tested.
pub const MIN_CONTEXT_SAMPLES: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkovVerdict {
    Markov,
    NonMarkov,
    Inconclusive,
}

impl fmt::Display for MarkovVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkovVerdict::Markov => "markov",
            MarkovVerdict::NonMarkov => "non-markov",
            MarkovVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Independence test of the longer history against the next symbol, for one
/// current symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextTest {
    pub symbol: ObsSymbol,
    pub samples: usize,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovReport {
    pub order: usize,
    pub significance: f64,
    pub tested: Vec<ContextTest>,
    /// Symbols with too few samples or no variation, with their sample count.
    pub skipped: Vec<(ObsSymbol, usize)>,
    pub verdict: MarkovVerdict,
}

impl MarkovReport {
    pub fn render(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        for t in &self.tested {
            out.push_str(&format!(
                "context {} n={} chi2={:.3} df={} p={:.3e}{}\n",
                t.symbol,
                t.samples,
                t.statistic,
                t.df,
                t.p_value,
                if t.flagged { " improvable" } else { "" }
            ));
        }
        for (s, n) in &self.skipped {
            out.push_str(&format!("skipped {s} n={n}\n"));
        }
        out
    }
}

fn chi_squared(
    table: &BTreeMap<&[ObsSymbol], BTreeMap<&ObsSymbol, usize>>,
) -> Option<(f64, usize)> {
    let mut cols: BTreeMap<&ObsSymbol, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for row in table.values() {
        let total: usize = row.values().sum();
        rows.push(total);
        for (c, n) in row {
            *cols.entry(*c).or_default() += n;
        }
    }
    let n: usize = rows.iter().sum();
    let df = (rows.iter().filter(|r| **r > 0).count().saturating_sub(1))
        * (cols.values().filter(|c| **c > 0).count().saturating_sub(1));
    if df == 0 {
        return None;
    }
    let mut stat = 0.0;
    for (row, &rt) in table.values().zip(&rows) {
        for (c, &ct) in &cols {
            let expected = rt as f64 * ct as f64 / n as f64;
            let observed = row.get(c).copied().unwrap_or(0) as f64;
            stat += (observed - expected).powi(2) / expected;
        }
    }
    Some((stat, df))
}

/// Asks, for every observation symbol `x`, whether the `order` symbols seen
/// before `x` carry information about the symbol after it, using a
/// chi-squared independence test. A significant dependence means splitting the
/// state of `x` would improve the standard FOMM.
pub fn check_markov(
    trajectory: &Trajectory,
    order: usize,
    significance: f64,
) -> Result<MarkovReport> {
    if order == 0 {
        return Err(Error::Structure("order must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&significance) || significance == 0.0 {
        return Err(Error::Structure(format!(
            "significance {significance} outside (0,1)"
        )));
    }
    let obs: Vec<ObsSymbol> = trajectory.observations().cloned().collect();
    type Table<'a> = BTreeMap<&'a [ObsSymbol], BTreeMap<&'a ObsSymbol, usize>>;
    let mut tables: BTreeMap<&ObsSymbol, Table> = BTreeMap::new();
    for t in order..obs.len().saturating_sub(1) {
        *tables
            .entry(&obs[t])
            .or_default()
            .entry(&obs[t - order..t])
            .or_default()
            .entry(&obs[t + 1])
            .or_default() += 1;
    }
    let mut tested = Vec::new();
    let mut skipped = Vec::new();
    for (symbol, table) in &tables {
        let samples: usize = table.values().flat_map(|r| r.values()).sum();
        let result = (samples >= MIN_CONTEXT_SAMPLES)
            .then(|| chi_squared(table))
            .flatten();
        match result {
            Some((statistic, df)) => {
                let dist = ChiSquared::new(df as f64)
                    .map_err(|e| Error::Numeric(format!("chi-squared with {df} df: {e}")))?;
                let p_value = dist.sf(statistic);
                tested.push(ContextTest {
                    symbol: (*symbol).clone(),
                    samples,
                    statistic,
                    df,
                    p_value,
                    flagged: p_value < significance,
                });
            }
            None => skipped.push(((*symbol).clone(), samples)),
        }
    }
    let verdict = if tested.is_empty() {
        MarkovVerdict::Inconclusive
    } else if tested.iter().any(|t| t.flagged) {
        MarkovVerdict::NonMarkov
    } else {
        MarkovVerdict::Markov
    };
    Ok(MarkovReport {
        order,
        significance,
        tested,
        skipped,
        verdict,
    })
}
