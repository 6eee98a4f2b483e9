//! Ground truth: simulation, exhaustive enumeration of developments,
//! estimation of the standard FOMM, Royal policies and a Markov-property
//! test.

mod enumerate;
mod estimate;
mod markov;
mod preference;
mod simulate;

pub use enumerate::{
    enumerate_future, enumerate_future_capped, enumerate_future_exact, enumerate_past,
    enumerate_past_from, ExactFutureSet, DEFAULT_ENUMERATION_CAP,
};
pub use estimate::estimate_fomm;
pub use markov::{check_markov, ContextTest, MarkovReport, MarkovVerdict};
pub use preference::preference_to_policy;
pub use simulate::{simulate, Collision, Resolution, SimulationConfig, SimulationRun};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// The exact rational written by `x`'s shortest decimal representation, so
/// `0.1` becomes `1/10` rather than the nearest binary fraction.
pub fn decimal_rational(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::Numeric(format!("{x} is not finite")));
    }
    let text = x.to_string();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let numer: BigInt = format!("{int}{frac}")
        .parse()
        .map_err(|_| Error::Numeric(format!("cannot read {text} as a decimal")))?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(numer, denom);
    Ok(if negative { -r } else { r })
}
