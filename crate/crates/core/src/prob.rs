//! Closed probability intervals.
//!
//! A point probability `p` is the degenerate interval `[p, p]`. Intervals model
//! the "unpredictable randomness" of agent and world: a probability that is only
//! known to lie between two bounds.

use std::fmt;

use crate::error::{Error, Result};

/// Global comparison tolerance for probabilities.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbInterval {
    lo: f64,
    hi: f64,
}

impl ProbInterval {
    pub const ZERO: ProbInterval = ProbInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: ProbInterval = ProbInterval { lo: 1.0, hi: 1.0 };
    pub const UNIT: ProbInterval = ProbInterval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 || lo > hi {
            return Err(Error::Interval { lo, hi });
        }
        Ok(ProbInterval { lo, hi })
    }

    pub fn point(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    /// Builds an interval after clamping both ends into `[0, 1]`; used for
    /// computed values that may drift by rounding.
    pub fn clamped(lo: f64, hi: f64) -> Self {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        ProbInterval {
            lo: lo.min(hi),
            hi: hi.max(lo),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.width() <= EPS
    }

    pub fn is_zero(&self) -> bool {
        self.hi <= 0.0
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.lo - EPS && p <= self.hi + EPS
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &ProbInterval) -> bool {
        other.lo >= self.lo - EPS && other.hi <= self.hi + EPS
    }

    /// Endpoint product `[a.lo * b.lo, a.hi * b.hi]`.
    pub fn product(&self, other: &ProbInterval) -> ProbInterval {
        ProbInterval {
            lo: self.lo * other.lo,
            hi: self.hi * other.hi,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &ProbInterval) -> ProbInterval {
        ProbInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn approx_eq(&self, other: &ProbInterval, tol: f64) -> bool {
        (self.lo - other.lo).abs() <= tol && (self.hi - other.hi).abs() <= tol
    }
}

/// Effective probability of an arrow: label probability times arrow probability.
pub fn interval_product(a: ProbInterval, b: ProbInterval) -> ProbInterval {
    a.product(&b)
}

impl Default for ProbInterval {
    fn default() -> Self {
        ProbInterval::ZERO
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", format_prob(self.lo))
        } else {
            write!(f, "[{},{}]", format_prob(self.lo), format_prob(self.hi))
        }
    }
}

/// Formats a probability with at most 12 significant digits and no trailing
/// zeros. The output never uses exponent notation.
pub fn format_prob(p: f64) -> String {
    if p == 0.0 {
        return "0".to_string();
    }
    let magnitude = p.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{:.*}", decimals, p);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> ProbInterval {
        ProbInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn product_examples() {
        assert_eq!(interval_product(iv(1.0, 1.0), iv(0.5, 0.5)), iv(0.5, 0.5));
        assert_eq!(interval_product(iv(0.0, 1.0), iv(0.3, 0.7)), iv(0.0, 0.7));
        let p = interval_product(iv(0.1, 0.8), iv(0.5, 0.5));
        assert!(p.approx_eq(&iv(0.05, 0.4), 1e-15));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(ProbInterval::new(0.6, 0.5).is_err());
        assert!(ProbInterval::new(-0.1, 0.5).is_err());
        assert!(ProbInterval::new(0.1, 1.5).is_err());
        assert!(ProbInterval::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_prob(0.5), "0.5");
        assert_eq!(format_prob(1.0), "1");
        assert_eq!(format_prob(0.0), "0");
        assert_eq!(format_prob(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_prob(0.1 + 0.2), "0.3");
        assert_eq!(format_prob(1e-7), "0.0000001");
        assert_eq!(iv(0.5, 0.5).to_string(), "0.5");
        assert_eq!(iv(0.1, 0.8).to_string(), "[0.1,0.8]");
    }

    #[test]
    fn formatting_is_stable_under_reparse() {
        for &x in &[
            1.0 / 3.0,
            0.123456789012345,
            2.0 / 7.0,
            0.999999999999951,
            1e-12,
        ] {
            let s = format_prob(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(format_prob(y), s);
        }
    }
}
