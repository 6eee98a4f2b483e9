use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::decimal_rational;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::policy::{Policy, Preference};
use crate::prob::ProbInterval;
use crate::symbol::ActSymbol;

fn clamp(x: BigRational, lo: &BigRational, hi: &BigRational) -> (BigRational, bool) {
    if &x < lo {
        (lo.clone(), true)
    } else if &x > hi {
        (hi.clone(), true)
    } else {
        (x, false)
    }
}

/// Royal policy: in preference order, each action takes its upper bound of
/// the remaining mass (`b_1`, then `(1 - b_1) b_2`, ...) and the last action
/// takes what is left. When that would leave the lower bounds of the less
/// preferred actions unreachable, the value is clamped into the feasible
/// range and the policy is marked adjusted. Computed in exact decimal
/// arithmetic.
pub fn preference_to_policy(model: &Model, preference: &Preference) -> Result<Policy> {
    preference.check(model)?;
    let mut policy = Policy::new();
    for s in 0..model.states.len() {
        let id = model.state_id(s);
        let order: Vec<ActSymbol> = match preference.ranking.get(id) {
            Some(list) => list.clone(),
            None => {
                let avail = model.labels_from(s);
                model
                    .labels
                    .iter()
                    .filter(|l| avail.contains(*l))
                    .cloned()
                    .collect()
            }
        };
        if order.is_empty() {
            continue;
        }
        let bounds: Vec<(BigRational, BigRational)> = order
            .iter()
            .map(|a| {
                let iv = model.agent_interval(s, a).unwrap_or(ProbInterval::ZERO);
                Ok((decimal_rational(iv.lo())?, decimal_rational(iv.hi())?))
            })
            .collect::<Result<_>>()?;
        let one = BigRational::from_integer(1.into());
        let sum_lo = bounds.iter().fold(BigRational::zero(), |acc, b| acc + &b.0);
        let sum_hi = bounds.iter().fold(BigRational::zero(), |acc, b| acc + &b.1);
        if sum_lo > one || sum_hi < one {
            return Err(Error::Infeasible(format!(
                "state {id}: action intervals admit no policy"
            )));
        }
        let mut rest = one;
        let mut rest_lo = sum_lo;
        let mut rest_hi = sum_hi;
        for (k, (a, (lo, hi))) in order.iter().zip(&bounds).enumerate() {
            rest_lo -= lo;
            rest_hi -= hi;
            let p = if k + 1 == order.len() {
                rest.clone()
            } else {
                let floor = lo.clone().max(&rest - &rest_hi);
                let ceil = hi.clone().min(&rest - &rest_lo);
                let (p, bound) = clamp(&rest * hi, &floor, &ceil);
                policy.adjusted |= bound;
                p
            };
            rest -= &p;
            let value = p
                .to_f64()
                .ok_or_else(|| Error::Numeric(format!("policy value for {id} {a}")))?;
            policy.set(id.clone(), a.clone(), value);
        }
    }
    policy.check(model)?;
    Ok(policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_model;
    use crate::symbol::sym;

    fn rain() -> Model {
        parse_model(
            "model mdp-plus
obs wet dry-ground
act rain dry
state sky initial trace wet=[0,1] dry-ground=[0,1]
arrow sky rain sky lp=[0.1,0.8] ap=1
arrow sky dry sky lp=[0.2,0.9] ap=1
",
        )
        .unwrap()
    }

    fn pref(order: &[&str]) -> Preference {
        let mut p = Preference::default();
        p.ranking
            .insert(sym("sky"), order.iter().map(|a| sym(a)).collect());
        p
    }

    #[test]
    fn royal_rain_is_eighty_percent() {
        let m = rain();
        let p = preference_to_policy(&m, &pref(&["rain", "dry"])).unwrap();
        assert_eq!(p.get(&sym("sky"), &sym("rain")), 0.8);
        let p = preference_to_policy(&m, &pref(&["dry", "rain"])).unwrap();
        assert_eq!(p.get(&sym("sky"), &sym("rain")), 0.1);
        assert!(!p.adjusted);
    }

    #[test]
    fn unconstrained_is_deterministic() {
        let m = parse_model(
            "model mdp
obs o
act a b c
state s initial trace o=1
arrow s a s ap=1
arrow s b s ap=1
arrow s c s ap=1
",
        )
        .unwrap();
        let mut pr = Preference::default();
        pr.ranking
            .insert(sym("s"), vec![sym("b"), sym("c"), sym("a")]);
        let p = preference_to_policy(&m, &pr).unwrap();
        assert_eq!(p.get(&sym("s"), &sym("b")), 1.0);
        assert_eq!(p.get(&sym("s"), &sym("a")), 0.0);
    }

    #[test]
    fn lower_bounds_force_an_adjustment() {
        let m = parse_model(
            "model mdp-plus
obs o
act a b c
state s initial trace o=1
arrow s a s lp=[0,1] ap=1
arrow s b s lp=[0,1] ap=1
arrow s c s lp=[0.3,1] ap=1
",
        )
        .unwrap();
        let mut pr = Preference::default();
        pr.ranking
            .insert(sym("s"), vec![sym("a"), sym("b"), sym("c")]);
        let p = preference_to_policy(&m, &pr).unwrap();
        assert!(p.adjusted);
        assert_eq!(p.get(&sym("s"), &sym("a")), 0.7);
        assert_eq!(p.get(&sym("s"), &sym("c")), 0.3);
    }

    #[test]
    fn infeasible_intervals() {
        let m = parse_model(
            "model mdp-plus
obs o
act a b
state s initial trace o=1
arrow s a s lp=[0.3,0.4] ap=1
arrow s b s lp=[0.3,0.4] ap=1
",
        )
        .unwrap();
        assert!(matches!(
            preference_to_policy(&m, &Preference::uniform(&m, &[])),
            Err(Error::Infeasible(_))
        ));
    }
}
