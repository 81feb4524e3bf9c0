//! Post-measurement disturbance rules and their consistency with the
//! nonsimpliciality conditions of a theory.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{self, AffineDependency};
use crate::rational::Rational;
use crate::theory::{Mixture, Point, Theory};

/// What measuring `measurement` does to each pure state.
///
/// An image keyed by `(state, Some(a))` applies after outcome `a`; an image
/// keyed by `(state, None)` applies after any outcome without a specific entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DisturbanceRule {
    pub measurement: String,
    pub images: BTreeMap<(String, Option<usize>), Mixture>,
}

impl DisturbanceRule {
    pub fn new(measurement: impl Into<String>) -> Self {
        DisturbanceRule {
            measurement: measurement.into(),
            images: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, state: impl Into<String>, outcome: Option<usize>, image: Mixture) {
        self.images.insert((state.into(), outcome), image);
    }

    pub fn with(mut self, state: impl Into<String>, outcome: Option<usize>, image: Mixture) -> Self {
        self.set(state, outcome, image);
        self
    }

    pub fn image(&self, state: &str, outcome: usize) -> Option<&Mixture> {
        self.images
            .get(&(state.into(), Some(outcome)))
            .or_else(|| self.images.get(&(state.into(), None)))
    }

    /// True if any image is keyed by an outcome.
    pub fn is_selective(&self) -> bool {
        self.images.keys().any(|(_, o)| o.is_some())
    }
}

/// Unnormalized post-measurement point for each outcome of `rule` applied to
/// `mixture`: `Σ_ψ w(ψ) P(a|ψ) mix(image(ψ, a))`.
pub fn pushforward(t: &Theory, rule: &DisturbanceRule, mixture: &Mixture) -> Result<Vec<Point>> {
    let mi = t.require_measurement(&rule.measurement)?;
    let outcomes = t.measurements[mi].outcomes;
    let zero = t
        .pure_states
        .first()
        .ok_or(Error::EmptyInput)?
        .point
        .zero_like();
    let mut out = alloc::vec![zero; outcomes];
    for (name, w) in mixture.iter() {
        let s = t.state(name)?;
        for (a, acc) in out.iter_mut().enumerate() {
            let p = s.point.prob(mi, a);
            if p.is_zero() {
                continue;
            }
            let img = rule.image(name, a).ok_or_else(|| Error::IncompleteRules {
                measurement: rule.measurement.clone(),
                state: name.clone(),
            })?;
            acc.add_scaled(&(w * p), &t.mix(img)?);
        }
    }
    Ok(out)
}

/// Outcome-blind post-measurement point.
pub fn pushforward_total(t: &Theory, rule: &DisturbanceRule, mixture: &Mixture) -> Result<Point> {
    let parts = pushforward(t, rule, mixture)?;
    let mut total = parts[0].zero_like();
    for p in &parts {
        total.add_scaled(&Rational::one(), p);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisturbanceViolation {
    pub measurement: String,
    pub condition: AffineDependency,
    /// `None` when the outcome-blind images differ.
    pub outcome: Option<usize>,
    pub left: Point,
    pub right: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DisturbanceReport {
    pub conditions: Vec<AffineDependency>,
    pub violations: Vec<DisturbanceViolation>,
}

impl DisturbanceReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_coverage(t: &Theory, rule: &DisturbanceRule) -> Result<()> {
    let mi = t.require_measurement(&rule.measurement)?;
    for s in &t.pure_states {
        for a in 0..t.measurements[mi].outcomes {
            if s.point.prob(mi, a).is_zero() {
                continue;
            }
            let img = rule.image(&s.name, a).ok_or_else(|| Error::IncompleteRules {
                measurement: rule.measurement.clone(),
                state: s.name.clone(),
            })?;
            img.check()?;
            t.mix(img)?;
        }
    }
    Ok(())
}

/// Pushes both sides of every nonsimpliciality condition through every
/// measurement's rule. Selective rules are compared outcome by outcome,
/// others on the outcome-blind image.
pub fn check_disturbance_consistency(t: &Theory, rules: &[DisturbanceRule]) -> Result<DisturbanceReport> {
    t.ensure_valid()?;
    for m in &t.measurements {
        if !rules.iter().any(|r| r.measurement == m.name) {
            return Err(Error::IncompleteRules {
                measurement: m.name.clone(),
                state: t.pure_states.first().map(|s| s.name.clone()).unwrap_or_default(),
            });
        }
    }
    for r in rules {
        check_coverage(t, r)?;
    }
    let conditions = geometry::theory_conditions(t, None)?;
    let mut violations = Vec::new();
    for rule in rules {
        for cond in &conditions {
            let l = pushforward(t, rule, &cond.left)?;
            let r = pushforward(t, rule, &cond.right)?;
            if rule.is_selective() {
                for (a, (lp, rp)) in l.into_iter().zip(r).enumerate() {
                    if lp != rp {
                        violations.push(DisturbanceViolation {
                            measurement: rule.measurement.clone(),
                            condition: cond.clone(),
                            outcome: Some(a),
                            left: lp,
                            right: rp,
                        });
                    }
                }
            } else {
                let lt = pushforward_total(t, rule, &cond.left)?;
                let rt = pushforward_total(t, rule, &cond.right)?;
                if lt != rt {
                    violations.push(DisturbanceViolation {
                        measurement: rule.measurement.clone(),
                        condition: cond.clone(),
                        outcome: None,
                        left: lt,
                        right: rt,
                    });
                }
            }
        }
    }
    Ok(DisturbanceReport {
        conditions,
        violations,
    })
}

/// Projective rules of a regular theory: outcome `a` of `A` leaves the
/// mapped eigenstate of `(A, a)`.
pub fn collapse_rules(t: &Theory) -> Result<Vec<DisturbanceRule>> {
    let mut rules = Vec::with_capacity(t.measurements.len());
    for m in &t.measurements {
        let mut rule = DisturbanceRule::new(m.name.clone());
        for a in 0..m.outcomes {
            let e = t.eigenstate(&m.name, a).ok_or_else(|| Error::NotRegular {
                measurement: m.name.clone(),
                outcome: a,
            })?;
            for s in &t.pure_states {
                rule.set(s.name.clone(), Some(a), Mixture::pure(e));
            }
        }
        rules.push(rule);
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;

    #[test]
    fn collapse_is_consistent_for_skewed_diamond() {
        let t = fixtures::skewed_diamond();
        let rules = collapse_rules(&t).unwrap();
        let rep = check_disturbance_consistency(&t, &rules).unwrap();
        assert_eq!(rep.conditions.len(), 1);
        assert!(rep.is_consistent(), "{:?}", rep.violations);
    }

    #[test]
    fn sending_x_plus_to_z_plus_breaks_the_condition() {
        let t = fixtures::skewed_diamond();
        let mut rules = collapse_rules(&t).unwrap();
        let z = rules.iter_mut().find(|r| r.measurement == "Z").unwrap();
        for a in 0..2 {
            z.set("X+", Some(a), Mixture::pure("Z+"));
        }
        let rep = check_disturbance_consistency(&t, &rules).unwrap();
        assert!(!rep.is_consistent());
        let v = &rep.violations[0];
        assert_eq!(v.measurement, "Z");
        assert_eq!(v.outcome, Some(1));
        // ½·¾ of X+ now lands on Z+ instead of Z-.
        assert_eq!(v.left.prob(1, 0), &rat(3, 8));
        assert_eq!(v.right.prob(1, 0), &rat(0, 1));
    }

    #[test]
    fn missing_rule_is_an_error() {
        let t = fixtures::diamond();
        let mut rules = collapse_rules(&t).unwrap();
        rules.pop();
        assert!(matches!(
            check_disturbance_consistency(&t, &rules),
            Err(Error::IncompleteRules { .. })
        ));
        let mut rules = collapse_rules(&t).unwrap();
        rules[0].images.retain(|(s, _), _| s != "Z+");
        assert!(matches!(
            check_disturbance_consistency(&t, &rules),
            Err(Error::IncompleteRules { .. })
        ));
    }

    #[test]
    fn blind_rule_uses_total_image() {
        // Replacing every state by the center is trivially consistent.
        let t = fixtures::diamond();
        let center = Mixture::uniform(["X+", "X-"]);
        let rules: Vec<DisturbanceRule> = ["X", "Z"]
            .iter()
            .map(|m| {
                let mut r = DisturbanceRule::new(*m);
                for s in t.state_names() {
                    r.set(s, None, center.clone());
                }
                r
            })
            .collect();
        assert!(check_disturbance_consistency(&t, &rules).unwrap().is_consistent());
    }
}
