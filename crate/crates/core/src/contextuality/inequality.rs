//! The overprotective-seer sum of pair correlators and its four-measurement,
//! three-outcome extension.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::Behavior;

fn sign(outcome: usize) -> i64 {
    if outcome == 0 {
        1
    } else {
        -1
    }
}

/// `⟨AB⟩ + ⟨BC⟩ + ⟨AC⟩` with outcome 0 read as `+1` and outcome 1 as `−1`.
pub fn os_value(b: &Behavior) -> Result<Rational> {
    let s = &b.scenario;
    if s.measurements.len() != 3 || s.measurements.iter().any(|m| m.outcomes != 2) {
        return Err(Error::InvalidBehavior("OS needs exactly three binary measurements".into()));
    }
    let names: Vec<&str> = s.measurements.iter().map(|m| m.name.as_str()).collect();
    let mut total = Rational::zero();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let c = s
            .find_context(&[names[i], names[j]])
            .ok_or_else(|| Error::MissingContext(format!("{}{}", names[i], names[j])))?;
        for (tup, p) in b.tuples(c).iter().zip(&b.stats[c]) {
            total += p * Rational::from(sign(tup[0]) * sign(tup[1]));
        }
    }
    Ok(total)
}

/// `(v_max − v_mid)(v_mid − v_min)`: 1 exactly when the outcomes are 0, 1, 2
/// in some order.
pub fn xos_score_triple(a: usize, b: usize, c: usize) -> Result<u32> {
    if a > 2 || b > 2 || c > 2 {
        return Err(Error::OutOfRange(format!("XOS outcomes must be 0, 1 or 2, got ({a},{b},{c})")));
    }
    let mut v = [a, b, c];
    v.sort_unstable();
    // With a tie the middle of the sorted triple is the majority value.
    Ok(((v[2] - v[1]) * (v[1] - v[0])) as u32)
}

/// Sum of expected scores over the four triple contexts of four ternary
/// measurements.
pub fn xos_value(b: &Behavior) -> Result<Rational> {
    let s = &b.scenario;
    if s.measurements.len() != 4 || s.measurements.iter().any(|m| m.outcomes != 3) {
        return Err(Error::InvalidBehavior("XOS needs exactly four ternary measurements".into()));
    }
    let names: Vec<&str> = s.measurements.iter().map(|m| m.name.as_str()).collect();
    let mut total = Rational::zero();
    for skip in 0..4 {
        let triple: Vec<&str> = (0..4).filter(|&k| k != skip).map(|k| names[k]).collect();
        let c = s
            .find_context(&triple)
            .ok_or_else(|| Error::MissingContext(triple.concat()))?;
        for (tup, p) in b.tuples(c).iter().zip(&b.stats[c]) {
            if xos_score_triple(tup[0], tup[1], tup[2])? == 1 {
                total += p;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::{assignment_behavior, deterministic_assignments, Scenario};
    use crate::fixtures;
    use crate::rational::rat;
    use crate::theory::Measurement;

    #[test]
    fn triple_scores() {
        assert_eq!(xos_score_triple(0, 1, 2).unwrap(), 1);
        assert_eq!(xos_score_triple(2, 0, 1).unwrap(), 1);
        assert_eq!(xos_score_triple(0, 1, 1).unwrap(), 0);
        assert_eq!(xos_score_triple(1, 1, 1).unwrap(), 0);
        assert_eq!(xos_score_triple(2, 2, 0).unwrap(), 0);
        assert!(xos_score_triple(3, 0, 1).is_err());
    }

    #[test]
    fn os_bounds_by_brute_force() {
        let s = fixtures::os_scenario();
        let vals: Vec<Rational> = deterministic_assignments(&s)
            .unwrap()
            .map(|a| os_value(&assignment_behavior(&s, &a).unwrap()).unwrap())
            .collect();
        assert_eq!(vals.len(), 8);
        assert_eq!(vals.iter().min().unwrap(), &rat(-1, 1));
        assert_eq!(vals.iter().max().unwrap(), &rat(3, 1));
    }

    #[test]
    fn xos_bound_by_brute_force() {
        let s = fixtures::xos_scenario();
        let vals: Vec<Rational> = deterministic_assignments(&s)
            .unwrap()
            .map(|a| xos_value(&assignment_behavior(&s, &a).unwrap()).unwrap())
            .collect();
        assert_eq!(vals.len(), 81);
        assert_eq!(vals.iter().max().unwrap(), &rat(2, 1));
    }

    #[test]
    fn contextual_values() {
        let s = fixtures::os_scenario();
        for (name, q) in fixtures::os_table() {
            assert_eq!(os_value(&q.to_behavior(&s).unwrap()).unwrap(), rat(-3, 1), "{name}");
        }
        assert_eq!(os_value(&fixtures::os_box_a()).unwrap(), rat(-3, 1));
        let x = fixtures::xos_scenario();
        for r in fixtures::xos_table() {
            assert_eq!(xos_value(&r.to_behavior(&x).unwrap()).unwrap(), rat(4, 1));
        }
        assert_eq!(xos_value(&fixtures::xos_box()).unwrap(), rat(4, 1));
        assert_eq!(xos_value(&assignment_behavior(&x, &[1, 1, 1, 1]).unwrap()).unwrap(), rat(0, 1));
    }

    #[test]
    fn correlated_os_reaches_three() {
        let s = fixtures::os_scenario();
        assert_eq!(os_value(&assignment_behavior(&s, &[1, 1, 1]).unwrap()).unwrap(), rat(3, 1));
    }

    #[test]
    fn missing_context() {
        let ms = alloc::vec![Measurement::new("A", 2), Measurement::new("B", 2), Measurement::new("C", 2)];
        let s = Scenario::new(ms, &[&["A", "B"], &["B", "C"]]).unwrap();
        let b = Behavior::new(s, alloc::vec![alloc::vec![rat(1, 4); 4], alloc::vec![rat(1, 4); 4]]).unwrap();
        assert!(matches!(os_value(&b), Err(Error::MissingContext(_))));
    }
}
