//! Joint distributions over all measurements of a behavior: existence by
//! exact LP, and the two explicit constructions (products over congruence
//! classes, and conditioning on a shared pair).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{ConstraintSystem, FarkasCertificate, Feasibility};
use crate::rational::Rational;
use crate::theory::Measurement;
use crate::{outcome_tuples, tuple_index};

use super::graph::{congruence_classes, CongruenceClasses, CongruenceGraph};
use super::{guard, Behavior, Scenario};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JdResult {
    /// Weights over global assignments in [`outcome_tuples`] order of the
    /// scenario's measurements.
    Exists(Vec<Rational>),
    NoJd(FarkasCertificate),
}

impl JdResult {
    pub fn exists(&self) -> bool {
        matches!(self, JdResult::Exists(_))
    }
}

/// Nonnegative weights on global assignments whose context marginals equal
/// the behavior's statistics.
pub fn jd_system(b: &Behavior) -> Result<ConstraintSystem> {
    let s = &b.scenario;
    guard(s.global_size())?;
    let counts = s.global_counts();
    let globals = outcome_tuples(&counts);
    let mut cs = ConstraintSystem::with_variables(globals.iter().map(|g| format!("P({})", super::tuple_string(g))));
    for (c, ctx) in s.contexts.iter().enumerate() {
        let ccounts = s.context_counts(c);
        let mut rows: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new(); ccounts.iter().product()];
        for (gi, g) in globals.iter().enumerate() {
            let local: Vec<usize> = ctx.iter().map(|&m| g[m]).collect();
            rows[tuple_index(&ccounts, &local)].push((gi, Rational::one()));
        }
        for (row, p) in rows.iter().zip(&b.stats[c]) {
            cs.add_equality_terms(row, p.clone());
        }
    }
    if s.contexts.is_empty() {
        let all: Vec<(usize, Rational)> = (0..globals.len()).map(|i| (i, Rational::one())).collect();
        cs.add_equality_terms(&all, Rational::one());
    }
    for v in 0..globals.len() {
        cs.add_nonnegative(v);
    }
    Ok(cs)
}

pub fn jd_feasible(b: &Behavior) -> Result<JdResult> {
    Ok(match jd_system(b)?.feasible()? {
        Feasibility::Feasible(x) => JdResult::Exists(x),
        Feasibility::Infeasible(c) => JdResult::NoJd(c),
    })
}

/// True iff every context marginal of `global` equals the behavior exactly.
pub fn marginals_match(b: &Behavior, global: &[Rational]) -> bool {
    let s = &b.scenario;
    let counts = s.global_counts();
    let globals = outcome_tuples(&counts);
    if global.len() != globals.len() || global.iter().any(Rational::is_negative) {
        return false;
    }
    s.contexts.iter().enumerate().all(|(c, ctx)| {
        let ccounts = s.context_counts(c);
        let mut m = alloc::vec![Rational::zero(); ccounts.iter().product()];
        for (g, p) in globals.iter().zip(global) {
            let local: Vec<usize> = ctx.iter().map(|&i| g[i]).collect();
            m[tuple_index(&ccounts, &local)] += p;
        }
        m == b.stats[c]
    })
}

fn global_behavior(measurements: Vec<Measurement>, dist: Vec<Rational>) -> Result<Behavior> {
    let names: Vec<String> = measurements.iter().map(|m| m.name.clone()).collect();
    let s = Scenario::from_names(measurements, &[names])?;
    Behavior::new(s, alloc::vec![dist])
}

/// Product of the class distributions, where the behavior's contexts are
/// the congruence classes of `g`.
pub fn product_jd(g: &CongruenceGraph, b: &Behavior) -> Result<Behavior> {
    let classes = match congruence_classes(g) {
        CongruenceClasses::Classes(c) => c,
        CongruenceClasses::Intransitive { a, b, c } => {
            return Err(Error::Intransitive(format!("{a}–{b} and {b}–{c} but not {a}–{c}")))
        }
    };
    let s = &b.scenario;
    let want: BTreeSet<BTreeSet<&str>> = classes
        .iter()
        .map(|c| c.iter().map(String::as_str).collect())
        .collect();
    let have: BTreeSet<BTreeSet<&str>> = (0..s.contexts.len())
        .map(|c| s.context_names(c).into_iter().collect())
        .collect();
    if want != have || have.len() != s.contexts.len() {
        return Err(Error::InvalidBehavior(
            "behavior contexts must be exactly the congruence classes".into(),
        ));
    }
    let counts = s.global_counts();
    let dist = outcome_tuples(&counts)
        .iter()
        .map(|g| {
            s.contexts
                .iter()
                .enumerate()
                .map(|(c, ctx)| {
                    let local: Vec<usize> = ctx.iter().map(|&i| g[i]).collect();
                    b.prob(c, &local).clone()
                })
                .product()
        })
        .collect();
    global_behavior(s.measurements.clone(), dist)
}

/// `P(A1,A2,B1,B2) = P(A1,B1,B2) P(A2,B1,B2) / P(B1,B2)` for a behavior with
/// contexts `{A1,B1,B2}`, `{A2,B1,B2}` and `{B1,B2}`. The result's
/// measurements are ordered `A1, A2, B1, B2`.
pub fn conditional_jd_2x2(b: &Behavior) -> Result<Behavior> {
    let s = &b.scenario;
    if s.contexts.len() != 3 {
        return Err(Error::InvalidBehavior("expected three contexts".into()));
    }
    let pair = s
        .contexts
        .iter()
        .position(|c| c.len() == 2)
        .ok_or_else(|| Error::MissingContext("{B1,B2}".into()))?;
    let triples: Vec<usize> = (0..3).filter(|&c| c != pair).collect();
    let bs = s.contexts[pair].clone();
    let mut a = Vec::with_capacity(2);
    for &t in &triples {
        let ctx = &s.contexts[t];
        if ctx.len() != 3 || !bs.iter().all(|x| ctx.contains(x)) {
            return Err(Error::MissingContext(format!(
                "{{A,{},{}}}",
                s.measurements[bs[0]].name, s.measurements[bs[1]].name
            )));
        }
        a.push(*ctx.iter().find(|x| !bs.contains(x)).expect("three distinct measurements"));
    }
    if a[0] == a[1] {
        return Err(Error::InvalidBehavior("both triples use the same A measurement".into()));
    }
    let pb = &b.stats[pair];
    for (k, &t) in triples.iter().enumerate() {
        let m = b.marginal(t, &bs).expect("triple contains the pair");
        if &m != pb {
            return Err(Error::InconsistentMarginals(format!(
                "({},{}) marginal of context {} differs from context {}",
                s.measurements[bs[0]].name,
                s.measurements[bs[1]].name,
                s.context_label(triples[k]),
                s.context_label(pair)
            )));
        }
    }
    let order = [a[0], a[1], bs[0], bs[1]];
    let measurements: Vec<Measurement> = order.iter().map(|&i| s.measurements[i].clone()).collect();
    let counts: Vec<usize> = measurements.iter().map(|m| m.outcomes).collect();
    let pcounts = s.context_counts(pair);
    let mut dist = Vec::with_capacity(counts.iter().product());
    for g in outcome_tuples(&counts) {
        let bb = [g[2], g[3]];
        let den = &pb[tuple_index(&pcounts, &bb)];
        if den.is_zero() {
            return Err(Error::ZeroDenominatorCell(format!(
                "{}={}, {}={}",
                s.measurements[bs[0]].name, bb[0], s.measurements[bs[1]].name, bb[1]
            )));
        }
        let pick = |t: usize, av: usize| -> Rational {
            let ctx = &s.contexts[t];
            let local: Vec<usize> = ctx
                .iter()
                .map(|&i| if i == bs[0] { bb[0] } else if i == bs[1] { bb[1] } else { av })
                .collect();
            b.prob(t, &local).clone()
        };
        dist.push(pick(triples[0], g[0]) * pick(triples[1], g[1]) / den);
    }
    global_behavior(measurements, dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;
    use alloc::string::ToString;

    fn binary(names: &[&str]) -> Vec<Measurement> {
        names.iter().map(|n| Measurement::new(*n, 2)).collect()
    }

    #[test]
    fn os_and_xos_have_no_jd() {
        let os = fixtures::os_anticorrelated();
        match jd_feasible(&os).unwrap() {
            JdResult::NoJd(cert) => assert!(cert.verify(&jd_system(&os).unwrap())),
            JdResult::Exists(_) => panic!("OS behavior has a JD"),
        }
        assert!(!jd_feasible(&fixtures::xos_box()).unwrap().exists());
    }

    #[test]
    fn product_behavior_has_jd() {
        let s = fixtures::os_scenario();
        let b = super::super::assignment_behavior(&s, &[1, 0, 1]).unwrap();
        match jd_feasible(&b).unwrap() {
            JdResult::Exists(p) => assert!(marginals_match(&b, &p)),
            JdResult::NoJd(_) => panic!(),
        }
    }

    #[test]
    fn product_over_singletons() {
        let ms = binary(&["X", "Z"]);
        let s = Scenario::new(ms, &[&["X"], &["Z"]]).unwrap();
        let b = Behavior::new(s, alloc::vec![alloc::vec![rat(1, 1), rat(0, 1)], alloc::vec![rat(1, 2), rat(1, 2)]]).unwrap();
        let g = CongruenceGraph::edgeless(alloc::vec!["X".to_string(), "Z".to_string()]);
        let p = product_jd(&g, &b).unwrap();
        assert_eq!(p.stats[0], [rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)]);
        let complete = CongruenceGraph::complete(alloc::vec!["X".to_string(), "Z".to_string()]);
        assert!(product_jd(&complete, &b).is_err());
    }

    #[test]
    fn intransitive_graph_is_rejected() {
        let ms = binary(&["A", "B", "C"]);
        let s = Scenario::new(ms, &[&["A", "B", "C"]]).unwrap();
        let b = Behavior::new(s, alloc::vec![alloc::vec![rat(1, 8); 8]]).unwrap();
        let g = CongruenceGraph::new(
            alloc::vec!["A".to_string(), "B".to_string(), "C".to_string()],
            &[("A", "B"), ("B", "C")],
        )
        .unwrap();
        assert!(matches!(product_jd(&g, &b), Err(Error::Intransitive(_))));
    }

    #[test]
    fn uniform_conditional_construction() {
        let ms = binary(&["A1", "A2", "B1", "B2"]);
        let s = Scenario::new(ms, &[&["A1", "B1", "B2"], &["A2", "B1", "B2"], &["B1", "B2"]]).unwrap();
        let b = Behavior::new(
            s,
            alloc::vec![alloc::vec![rat(1, 8); 8], alloc::vec![rat(1, 8); 8], alloc::vec![rat(1, 4); 4]],
        )
        .unwrap();
        let g = conditional_jd_2x2(&b).unwrap();
        assert_eq!(g.stats[0], alloc::vec![rat(1, 16); 16]);
    }

    #[test]
    fn conditional_construction_errors() {
        let ms = binary(&["A1", "A2", "B1", "B2"]);
        let s = Scenario::new(ms, &[&["A1", "B1", "B2"], &["A2", "B1", "B2"], &["B1", "B2"]]).unwrap();
        let mut skew = alloc::vec![rat(0, 1); 8];
        skew[0] = rat(1, 1);
        let b = Behavior::new(
            s.clone(),
            alloc::vec![skew.clone(), alloc::vec![rat(1, 8); 8], alloc::vec![rat(1, 4); 4]],
        )
        .unwrap();
        assert!(matches!(conditional_jd_2x2(&b), Err(Error::InconsistentMarginals(_))));
        let mut pair = alloc::vec![rat(0, 1); 4];
        pair[0] = rat(1, 1);
        let b = Behavior::new(s, alloc::vec![skew.clone(), skew, pair]).unwrap();
        assert!(matches!(conditional_jd_2x2(&b), Err(Error::ZeroDenominatorCell(_))));
    }

    #[test]
    fn size_guard() {
        let ms: Vec<Measurement> = (0..21).map(|i| Measurement::new(alloc::format!("M{i}"), 2)).collect();
        let s = Scenario::new(ms, &[&["M0"]]).unwrap();
        let b = Behavior::new(s, alloc::vec![alloc::vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert!(matches!(jd_feasible(&b), Err(Error::SizeGuard { .. })));
    }
}
