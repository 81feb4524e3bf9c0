//! Contextual statistics: scenarios of measurement contexts, behaviors over
//! them, deterministic configurations, and single-measurement marginal
//! consistency.

pub mod graph;
pub mod inequality;
pub mod jd;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::theory::{Measurement, Point};
use crate::{outcome_tuples, tuple_index};

pub use graph::{congruence_classes, CongruenceClasses, CongruenceGraph};
pub use inequality::{os_value, xos_score_triple, xos_value};
pub use jd::{conditional_jd_2x2, jd_feasible, jd_system, product_jd, JdResult};

/// Largest enumeration the crate performs explicitly.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

pub(crate) fn guard(count: u128) -> Result<()> {
    if count > ENUMERATION_LIMIT {
        Err(Error::SizeGuard {
            count,
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Measurements plus the subsets that can be measured together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub measurements: Vec<Measurement>,
    /// Each context lists measurement indices in the order its outcome
    /// tuples are written.
    pub contexts: Vec<Vec<usize>>,
}

impl Scenario {
    pub fn new(measurements: Vec<Measurement>, contexts: &[&[&str]]) -> Result<Self> {
        let owned: Vec<Vec<String>> = contexts
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect();
        Self::from_names(measurements, &owned)
    }

    pub fn from_names(measurements: Vec<Measurement>, contexts: &[Vec<String>]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &measurements {
            if m.outcomes < 1 {
                return Err(Error::InvalidBehavior(format!("measurement `{}` has no outcomes", m.name)));
            }
            if !seen.insert(m.name.clone()) {
                return Err(Error::InvalidBehavior(format!("duplicate measurement `{}`", m.name)));
            }
        }
        let mut idx = Vec::with_capacity(contexts.len());
        for c in contexts {
            if c.is_empty() {
                return Err(Error::InvalidBehavior("empty context".into()));
            }
            let mut ctx = Vec::with_capacity(c.len());
            for name in c {
                let i = measurements
                    .iter()
                    .position(|m| &m.name == name)
                    .ok_or_else(|| Error::UnknownMeasurement(name.clone()))?;
                if ctx.contains(&i) {
                    return Err(Error::InvalidBehavior(format!("`{name}` repeated in a context")));
                }
                ctx.push(i);
            }
            idx.push(ctx);
        }
        Ok(Scenario {
            measurements,
            contexts: idx,
        })
    }

    pub fn measurement_index(&self, name: &str) -> Option<usize> {
        self.measurements.iter().position(|m| m.name == name)
    }

    pub fn context_counts(&self, c: usize) -> Vec<usize> {
        self.contexts[c].iter().map(|&i| self.measurements[i].outcomes).collect()
    }

    pub fn context_size(&self, c: usize) -> usize {
        self.context_counts(c).iter().product()
    }

    pub fn context_names(&self, c: usize) -> Vec<&str> {
        self.contexts[c].iter().map(|&i| self.measurements[i].name.as_str()).collect()
    }

    /// Measurement names concatenated, comma separated if any name is
    /// longer than one character.
    pub fn context_label(&self, c: usize) -> String {
        let names = self.context_names(c);
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }

    /// Context whose measurement set equals `names`, in any order.
    pub fn find_context(&self, names: &[&str]) -> Option<usize> {
        let want: BTreeSet<usize> = names.iter().filter_map(|n| self.measurement_index(n)).collect();
        if want.len() != names.len() {
            return None;
        }
        self.contexts
            .iter()
            .position(|c| c.len() == want.len() && c.iter().all(|i| want.contains(i)))
    }

    /// Outcome counts of all measurements, in scenario order.
    pub fn global_counts(&self) -> Vec<usize> {
        self.measurements.iter().map(|m| m.outcomes).collect()
    }

    pub fn global_size(&self) -> u128 {
        self.measurements
            .iter()
            .map(|m| m.outcomes as u128)
            .try_fold(1u128, |a, n| a.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    /// Number of per-context deterministic configurations.
    pub fn configuration_count(&self) -> u128 {
        (0..self.contexts.len())
            .map(|c| self.context_size(c) as u128)
            .try_fold(1u128, |a, n| a.checked_mul(n))
            .unwrap_or(u128::MAX)
    }
}

/// Per-context outcome distributions, dense over each context's tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub scenario: Scenario,
    pub stats: Vec<Vec<Rational>>,
}

impl Behavior {
    pub fn new(scenario: Scenario, stats: Vec<Vec<Rational>>) -> Result<Self> {
        if stats.len() != scenario.contexts.len() {
            return Err(Error::InvalidBehavior(format!(
                "{} contexts but {} distributions",
                scenario.contexts.len(),
                stats.len()
            )));
        }
        for (c, d) in stats.iter().enumerate() {
            let label = scenario.context_label(c);
            if d.len() != scenario.context_size(c) {
                return Err(Error::InvalidBehavior(format!(
                    "context {label}: expected {} probabilities, found {}",
                    scenario.context_size(c),
                    d.len()
                )));
            }
            if let Some(p) = d.iter().find(|p| p.is_negative()) {
                return Err(Error::InvalidBehavior(format!("context {label}: negative probability {p}")));
            }
            let s: Rational = d.iter().sum();
            if !s.is_one() {
                return Err(Error::InvalidBehavior(format!("context {label}: probabilities sum to {s}")));
            }
        }
        Ok(Behavior { scenario, stats })
    }

    pub fn prob(&self, context: usize, tuple: &[usize]) -> &Rational {
        &self.stats[context][tuple_index(&self.scenario.context_counts(context), tuple)]
    }

    pub fn tuples(&self, context: usize) -> Vec<Vec<usize>> {
        outcome_tuples(&self.scenario.context_counts(context))
    }

    /// Distribution of measurement `mi` as seen inside `context`.
    pub fn single_marginal(&self, context: usize, mi: usize) -> Option<Vec<Rational>> {
        let pos = self.scenario.contexts[context].iter().position(|&i| i == mi)?;
        let mut out = alloc::vec![Rational::zero(); self.scenario.measurements[mi].outcomes];
        for (tup, p) in self.tuples(context).iter().zip(&self.stats[context]) {
            out[tup[pos]] += p;
        }
        Some(out)
    }

    /// Marginal of `context` onto the measurements `sub`, in `sub` order.
    pub fn marginal(&self, context: usize, sub: &[usize]) -> Option<Vec<Rational>> {
        let ctx = &self.scenario.contexts[context];
        let pos: Vec<usize> = sub.iter().map(|m| ctx.iter().position(|i| i == m)).collect::<Option<_>>()?;
        let counts: Vec<usize> = sub.iter().map(|&m| self.scenario.measurements[m].outcomes).collect();
        let mut out = alloc::vec![Rational::zero(); counts.iter().product()];
        for (tup, p) in self.tuples(context).iter().zip(&self.stats[context]) {
            let t: Vec<usize> = pos.iter().map(|&k| tup[k]).collect();
            out[tuple_index(&counts, &t)] += p;
        }
        Some(out)
    }

    /// Single-measurement marginals as an operational point; requires the
    /// behavior to pass [`gleason_nosignaling_check`].
    pub fn marginal_point(&self) -> Result<Point> {
        let report = gleason_nosignaling_check(self);
        if let Some(v) = report.violations.first() {
            return Err(Error::InconsistentMarginals(v.to_string()));
        }
        let mut dists = Vec::with_capacity(self.scenario.measurements.len());
        for mi in 0..self.scenario.measurements.len() {
            let c = self
                .scenario
                .contexts
                .iter()
                .position(|c| c.contains(&mi))
                .ok_or_else(|| Error::MissingContext(self.scenario.measurements[mi].name.clone()))?;
            dists.push(self.single_marginal(c, mi).expect("context contains measurement"));
        }
        Ok(Point(dists))
    }

    /// `Σ w_i b_i` over behaviors on the same scenario.
    pub fn mixture(parts: &[(Rational, &Behavior)]) -> Result<Behavior> {
        let first = parts.first().ok_or(Error::EmptyInput)?.1;
        let mut stats: Vec<Vec<Rational>> = first
            .stats
            .iter()
            .map(|d| alloc::vec![Rational::zero(); d.len()])
            .collect();
        for (w, b) in parts {
            if b.scenario != first.scenario {
                return Err(Error::InvalidBehavior("mixing behaviors of different scenarios".into()));
            }
            for (acc, d) in stats.iter_mut().zip(&b.stats) {
                for (a, p) in acc.iter_mut().zip(d) {
                    *a += w * p;
                }
            }
        }
        Behavior::new(first.scenario.clone(), stats)
    }
}

/// One deterministic outcome tuple per context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextualConfiguration {
    pub outputs: Vec<Vec<usize>>,
}

impl ContextualConfiguration {
    pub fn new(outputs: Vec<Vec<usize>>) -> Self {
        ContextualConfiguration { outputs }
    }

    pub fn check(&self, s: &Scenario) -> Result<()> {
        if self.outputs.len() != s.contexts.len() {
            return Err(Error::InvalidBehavior(format!(
                "{} contexts but {} outputs",
                s.contexts.len(),
                self.outputs.len()
            )));
        }
        for (c, out) in self.outputs.iter().enumerate() {
            let counts = s.context_counts(c);
            if out.len() != counts.len() || out.iter().zip(&counts).any(|(v, n)| v >= n) {
                return Err(Error::InvalidBehavior(format!(
                    "output {out:?} out of range for context {}",
                    s.context_label(c)
                )));
            }
        }
        Ok(())
    }

    pub fn to_behavior(&self, s: &Scenario) -> Result<Behavior> {
        self.check(s)?;
        let stats = self
            .outputs
            .iter()
            .enumerate()
            .map(|(c, out)| {
                let counts = s.context_counts(c);
                let mut d = alloc::vec![Rational::zero(); counts.iter().product()];
                d[tuple_index(&counts, out)] = Rational::one();
                d
            })
            .collect();
        Behavior::new(s.clone(), stats)
    }

    /// Every output bit flipped; binary scenarios only.
    pub fn flipped(&self, s: &Scenario) -> Result<Self> {
        self.check(s)?;
        if s.measurements.iter().any(|m| m.outcomes != 2) {
            return Err(Error::PartnerMismatch("bit flips need binary measurements".into()));
        }
        Ok(ContextualConfiguration {
            outputs: self
                .outputs
                .iter()
                .map(|o| o.iter().map(|v| 1 - v).collect())
                .collect(),
        })
    }

    /// Outputs written context by context, e.g. `AB:01 BC:10 CA:01`.
    pub fn display<'a>(&'a self, s: &'a Scenario) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ContextualConfiguration, &'a Scenario);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (c, out) in self.0.outputs.iter().enumerate() {
                    if c > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}:{}", self.1.context_label(c), tuple_string(out))?;
                }
                Ok(())
            }
        }
        D(self, s)
    }
}

/// Digits concatenated when all are single digits, else comma separated.
pub fn tuple_string(t: &[usize]) -> String {
    if t.iter().all(|&v| v < 10) {
        t.iter().map(|v| v.to_string()).collect()
    } else {
        t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Lazy enumeration of all per-context deterministic configurations, in
/// lexicographic order with the first context most significant.
#[derive(Debug, Clone)]
pub struct Configurations {
    tuples: Vec<Vec<Vec<usize>>>,
    cursor: Option<Vec<usize>>,
}

impl Iterator for Configurations {
    type Item = ContextualConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.cursor.as_mut()?;
        let item = ContextualConfiguration {
            outputs: cur.iter().enumerate().map(|(c, &k)| self.tuples[c][k].clone()).collect(),
        };
        let mut advanced = false;
        for pos in (0..cur.len()).rev() {
            cur[pos] += 1;
            if cur[pos] < self.tuples[pos].len() {
                advanced = true;
                break;
            }
            cur[pos] = 0;
        }
        if !advanced {
            self.cursor = None;
        }
        Some(item)
    }
}

pub fn enumerate_contextual_configurations(s: &Scenario) -> Result<Configurations> {
    guard(s.configuration_count())?;
    let tuples: Vec<Vec<Vec<usize>>> = (0..s.contexts.len()).map(|c| outcome_tuples(&s.context_counts(c))).collect();
    let cursor = if tuples.is_empty() {
        None
    } else {
        Some(alloc::vec![0; tuples.len()])
    };
    Ok(Configurations { tuples, cursor })
}

/// Lazy enumeration of noncontextual value assignments, one value per
/// measurement, first measurement most significant.
pub fn deterministic_assignments(s: &Scenario) -> Result<impl Iterator<Item = Vec<usize>>> {
    guard(s.global_size())?;
    Ok(outcome_tuples(&s.global_counts()).into_iter())
}

/// The behavior of a noncontextual assignment.
pub fn assignment_behavior(s: &Scenario, values: &[usize]) -> Result<Behavior> {
    if values.len() != s.measurements.len() {
        return Err(Error::DimensionMismatch {
            expected: s.measurements.len(),
            found: values.len(),
        });
    }
    ContextualConfiguration {
        outputs: s.contexts.iter().map(|c| c.iter().map(|&i| values[i]).collect()).collect(),
    }
    .to_behavior(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GleasonViolation {
    pub measurement: String,
    pub context_a: String,
    pub context_b: String,
    pub marginal_a: Vec<Rational>,
    pub marginal_b: Vec<Rational>,
}

impl fmt::Display for GleasonViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "P({}|{}) = ({}) but P({}|{}) = ({})",
            self.measurement,
            self.context_a,
            show(&self.marginal_a),
            self.measurement,
            self.context_b,
            show(&self.marginal_b)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GleasonReport {
    /// Number of pairwise marginal comparisons made.
    pub compared: usize,
    pub violations: Vec<GleasonViolation>,
}

impl GleasonReport {
    pub fn is_nonsignaling(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares each measurement's marginal in its first context with its
/// marginal in every later context containing it.
pub fn gleason_nosignaling_check(b: &Behavior) -> GleasonReport {
    let s = &b.scenario;
    let mut report = GleasonReport::default();
    for (mi, m) in s.measurements.iter().enumerate() {
        let ctxs: Vec<usize> = (0..s.contexts.len()).filter(|&c| s.contexts[c].contains(&mi)).collect();
        let Some((&first, rest)) = ctxs.split_first() else { continue };
        let base = b.single_marginal(first, mi).expect("context contains measurement");
        for &c in rest {
            report.compared += 1;
            let other = b.single_marginal(c, mi).expect("context contains measurement");
            if other != base {
                report.violations.push(GleasonViolation {
                    measurement: m.name.clone(),
                    context_a: s.context_label(first),
                    context_b: s.context_label(c),
                    marginal_a: base.clone(),
                    marginal_b: other,
                });
            }
        }
    }
    report
}

/// How the partners of a contextual box are determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartnerRule {
    /// Two configurations, the second the bit flip of the first.
    BitFlip,
    /// Any nonempty list, mixed uniformly.
    Listed,
}

/// Uniform mixture of a configuration and its partners.
pub fn contextual_box(s: &Scenario, configs: &[ContextualConfiguration], rule: PartnerRule) -> Result<Behavior> {
    if configs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if rule == PartnerRule::BitFlip {
        if configs.len() != 2 {
            return Err(Error::PartnerMismatch(format!(
                "a bit-flip box needs 2 configurations, got {}",
                configs.len()
            )));
        }
        let flip = configs[0].flipped(s)?;
        if flip != configs[1] {
            return Err(Error::PartnerMismatch(format!(
                "{} is not the bit flip of {}",
                configs[1].display(s),
                configs[0].display(s)
            )));
        }
    }
    let behaviors: Vec<Behavior> = configs.iter().map(|c| c.to_behavior(s)).collect::<Result<_>>()?;
    let w = Rational::new(1, configs.len() as i64);
    let parts: Vec<(Rational, &Behavior)> = behaviors.iter().map(|b| (w.clone(), b)).collect();
    Behavior::mixture(&parts)
}

/// Dimension bookkeeping for the three-measurement pairwise-context theory
/// with `n` outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualDimensionReport {
    pub outcomes: u64,
    /// Dimension of the contextual gdit polytope, `3(n² − 1)`.
    pub contextual_gdit: u64,
    /// Marginal-consistency conditions, `3(n − 1)`.
    pub gleason_conditions: u64,
    /// Dimension of the contextual no-signaling polytope, `3n(n − 1)`.
    pub nosignaling: u64,
    /// Dimension of the operational state space, `3(n − 1)`.
    pub operational: u64,
}

pub fn contextual_dimension_report(n: u64) -> Result<ContextualDimensionReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    Ok(ContextualDimensionReport {
        outcomes: n,
        contextual_gdit: 3 * (n * n - 1),
        gleason_conditions: 3 * (n - 1),
        nosignaling: 3 * n * (n - 1),
        operational: 3 * (n - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;

    #[test]
    fn os_has_sixty_four_configurations() {
        let s = fixtures::os_scenario();
        assert_eq!(s.configuration_count(), 64);
        let all: Vec<_> = enumerate_contextual_configurations(&s).unwrap().collect();
        assert_eq!(all.len(), 64);
        assert_eq!(all[0].outputs, [[0, 0], [0, 0], [0, 0]]);
        assert_eq!(all[63].outputs, [[1, 1], [1, 1], [1, 1]]);
        let set: BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), 64);
    }

    #[test]
    fn single_binary_context_has_two() {
        let s = Scenario::new(alloc::vec![Measurement::new("A", 2)], &[&["A"]]).unwrap();
        assert_eq!(enumerate_contextual_configurations(&s).unwrap().count(), 2);
    }

    #[test]
    fn xos_count_is_lazy() {
        let s = fixtures::xos_scenario();
        assert_eq!(s.configuration_count(), 27u128.pow(4));
        let mut it = enumerate_contextual_configurations(&s).unwrap();
        assert_eq!(it.next().unwrap().outputs, [[0, 0, 0]; 4]);
    }

    #[test]
    fn contextual_gdit_signals_and_box_does_not() {
        let s = fixtures::os_scenario();
        let q2a = fixtures::os_table()[1].1.to_behavior(&s).unwrap();
        let rep = gleason_nosignaling_check(&q2a);
        assert!(!rep.is_nonsignaling());
        assert_eq!(rep.compared, 3);
        let qa = fixtures::os_box_a();
        assert!(gleason_nosignaling_check(&qa).is_nonsignaling());
        let p = qa.marginal_point().unwrap();
        assert_eq!(crate::statics::point_uncertainty(&p), rat(1, 2));
    }

    #[test]
    fn bit_flip_partner_is_enforced() {
        let s = fixtures::os_scenario();
        let table = fixtures::os_table();
        let q1b = table[2].1.clone();
        let q2b = table[3].1.clone();
        assert!(matches!(
            contextual_box(&s, &[q1b.clone(), q2b], PartnerRule::BitFlip),
            Err(Error::PartnerMismatch(_))
        ));
        let flip = q1b.flipped(&s).unwrap();
        let b = contextual_box(&s, &[q1b, flip], PartnerRule::BitFlip).unwrap();
        assert!(gleason_nosignaling_check(&b).is_nonsignaling());
    }

    #[test]
    fn self_mixture_is_the_configuration() {
        let s = fixtures::os_scenario();
        let q = fixtures::os_table()[1].1.clone();
        let b = contextual_box(&s, &[q.clone(), q.clone()], PartnerRule::Listed).unwrap();
        assert_eq!(b, q.to_behavior(&s).unwrap());
        assert!(!gleason_nosignaling_check(&b).is_nonsignaling());
    }

    #[test]
    fn product_behavior_is_nonsignaling() {
        let s = fixtures::os_scenario();
        let b = assignment_behavior(&s, &[0, 1, 1]).unwrap();
        assert!(gleason_nosignaling_check(&b).is_nonsignaling());
    }

    #[test]
    fn dimension_reports() {
        let r = contextual_dimension_report(2).unwrap();
        assert_eq!(
            (r.contextual_gdit, r.gleason_conditions, r.nosignaling, r.operational),
            (9, 3, 6, 3)
        );
        let r = contextual_dimension_report(3).unwrap();
        assert_eq!(
            (r.contextual_gdit, r.gleason_conditions, r.nosignaling, r.operational),
            (24, 6, 18, 6)
        );
        for n in 2..8 {
            let r = contextual_dimension_report(n).unwrap();
            assert_eq!(r.nosignaling, n * r.operational);
        }
        assert!(contextual_dimension_report(1).is_err());
    }

    #[test]
    fn rejects_malformed_behaviors() {
        let s = fixtures::os_scenario();
        assert!(Behavior::new(s.clone(), alloc::vec![]).is_err());
        let half = alloc::vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert!(Behavior::new(s.clone(), alloc::vec![half.clone(), half.clone(), half]).is_err());
        assert!(Scenario::new(alloc::vec![Measurement::new("A", 2)], &[&["B"]]).is_err());
    }
}
