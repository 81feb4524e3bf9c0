//! Discrete operational theories: fiducial measurements, pure states given as
//! tuples of outcome distributions, and exact mixtures of pure states.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Measurement {
    pub name: String,
    pub outcomes: usize,
}

impl Measurement {
    pub fn new(name: impl Into<String>, outcomes: usize) -> Self {
        Measurement {
            name: name.into(),
            outcomes,
        }
    }
}

/// A point of the state space: one probability vector per fiducial measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Vec<Rational>>);

impl Point {
    pub fn flatten(&self) -> Vec<Rational> {
        self.0.iter().flatten().cloned().collect()
    }

    pub fn dists(&self) -> &[Vec<Rational>] {
        &self.0
    }

    pub fn prob(&self, measurement: usize, outcome: usize) -> &Rational {
        &self.0[measurement][outcome]
    }

    /// Same shape, all entries zero.
    pub fn zero_like(&self) -> Point {
        Point(
            self.0
                .iter()
                .map(|d| alloc::vec![Rational::zero(); d.len()])
                .collect(),
        )
    }

    pub fn add_scaled(&mut self, weight: &Rational, other: &Point) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += weight * y;
            }
        }
    }

    pub fn scaled(&self, weight: &Rational) -> Point {
        Point(
            self.0
                .iter()
                .map(|d| d.iter().map(|p| p * weight).collect())
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            for (j, p) in d.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureState {
    pub name: String,
    pub point: Point,
}

impl PureState {
    pub fn new(name: impl Into<String>, dists: Vec<Vec<Rational>>) -> Self {
        PureState {
            name: name.into(),
            point: Point(dists),
        }
    }
}

/// Entry of the eigenstate map: `state` returns `outcome` of `measurement` with certainty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Eigenstate {
    pub measurement: String,
    pub outcome: usize,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub measurements: Vec<Measurement>,
    pub pure_states: Vec<PureState>,
    pub eigenstates: Vec<Eigenstate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewOutcomes { measurement: String, outcomes: usize },
    DuplicateMeasurement(String),
    DuplicateState(String),
    WrongDistributionCount { state: String, expected: usize, found: usize },
    WrongDistributionLength { state: String, measurement: String, expected: usize, found: usize },
    NegativeProbability { state: String, measurement: String, outcome: usize, value: Rational },
    NotNormalized { state: String, measurement: String, sum: Rational },
    UnknownEigenMeasurement(String),
    UnknownEigenState(String),
    EigenOutcomeOutOfRange { measurement: String, outcome: usize },
    DuplicateEigenEntry { measurement: String, outcome: usize },
    NotAnEigenstate { measurement: String, outcome: usize, state: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            TooFewOutcomes { measurement, outcomes } => {
                write!(f, "measurement `{measurement}` has {outcomes} outcomes, need at least 2")
            }
            DuplicateMeasurement(m) => write!(f, "duplicate measurement name `{m}`"),
            DuplicateState(s) => write!(f, "duplicate pure state name `{s}`"),
            WrongDistributionCount { state, expected, found } => write!(
                f,
                "state `{state}` has {found} distributions, expected {expected}"
            ),
            WrongDistributionLength { state, measurement, expected, found } => write!(
                f,
                "state `{state}`: distribution for `{measurement}` has length {found}, expected {expected}"
            ),
            NegativeProbability { state, measurement, outcome, value } => write!(
                f,
                "state `{state}`: negative probability {value} for outcome {outcome} of `{measurement}`"
            ),
            NotNormalized { state, measurement, sum } => write!(
                f,
                "state `{state}`: distribution for `{measurement}` sums to {sum}"
            ),
            UnknownEigenMeasurement(m) => write!(f, "eigenstate entry names unknown measurement `{m}`"),
            UnknownEigenState(s) => write!(f, "eigenstate entry names unknown state `{s}`"),
            EigenOutcomeOutOfRange { measurement, outcome } => write!(
                f,
                "eigenstate entry outcome {outcome} out of range for `{measurement}`"
            ),
            DuplicateEigenEntry { measurement, outcome } => write!(
                f,
                "duplicate eigenstate entry for `{measurement}` outcome {outcome}"
            ),
            NotAnEigenstate { measurement, outcome, state } => write!(
                f,
                "state `{state}` is not an eigenstate of `{measurement}` with outcome {outcome}"
            ),
        }
    }
}

/// Every invariant violation found in a theory; empty iff the theory is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Theory {
    pub fn new(
        measurements: Vec<Measurement>,
        pure_states: Vec<PureState>,
        eigenstates: Vec<Eigenstate>,
    ) -> Self {
        Theory {
            measurements,
            pure_states,
            eigenstates,
        }
    }

    /// Builds the theory and rejects it unless it validates cleanly.
    pub fn checked(
        measurements: Vec<Measurement>,
        pure_states: Vec<PureState>,
        eigenstates: Vec<Eigenstate>,
    ) -> Result<Self> {
        let t = Theory::new(measurements, pure_states, eigenstates);
        t.ensure_valid()?;
        Ok(t)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTheory(v.to_string())),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = BTreeSet::new();
        for m in &self.measurements {
            if m.outcomes < 2 {
                violations.push(Violation::TooFewOutcomes {
                    measurement: m.name.clone(),
                    outcomes: m.outcomes,
                });
            }
            if !seen.insert(m.name.as_str()) {
                violations.push(Violation::DuplicateMeasurement(m.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &self.pure_states {
            if !seen.insert(s.name.as_str()) {
                violations.push(Violation::DuplicateState(s.name.clone()));
            }
            let dists = s.point.dists();
            if dists.len() != self.measurements.len() {
                violations.push(Violation::WrongDistributionCount {
                    state: s.name.clone(),
                    expected: self.measurements.len(),
                    found: dists.len(),
                });
                continue;
            }
            for (m, d) in self.measurements.iter().zip(dists) {
                if d.len() != m.outcomes {
                    violations.push(Violation::WrongDistributionLength {
                        state: s.name.clone(),
                        measurement: m.name.clone(),
                        expected: m.outcomes,
                        found: d.len(),
                    });
                    continue;
                }
                for (k, p) in d.iter().enumerate() {
                    if p.is_negative() {
                        violations.push(Violation::NegativeProbability {
                            state: s.name.clone(),
                            measurement: m.name.clone(),
                            outcome: k,
                            value: p.clone(),
                        });
                    }
                }
                let sum: Rational = d.iter().sum();
                if !sum.is_one() {
                    violations.push(Violation::NotNormalized {
                        state: s.name.clone(),
                        measurement: m.name.clone(),
                        sum,
                    });
                }
            }
        }
        let mut seen = BTreeSet::new();
        for e in &self.eigenstates {
            let Some(mi) = self.measurement_index(&e.measurement) else {
                violations.push(Violation::UnknownEigenMeasurement(e.measurement.clone()));
                continue;
            };
            if e.outcome >= self.measurements[mi].outcomes {
                violations.push(Violation::EigenOutcomeOutOfRange {
                    measurement: e.measurement.clone(),
                    outcome: e.outcome,
                });
                continue;
            }
            if !seen.insert((mi, e.outcome)) {
                violations.push(Violation::DuplicateEigenEntry {
                    measurement: e.measurement.clone(),
                    outcome: e.outcome,
                });
            }
            let Some(si) = self.state_index(&e.state) else {
                violations.push(Violation::UnknownEigenState(e.state.clone()));
                continue;
            };
            let ok = self.pure_states[si]
                .point
                .dists()
                .get(mi)
                .and_then(|d| d.get(e.outcome))
                .is_some_and(|p| p.is_one());
            if !ok {
                violations.push(Violation::NotAnEigenstate {
                    measurement: e.measurement.clone(),
                    outcome: e.outcome,
                    state: e.state.clone(),
                });
            }
        }
        ValidationReport { violations }
    }

    pub fn measurement_index(&self, name: &str) -> Option<usize> {
        self.measurements.iter().position(|m| m.name == name)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.pure_states.iter().position(|s| s.name == name)
    }

    pub fn state(&self, name: &str) -> Result<&PureState> {
        self.state_index(name)
            .map(|i| &self.pure_states[i])
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn require_measurement(&self, name: &str) -> Result<usize> {
        self.measurement_index(name)
            .ok_or_else(|| Error::UnknownMeasurement(name.to_string()))
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.pure_states.iter().map(|s| s.point.flatten()).collect()
    }

    pub fn state_names(&self) -> Vec<String> {
        self.pure_states.iter().map(|s| s.name.clone()).collect()
    }

    /// Sum over measurements of (outcomes - 1).
    pub fn tomographic_dimension(&self) -> usize {
        self.measurements.iter().map(|m| m.outcomes - 1).sum()
    }

    /// The common outcome count, for formulas stated for uniform `n`.
    pub fn uniform_outcomes(&self) -> Result<usize> {
        let first = self.measurements.first().ok_or(Error::EmptyInput)?.outcomes;
        if self.measurements.iter().all(|m| m.outcomes == first) {
            Ok(first)
        } else {
            Err(Error::HeterogeneousOutcomes)
        }
    }

    /// True iff the eigenstate map covers every (measurement, outcome) pair.
    pub fn is_regular(&self) -> bool {
        let covered: BTreeSet<(&str, usize)> = self
            .eigenstates
            .iter()
            .map(|e| (e.measurement.as_str(), e.outcome))
            .collect();
        self.measurements
            .iter()
            .all(|m| (0..m.outcomes).all(|k| covered.contains(&(m.name.as_str(), k))))
    }

    /// Mapped eigenstate for (measurement, outcome), if any.
    pub fn eigenstate(&self, measurement: &str, outcome: usize) -> Option<&str> {
        self.eigenstates
            .iter()
            .find(|e| e.measurement == measurement && e.outcome == outcome)
            .map(|e| e.state.as_str())
    }

    /// Indices of all pure states that return `outcome` of measurement `mi` with certainty.
    pub fn certain_states(&self, mi: usize, outcome: usize) -> Vec<usize> {
        self.pure_states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.point.prob(mi, outcome).is_one())
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of the pure states spanning the associated state space of a
    /// measurement subset: every pure state that is an eigenstate of some
    /// measurement in the subset. Fails if an outcome has no eigenstate.
    pub fn associated_states(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut out = BTreeSet::new();
        for &mi in subset {
            let m = &self.measurements[mi];
            for k in 0..m.outcomes {
                let states = self.certain_states(mi, k);
                if states.is_empty() {
                    return Err(Error::NotRegular {
                        measurement: m.name.clone(),
                        outcome: k,
                    });
                }
                out.extend(states);
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn resolve_subset(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let i = self.require_measurement(n)?;
            if out.contains(&i) {
                return Err(Error::OutOfRange(format!("measurement `{n}` listed twice")));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Exact convex combination of pure states.
    pub fn mix(&self, mixture: &Mixture) -> Result<Point> {
        mixture.check()?;
        let mut acc: Option<Point> = None;
        for (name, w) in mixture.iter() {
            let s = self.state(name)?;
            match acc.as_mut() {
                None => acc = Some(s.point.scaled(w)),
                Some(p) => p.add_scaled(w, &s.point),
            }
        }
        acc.ok_or(Error::EmptyInput)
    }
}

/// Convex weights over named pure states. Zero weights are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mixture {
    weights: BTreeMap<String, Rational>,
}

impl Mixture {
    pub fn new<I, S>(weights: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut m = Mixture::default();
        for (s, w) in weights {
            m.add(s, w);
        }
        m
    }

    pub fn pure(name: impl Into<String>) -> Self {
        Mixture::new([(name.into(), Rational::one())])
    }

    pub fn uniform<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let w = Rational::new(1, names.len().max(1) as i64);
        Mixture::new(names.into_iter().map(|n| (n, w.clone())))
    }

    /// Adds weight to a state, accumulating duplicates.
    pub fn add(&mut self, name: impl Into<String>, weight: Rational) {
        let name = name.into();
        let entry = self.weights.entry(name.clone()).or_default();
        *entry += weight;
        if entry.is_zero() {
            self.weights.remove(&name);
        }
    }

    pub fn weight(&self, name: &str) -> Rational {
        self.weights.get(name).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Nonnegative weights summing to exactly one.
    pub fn check(&self) -> Result<()> {
        for (s, w) in &self.weights {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    state: s.clone(),
                    weight: w.clone(),
                });
            }
        }
        let total = self.total();
        if !total.is_one() {
            return Err(Error::WeightsNotNormalized(total));
        }
        Ok(())
    }

    /// `alpha * a + (1 - alpha) * b`.
    pub fn combine(alpha: &Rational, a: &Mixture, b: &Mixture) -> Mixture {
        let beta = Rational::one() - alpha;
        let mut m = Mixture::default();
        for (s, w) in a.iter() {
            m.add(s.clone(), alpha * w);
        }
        for (s, w) in b.iter() {
            m.add(s.clone(), &beta * w);
        }
        m
    }

    pub fn scaled(&self, factor: &Rational) -> Mixture {
        Mixture::new(self.iter().map(|(s, w)| (s.clone(), w * factor)))
    }
}

impl fmt::Display for Mixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, w)) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{w}·{s}")?;
        }
        Ok(())
    }
}

impl FromIterator<(String, Rational)> for Mixture {
    fn from_iter<I: IntoIterator<Item = (String, Rational)>>(iter: I) -> Self {
        Mixture::new(iter)
    }
}
