//! Joint measurability of measurement subsets over their associated state
//! space, decided exactly by linear feasibility.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{self, AffineDependency, ConstraintSystem, FarkasCertificate, Feasibility};
use crate::rational::Rational;
use crate::theory::Theory;
use crate::{outcome_tuples, tuple_index};

/// Variables `M(tuple | state)` with marginalization and dependency blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMeasurementSystem {
    pub measurements: Vec<String>,
    pub outcome_counts: Vec<usize>,
    /// Associated pure states, by name, in theory order.
    pub states: Vec<String>,
    pub tuples: Vec<Vec<usize>>,
    pub dependencies: Vec<AffineDependency>,
    pub system: ConstraintSystem,
    /// Number of leading equality rows that are marginalization constraints.
    pub marginal_rows: usize,
}

impl JointMeasurementSystem {
    pub fn variable(&self, state: usize, tuple: usize) -> usize {
        state * self.tuples.len() + tuple
    }

    pub fn variable_of(&self, state: &str, tuple: &[usize]) -> Option<usize> {
        let s = self.states.iter().position(|n| n == state)?;
        Some(self.variable(s, tuple_index(&self.outcome_counts, tuple)))
    }

    /// Marginalization and nonnegativity only, without dependency blocks.
    pub fn marginal_system(&self) -> ConstraintSystem {
        let mut cs = self.system.clone();
        cs.equalities.truncate(self.marginal_rows);
        cs
    }

    /// Values pinned by the marginals of each state alone.
    pub fn forced_values(&self) -> Result<Vec<ForcedValue>> {
        let base = self.marginal_system();
        let n = base.num_variables();
        let mut out = Vec::new();
        for v in 0..n {
            let mut obj = alloc::vec![Rational::zero(); n];
            obj[v] = Rational::one();
            let hi = base.maximize(&obj)?.value;
            let lo = base.minimize(&obj)?.value;
            if hi == lo {
                let s = v / self.tuples.len();
                let t = v % self.tuples.len();
                out.push(ForcedValue {
                    state: self.states[s].clone(),
                    tuple: self.tuples[t].clone(),
                    value: hi,
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedValue {
    pub state: String,
    pub tuple: Vec<usize>,
    pub value: Rational,
}

/// Joint probabilities per associated state, indexed like `tuples`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointWitness {
    pub tuples: Vec<Vec<usize>>,
    pub values: BTreeMap<String, Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comeasurability {
    Yes(JointWitness),
    No(FarkasCertificate),
}

impl Comeasurability {
    pub fn is_yes(&self) -> bool {
        matches!(self, Comeasurability::Yes(_))
    }
}

fn tuple_label(t: &[usize]) -> String {
    t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn build_joint_system(t: &Theory, subset: &[&str]) -> Result<JointMeasurementSystem> {
    t.ensure_valid()?;
    if subset.len() < 2 {
        return Err(Error::OutOfRange("a joint measurement needs at least two measurements".into()));
    }
    let idx = t.resolve_subset(subset)?;
    let states = t.associated_states(&idx)?;
    let counts: Vec<usize> = idx.iter().map(|&i| t.measurements[i].outcomes).collect();
    let tuples = outcome_tuples(&counts);
    let names: Vec<String> = states.iter().map(|&s| t.pure_states[s].name.clone()).collect();

    let mut cs = ConstraintSystem::new();
    for name in &names {
        for tup in &tuples {
            cs.add_variable(format!("M({}|{})", tuple_label(tup), name));
        }
    }
    let nt = tuples.len();
    for (sp, &s) in states.iter().enumerate() {
        let point = &t.pure_states[s].point;
        for (j, &mi) in idx.iter().enumerate() {
            for a in 0..counts[j] {
                let terms: Vec<(usize, Rational)> = tuples
                    .iter()
                    .enumerate()
                    .filter(|(_, tup)| tup[j] == a)
                    .map(|(k, _)| (sp * nt + k, Rational::one()))
                    .collect();
                cs.add_equality_terms(&terms, point.prob(mi, a).clone());
            }
        }
    }
    let marginal_rows = cs.equalities.len();
    for v in 0..cs.num_variables() {
        cs.add_nonnegative(v);
    }

    let dependencies = geometry::theory_conditions(t, Some(&states))?;
    for dep in &dependencies {
        for k in 0..nt {
            let mut terms = Vec::new();
            for (name, w) in dep.left.iter() {
                let sp = names.iter().position(|n| n == name).expect("dependency over associated states");
                terms.push((sp * nt + k, w.clone()));
            }
            for (name, w) in dep.right.iter() {
                let sp = names.iter().position(|n| n == name).expect("dependency over associated states");
                terms.push((sp * nt + k, -w));
            }
            cs.add_equality_terms(&terms, Rational::zero());
        }
    }

    Ok(JointMeasurementSystem {
        measurements: subset.iter().map(|s| s.to_string()).collect(),
        outcome_counts: counts,
        states: names,
        tuples,
        dependencies,
        system: cs,
        marginal_rows,
    })
}

pub fn decide(js: &JointMeasurementSystem) -> Result<Comeasurability> {
    Ok(match js.system.feasible()? {
        Feasibility::Feasible(x) => {
            let nt = js.tuples.len();
            let values = js
                .states
                .iter()
                .enumerate()
                .map(|(s, name)| (name.clone(), x[s * nt..(s + 1) * nt].to_vec()))
                .collect();
            Comeasurability::Yes(JointWitness {
                tuples: js.tuples.clone(),
                values,
            })
        }
        Feasibility::Infeasible(cert) => Comeasurability::No(cert),
    })
}

pub fn comeasurable(t: &Theory, subset: &[&str]) -> Result<Comeasurability> {
    decide(&build_joint_system(t, subset)?)
}

/// Checks a witness against every marginal of every associated state.
pub fn witness_reproduces_marginals(t: &Theory, js: &JointMeasurementSystem, w: &JointWitness) -> bool {
    let idx: Vec<usize> = match js.measurements.iter().map(|m| t.require_measurement(m)).collect() {
        Ok(v) => v,
        Err(_) => return false,
    };
    js.states.iter().all(|name| {
        let Ok(state) = t.state(name) else { return false };
        let Some(vals) = w.values.get(name) else { return false };
        if vals.iter().any(Rational::is_negative) {
            return false;
        }
        idx.iter().enumerate().all(|(j, &mi)| {
            (0..js.outcome_counts[j]).all(|a| {
                let s: Rational = w
                    .tuples
                    .iter()
                    .zip(vals)
                    .filter(|(tup, _)| tup[j] == a)
                    .map(|(_, v)| v.clone())
                    .sum();
                &s == state.point.prob(mi, a)
            })
        })
    })
}

/// Parameter counts for an m-measurement, n-outcome regular theory with
/// `nu` nonsimpliciality conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingReport {
    pub constraints: u64,
    pub variables: u64,
    pub overconstrained: bool,
    /// Largest pure-state count compatible with a joint measurement.
    pub threshold: Rational,
}

pub fn counting_report(m: u64, n: u64, nu: u64) -> Result<CountingReport> {
    if m < 1 || n < 2 || nu + 1 > m {
        return Err(Error::OutOfRange(format!(
            "need m >= 1, n >= 2, 0 <= nu <= m - 1; got m={m}, n={n}, nu={nu}"
        )));
    }
    let c = 2 * (n - 1) * m * n + (n * n - 1) * nu;
    let v = m * (n - 1) * (n + 1) * n;
    Ok(CountingReport {
        constraints: c,
        variables: v,
        overconstrained: c > v,
        threshold: Rational::new((n + 1) as i64, (n - 1) as i64),
    })
}
