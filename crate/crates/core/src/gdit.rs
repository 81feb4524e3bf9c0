//! Gdit theories: every deterministic value tuple is a pure state. Their
//! disturbance rules determine a corresponding regular theory whose
//! statistics they reproduce.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::sampling::{self, ExactSampler};
use crate::statics::disturbance::{check_disturbance_consistency, DisturbanceRule};
use crate::theory::{Eigenstate, Measurement, Mixture, PureState, Theory};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GditTheory {
    pub m: usize,
    pub n: usize,
    /// Pure states `g0 .. g{n^m - 1}`; vertex `i` has `x_j = (i / n^j) mod n`.
    pub theory: Theory,
}

/// Conventional measurement names: `X`; `X, Z`; `X, Y, Z`; then `X1 .. Xm`.
pub fn measurement_names(m: usize) -> Vec<String> {
    match m {
        1 => alloc::vec!["X".into()],
        2 => alloc::vec!["X".into(), "Z".into()],
        3 => alloc::vec!["X".into(), "Y".into(), "Z".into()],
        _ => (1..=m).map(|i| format!("X{i}")).collect(),
    }
}

/// Name of the regular state with certain outcome `a` of measurement `name`.
pub fn eigen_name(name: &str, n: usize, a: usize) -> String {
    if n == 2 {
        format!("{name}{}", if a == 0 { '+' } else { '-' })
    } else {
        format!("{name}={a}")
    }
}

impl GditTheory {
    pub fn vertex_count(&self) -> usize {
        self.theory.pure_states.len()
    }

    pub fn coords(&self, vertex: usize) -> Vec<usize> {
        let mut v = vertex;
        (0..self.m)
            .map(|_| {
                let x = v % self.n;
                v /= self.n;
                x
            })
            .collect()
    }

    pub fn vertex_name(&self, vertex: usize) -> &str {
        &self.theory.pure_states[vertex].name
    }

    /// Vertices with `x_i = a`, in index order.
    pub fn sharing(&self, i: usize, a: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.coords(v)[i] == a).collect()
    }
}

pub fn build_gdit(m: usize, n: usize) -> Result<GditTheory> {
    if m < 1 || n < 2 {
        return Err(Error::OutOfRange(format!("gdit needs m >= 1 and n >= 2, got m={m}, n={n}")));
    }
    let count = n
        .checked_pow(m as u32)
        .filter(|&c| c <= 1 << 16)
        .ok_or(Error::SizeGuard {
            count: (n as u128).saturating_pow(m as u32),
            limit: 1 << 16,
        })?;
    let names = measurement_names(m);
    let measurements: Vec<Measurement> = names.iter().map(|s| Measurement::new(s.clone(), n)).collect();
    let mut states = Vec::with_capacity(count);
    for i in 0..count {
        let mut v = i;
        let dists = (0..m)
            .map(|_| {
                let x = v % n;
                v /= n;
                (0..n).map(|k| Rational::from(u32::from(k == x))).collect()
            })
            .collect();
        states.push(PureState::new(format!("g{i}"), dists));
    }
    Ok(GditTheory {
        m,
        n,
        theory: Theory::new(measurements, states, Vec::new()),
    })
}

/// Measuring `X_i` keeps `x_i` and draws every other coordinate uniformly.
pub fn symmetric_disturbance(g: &GditTheory) -> Vec<DisturbanceRule> {
    let w = rat(1, (g.vertex_count() / g.n) as i64);
    let weights: Vec<Vec<Vec<Rational>>> = (0..g.m)
        .map(|_| (0..g.n).map(|_| alloc::vec![w.clone(); g.vertex_count() / g.n]).collect())
        .collect();
    asymmetric_disturbance(g, &weights).expect("uniform weights are well formed")
}

/// `weights[i][a]` is the post-measurement distribution over the vertices
/// sharing `x_i = a`, listed in index order.
pub fn asymmetric_disturbance(g: &GditTheory, weights: &[Vec<Vec<Rational>>]) -> Result<Vec<DisturbanceRule>> {
    if weights.len() != g.m {
        return Err(Error::DimensionMismatch {
            expected: g.m,
            found: weights.len(),
        });
    }
    let mut rules = Vec::with_capacity(g.m);
    for (i, per_outcome) in weights.iter().enumerate() {
        if per_outcome.len() != g.n {
            return Err(Error::DimensionMismatch {
                expected: g.n,
                found: per_outcome.len(),
            });
        }
        let mut rule = DisturbanceRule::new(g.theory.measurements[i].name.clone());
        for (a, w) in per_outcome.iter().enumerate() {
            let share = g.sharing(i, a);
            if w.len() != share.len() {
                return Err(Error::DimensionMismatch {
                    expected: share.len(),
                    found: w.len(),
                });
            }
            let image = Mixture::new(share.iter().map(|&v| String::from(g.vertex_name(v))).zip(w.iter().cloned()));
            image.check()?;
            for &v in &share {
                rule.set(g.vertex_name(v), Some(a), image.clone());
            }
        }
        rules.push(rule);
    }
    Ok(rules)
}

/// One pure state per (measurement, value): the common post-measurement
/// mixture of the vertices carrying that value.
pub fn corresponding_regular_theory(g: &GditTheory, rules: &[DisturbanceRule]) -> Result<Theory> {
    let report = check_disturbance_consistency(&g.theory, rules)?;
    if !report.is_consistent() {
        return Err(Error::InconsistentRules(format!(
            "{} violation(s) of the gdit conditions",
            report.violations.len()
        )));
    }
    let mut states = Vec::new();
    let mut eigen = Vec::new();
    for (i, m) in g.theory.measurements.iter().enumerate() {
        let rule = rules
            .iter()
            .find(|r| r.measurement == m.name)
            .ok_or_else(|| Error::IncompleteRules {
                measurement: m.name.clone(),
                state: g.vertex_name(0).into(),
            })?;
        for a in 0..g.n {
            let share = g.sharing(i, a);
            let image = rule.image(g.vertex_name(share[0]), a).cloned().ok_or_else(|| Error::IncompleteRules {
                measurement: m.name.clone(),
                state: g.vertex_name(share[0]).into(),
            })?;
            for &v in &share[1..] {
                if rule.image(g.vertex_name(v), a) != Some(&image) {
                    return Err(Error::InconsistentRules(format!(
                        "`{}` outcome {a} sends `{}` and `{}` to different mixtures",
                        m.name,
                        g.vertex_name(share[0]),
                        g.vertex_name(v)
                    )));
                }
            }
            let point = g.theory.mix(&image)?;
            if !point.prob(i, a).is_one() {
                return Err(Error::InconsistentRules(format!(
                    "`{}` outcome {a} is not repeatable under its rule",
                    m.name
                )));
            }
            let name = eigen_name(&m.name, g.n, a);
            eigen.push(Eigenstate {
                measurement: m.name.clone(),
                outcome: a,
                state: name.clone(),
            });
            states.push(PureState {
                name,
                point,
            });
        }
    }
    Theory::checked(g.theory.measurements.clone(), states, eigen)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub gdit: GditTheory,
    pub rules: Vec<DisturbanceRule>,
    pub regular: Theory,
}

pub fn correspond(gdit: GditTheory, rules: Vec<DisturbanceRule>) -> Result<Correspondence> {
    let regular = corresponding_regular_theory(&gdit, &rules)?;
    Ok(Correspondence { gdit, rules, regular })
}

/// Outcome statistics of the two-step protocol in both theories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndistinguishabilityTrial {
    pub prepare: (String, usize),
    pub measure: String,
    pub trials: u64,
    pub gdit_counts: Vec<u64>,
    /// Gdit preparations drawn, including post-selected rejects.
    pub gdit_draws: u64,
    pub regular_counts: Vec<u64>,
    pub gdit_distribution: Vec<Rational>,
    pub regular_distribution: Vec<Rational>,
    pub total_variation: Rational,
}

/// Gdit side: a uniformly random vertex is measured with `prepare.0`, kept
/// only if the outcome is `prepare.1`, disturbed by the rule, then measured
/// with `then_measure`. Regular side: the eigenstate of `prepare` measured
/// directly.
pub fn indistinguishability_trial(
    c: &Correspondence,
    prepare: (&str, usize),
    then_measure: &str,
    trials: u64,
    seed: u64,
) -> Result<IndistinguishabilityTrial> {
    let g = &c.gdit;
    let pi = g.theory.require_measurement(prepare.0)?;
    let mi = g.theory.require_measurement(then_measure)?;
    if prepare.1 >= g.n {
        return Err(Error::OutcomeOutOfRange {
            measurement: prepare.0.into(),
            outcome: prepare.1,
        });
    }
    if trials == 0 {
        return Err(Error::OutOfRange("indistinguishability trial needs at least one run".into()));
    }
    let rule = c
        .rules
        .iter()
        .find(|r| r.measurement == prepare.0)
        .ok_or_else(|| Error::IncompleteRules {
            measurement: prepare.0.into(),
            state: g.vertex_name(0).into(),
        })?;

    // Post-measurement samplers for every accepted vertex.
    let mut images: Vec<Option<(Vec<usize>, ExactSampler)>> = alloc::vec![None; g.vertex_count()];
    for v in g.sharing(pi, prepare.1) {
        let img = rule.image(g.vertex_name(v), prepare.1).ok_or_else(|| Error::IncompleteRules {
            measurement: prepare.0.into(),
            state: g.vertex_name(v).into(),
        })?;
        let mut support = Vec::new();
        let mut weights = Vec::new();
        for (name, w) in img.iter() {
            support.push(g.theory.state_index(name).ok_or_else(|| Error::UnknownState(name.clone()))?);
            weights.push(w.clone());
        }
        images[v] = Some((support, ExactSampler::new(&weights)?));
    }

    let mut rng = sampling::rng(seed, 0);
    let mut gdit_counts = alloc::vec![0u64; g.n];
    let mut draws = 0u64;
    let mut accepted = 0u64;
    let uniform = rand::distr::Uniform::new(0, g.vertex_count()).map_err(|_| Error::EmptyInput)?;
    while accepted < trials {
        use rand::Rng;
        let v = rng.sample(uniform);
        draws += 1;
        let Some((support, sampler)) = &images[v] else { continue };
        let after = support[sampler.sample(&mut rng)];
        gdit_counts[g.coords(after)[mi]] += 1;
        accepted += 1;
    }

    let state = c
        .regular
        .eigenstate(prepare.0, prepare.1)
        .ok_or_else(|| Error::NotRegular {
            measurement: prepare.0.into(),
            outcome: prepare.1,
        })?;
    let dist = &c.regular.state(state)?.point.dists()[mi];
    let sampler = ExactSampler::new(dist)?;
    let mut rng = sampling::rng(seed, 1);
    let mut regular_counts = alloc::vec![0u64; g.n];
    for _ in 0..trials {
        regular_counts[sampler.sample(&mut rng)] += 1;
    }

    let gdit_distribution = sampling::frequencies(&gdit_counts, trials);
    let regular_distribution = sampling::frequencies(&regular_counts, trials);
    let total_variation = sampling::total_variation(&gdit_distribution, &regular_distribution);
    Ok(IndistinguishabilityTrial {
        prepare: (prepare.0.into(), prepare.1),
        measure: then_measure.into(),
        trials,
        gdit_counts,
        gdit_draws: draws,
        regular_counts,
        gdit_distribution,
        regular_distribution,
        total_variation,
    })
}
