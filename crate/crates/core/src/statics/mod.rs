//! State-independent analyses: uncertainty, joint distinguishability,
//! disturbance consistency, and clone tomography.

pub mod chernoff;
pub mod disturbance;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::geometry::{self, ConstraintSystem};
use crate::outcome_tuples;
use crate::rational::Rational;
use crate::sampling::{self, ExactSampler};
use crate::theory::{Point, Theory};

pub use chernoff::{chernoff_trials, Delta};
pub use disturbance::{
    check_disturbance_consistency, collapse_rules, DisturbanceReport, DisturbanceRule,
    DisturbanceViolation,
};

/// `1 − max over outcome tuples of the average outcome probability`.
///
/// The maximum over tuples of an average separates into the average of the
/// per-measurement maxima.
pub fn point_uncertainty(p: &Point) -> Rational {
    let m = p.dists().len();
    let best: Rational = p
        .dists()
        .iter()
        .map(|d| d.iter().cloned().max().unwrap_or_default())
        .sum();
    Rational::one() - best / Rational::from(m)
}

fn require_two(t: &Theory) -> Result<()> {
    if t.measurements.len() < 2 {
        return Err(Error::OutOfRange(format!(
            "uncertainty needs at least two measurements, theory has {}",
            t.measurements.len()
        )));
    }
    Ok(())
}

/// Uncertainty maximized over pure states.
pub fn uncertainty(t: &Theory) -> Result<Rational> {
    t.ensure_valid()?;
    require_two(t)?;
    Ok(t
        .pure_states
        .iter()
        .map(|s| point_uncertainty(&s.point))
        .max()
        .unwrap_or_default())
}

/// Rows `u + avg(tuple) <= 1` for every outcome tuple, where the tuple
/// average is given as a linear form over the remaining variables.
fn tuple_rows(
    cs: &mut ConstraintSystem,
    u: usize,
    t: &Theory,
    avg: impl Fn(usize, usize) -> Vec<(usize, Rational)>,
) {
    let counts: Vec<usize> = t.measurements.iter().map(|m| m.outcomes).collect();
    let inv_m = Rational::new(1, t.measurements.len() as i64);
    for tup in outcome_tuples(&counts) {
        let mut terms = alloc::vec![(u, Rational::one())];
        for (j, &a) in tup.iter().enumerate() {
            for (var, c) in avg(j, a) {
                terms.push((var, c * &inv_m));
            }
        }
        cs.add_upper_bound_terms(&terms, Rational::one());
    }
}

/// Uncertainty of one pure state as the LP `max u` subject to
/// `u <= 1 − avg(tuple)` for all tuples.
pub fn vertex_uncertainty_lp(t: &Theory, state: &str) -> Result<Rational> {
    require_two(t)?;
    let p = t.state(state)?.point.clone();
    let mut cs = ConstraintSystem::with_variables(["u"]);
    let mut rhs_shift = Vec::new();
    let counts: Vec<usize> = t.measurements.iter().map(|m| m.outcomes).collect();
    let inv_m = Rational::new(1, t.measurements.len() as i64);
    for tup in outcome_tuples(&counts) {
        let avg: Rational = tup.iter().enumerate().map(|(j, &a)| p.prob(j, a).clone()).sum::<Rational>() * &inv_m;
        rhs_shift.push(avg);
    }
    for avg in rhs_shift {
        cs.add_upper_bound_terms(&[(0, Rational::one())], Rational::one() - avg);
    }
    Ok(cs.maximize(&[Rational::one()])?.value)
}

/// Vertex uncertainty with each vertex solved as an LP; agrees with
/// [`uncertainty`].
pub fn uncertainty_lp(t: &Theory) -> Result<Rational> {
    t.ensure_valid()?;
    require_two(t)?;
    let mut best = Rational::zero();
    for s in &t.pure_states {
        best = best.max(vertex_uncertainty_lp(t, &s.name)?);
    }
    Ok(best)
}

/// Uncertainty maximized over the whole convex hull, reported alongside the
/// vertex value.
pub fn polytope_uncertainty(t: &Theory) -> Result<(Rational, Point)> {
    t.ensure_valid()?;
    require_two(t)?;
    let k = t.pure_states.len();
    if k == 0 {
        return Err(Error::EmptyInput);
    }
    let mut cs = ConstraintSystem::with_variables(["u"]);
    for s in &t.pure_states {
        cs.add_variable(format!("w[{}]", s.name));
    }
    for i in 0..k {
        cs.add_nonnegative(i + 1);
    }
    let ones: Vec<(usize, Rational)> = (0..k).map(|i| (i + 1, Rational::one())).collect();
    cs.add_equality_terms(&ones, Rational::one());
    tuple_rows(&mut cs, 0, t, |j, a| {
        t.pure_states
            .iter()
            .enumerate()
            .map(|(i, s)| (i + 1, s.point.prob(j, a).clone()))
            .collect()
    });
    let mut obj = alloc::vec![Rational::zero(); k + 1];
    obj[0] = Rational::one();
    let opt = cs.maximize(&obj)?;
    let mut point = t.pure_states[0].point.zero_like();
    for (i, s) in t.pure_states.iter().enumerate() {
        point.add_scaled(&opt.argmax[i + 1], &s.point);
    }
    Ok((opt.value, point))
}

/// Theorem-level equivalent of joint measurability: the associated state
/// space is a simplex.
pub fn jointly_distinguishable(t: &Theory, subset: &[&str]) -> Result<bool> {
    t.ensure_valid()?;
    let idx = t.resolve_subset(subset)?;
    let states = t.associated_states(&idx)?;
    let pts: Vec<Vec<Rational>> = states.iter().map(|&s| t.pure_states[s].point.flatten()).collect();
    geometry::is_simplex(&pts)
}

/// `D + 1`, the most pure states that can be jointly distinguished.
pub fn measurement_dimension_bound(t: &Theory) -> usize {
    t.tomographic_dimension() + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TomographyPlan {
    pub epsilon: Rational,
    pub delta: Delta,
    pub outcomes: usize,
    pub trials: u64,
}

impl TomographyPlan {
    /// Plan with the trial count from [`chernoff_trials`].
    pub fn chernoff(epsilon: Rational, delta: Delta, outcomes: usize) -> Result<Self> {
        let trials = chernoff_trials(&epsilon, &delta, outcomes)?;
        Ok(TomographyPlan {
            epsilon,
            delta,
            outcomes,
            trials,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementEstimate {
    pub measurement: String,
    pub counts: Vec<u64>,
    pub frequencies: Vec<Rational>,
    /// Every component satisfies `|f_j − μ_j| >= ε μ_j`.
    pub failed: bool,
    /// Largest `|f_j − μ_j| / μ_j` over components with `μ_j > 0`.
    pub max_relative_deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TomographyRun {
    pub state: String,
    pub trials: u64,
    pub estimates: Vec<MeasurementEstimate>,
}

impl TomographyRun {
    pub fn failed(&self) -> bool {
        self.estimates.iter().any(|e| e.failed)
    }

    pub fn estimated_point(&self) -> Point {
        Point(self.estimates.iter().map(|e| e.frequencies.clone()).collect())
    }
}

/// Measures `plan.trials` clones of `state` under every fiducial measurement.
pub fn simulate_clone_tomography(
    t: &Theory,
    state: &str,
    plan: &TomographyPlan,
    seed: u64,
) -> Result<TomographyRun> {
    if plan.trials == 0 {
        return Err(Error::OutOfRange("tomography needs at least one trial".into()));
    }
    let s = t.state(state)?;
    let mut rng = sampling::rng(seed, 0);
    let mut estimates = Vec::with_capacity(t.measurements.len());
    for (mi, m) in t.measurements.iter().enumerate() {
        let mu = &s.point.dists()[mi];
        let sampler = ExactSampler::new(mu)?;
        let mut counts = alloc::vec![0u64; m.outcomes];
        for _ in 0..plan.trials {
            counts[sampler.sample(&mut rng)] += 1;
        }
        estimates.push(estimate(&m.name, counts, mu, plan));
    }
    Ok(TomographyRun {
        state: state.into(),
        trials: plan.trials,
        estimates,
    })
}

fn estimate(name: &str, counts: Vec<u64>, mu: &[Rational], plan: &TomographyPlan) -> MeasurementEstimate {
    let frequencies = sampling::frequencies(&counts, plan.trials);
    let mut failed = true;
    let mut worst = Rational::zero();
    for (f, m) in frequencies.iter().zip(mu) {
        let dev = (f - m).abs();
        if dev < &plan.epsilon * m {
            failed = false;
        }
        if m.is_positive() {
            worst = worst.max(&dev / m);
        }
    }
    MeasurementEstimate {
        measurement: name.into(),
        counts,
        frequencies,
        failed,
        max_relative_deviation: worst,
    }
}
