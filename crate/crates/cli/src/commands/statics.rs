//! Uncertainty, the Chernoff trial bound and simulated tomography.

use serde_json::json;
use simplexity_core::contextuality::gleason_nosignaling_check;
use simplexity_core::sampling::frequencies;
use simplexity_core::statics::chernoff::exp_at_least;
use simplexity_core::statics::{
    chernoff_trials, point_uncertainty, polytope_uncertainty, simulate_clone_tomography,
    uncertainty as theory_value, uncertainty_lp, Delta, TomographyPlan,
};
use simplexity_core::Rational;

use super::{parse_rational, tuple_uncertainty, Ctx, Result};
use crate::format::{self, DocumentKind};
use crate::report::{point, rat, rats, Report};
use crate::CliError;

fn theory_uncertainty(ctx: &mut Ctx, path: &str, text: &str, polytope: bool) -> Result<Report> {
    let t = format::parse_theory(text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let u = theory_value(&t)?;
    let argmax: Vec<String> = t
        .pure_states
        .iter()
        .filter(|s| point_uncertainty(&s.point) == u)
        .map(|s| s.name.clone())
        .collect();
    let mut rep = Report::new("uncertainty");
    rep.summary(u.to_string());
    rep.value("uncertainty", rat(&u)).certificate("maximizing_states", argmax.clone());
    if polytope {
        let (v, p) = polytope_uncertainty(&t)?;
        rep.value("polytope_uncertainty", rat(&v)).certificate("polytope_maximizer", point(&p));
        ctx.check("polytope maximizer attains the value", || tuple_uncertainty(&p) == v);
    }
    ctx.check("linear program agrees", || uncertainty_lp(&t).map(|x| x == u).unwrap_or(false));
    ctx.check("maximizers attain the value by enumeration", || {
        argmax
            .iter()
            .all(|n| t.state(n).map(|s| tuple_uncertainty(&s.point) == u).unwrap_or(false))
    });
    Ok(rep)
}

pub fn uncertainty(ctx: &mut Ctx, path: &str, polytope: bool) -> Result<Report> {
    let text = ctx.read(path)?;
    match format::document_kind(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))? {
        DocumentKind::Theory => theory_uncertainty(ctx, path, &text, polytope),
        DocumentKind::Behavior => {
            let b = format::parse_behavior(&text)
                .and_then(|f| f.behavior())
                .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            let p = b.marginal_point()?;
            let u = point_uncertainty(&p);
            let mut rep = Report::new("uncertainty");
            rep.summary(u.to_string());
            rep.value("uncertainty", rat(&u)).certificate("marginals", point(&p));
            ctx.check("marginals are context independent", || gleason_nosignaling_check(&b).is_nonsignaling());
            ctx.check("value by enumeration", || tuple_uncertainty(&p) == u);
            Ok(rep)
        }
        DocumentKind::Graph => Err(CliError::Input(format!("{path}: expected a theory or behavior"))),
    }
}

fn parse_delta(s: &str) -> Result<Delta> {
    s.parse().map_err(|e| CliError::Input(format!("bad delta `{s}`: {e}")))
}

/// `2·exp(−ε²t/(3n)) <= δ`, decided exactly.
fn bound_holds(eps: &Rational, delta: &Delta, n: usize, t: u64) -> bool {
    let x = eps * eps * Rational::from(t) / Rational::from(3 * n as u64);
    match delta {
        Delta::TwoOverExp(k) => &x >= k,
        Delta::Exact(d) => exp_at_least(&x, &(Rational::from(2i64) / d)),
    }
}

pub fn chernoff(ctx: &mut Ctx, epsilon: &str, delta: &str, outcomes: usize) -> Result<Report> {
    let eps = parse_rational(epsilon, "epsilon")?;
    let d = parse_delta(delta)?;
    let t = chernoff_trials(&eps, &d, outcomes)?;
    let mut rep = Report::new("chernoff");
    rep.summary(t.to_string());
    rep.value("epsilon", rat(&eps))
        .value("delta", d.to_string())
        .value("outcomes", outcomes)
        .value("trials", t);
    ctx.check("bound holds at the trial count", || bound_holds(&eps, &d, outcomes, t));
    ctx.check("bound fails one trial earlier", || t == 0 || !bound_holds(&eps, &d, outcomes, t - 1));
    Ok(rep)
}

pub fn tomography_sim(
    ctx: &mut Ctx,
    path: &str,
    state: &str,
    trials: Option<u64>,
    seed: u64,
    epsilon: &str,
    delta: &str,
) -> Result<Report> {
    let t = ctx.theory(path)?;
    let eps = parse_rational(epsilon, "epsilon")?;
    let d = parse_delta(delta)?;
    let n = t.measurements.iter().map(|m| m.outcomes).max().unwrap_or(2);
    let mut plan = TomographyPlan::chernoff(eps.clone(), d, n)?;
    if let Some(k) = trials {
        plan.trials = k;
    }
    let run = simulate_clone_tomography(&t, state, &plan, seed)?;
    let mu = t.state(state)?.point.clone();
    let mut rep = Report::new("tomography-sim");
    rep.summary(if run.failed() { "failed" } else { "within tolerance" });
    rep.verdict("failed", run.failed())
        .value("state", state)
        .value("seed", seed)
        .value("trials", run.trials)
        .value("epsilon", rat(&eps))
        .value("estimated_point", point(&run.estimated_point()));
    let per: Vec<_> = run
        .estimates
        .iter()
        .map(|e| {
            json!({
                "measurement": e.measurement,
                "counts": e.counts,
                "frequencies": rats(&e.frequencies),
                "failed": e.failed,
                "max_relative_deviation": rat(&e.max_relative_deviation),
            })
        })
        .collect();
    rep.certificate("estimates", per);
    ctx.check("counts and frequencies", || {
        run.estimates
            .iter()
            .all(|e| e.counts.iter().sum::<u64>() == run.trials && e.frequencies == frequencies(&e.counts, run.trials))
    });
    ctx.check("failure flags", || {
        run.estimates.iter().enumerate().all(|(mi, e)| {
            let all_deviate = e
                .frequencies
                .iter()
                .zip(&mu.dists()[mi])
                .all(|(f, m)| (f - m).abs() >= &eps * m);
            all_deviate == e.failed
        })
    });
    ctx.check("same seed reproduces the run", || {
        simulate_clone_tomography(&t, state, &plan, seed).map(|r| r == run).unwrap_or(false)
    });
    Ok(rep)
}
