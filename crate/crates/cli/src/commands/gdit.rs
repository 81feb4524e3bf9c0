//! Gdit theories, their regular correspondents and the sampled protocol.

use std::fs;

use serde_json::{json, Map, Value};
use simplexity_core::gdit::{
    asymmetric_disturbance, build_gdit, correspond as build_correspondence, indistinguishability_trial,
    symmetric_disturbance, GditTheory,
};
use simplexity_core::geometry::{self, theory_conditions};
use simplexity_core::sampling::{frequencies, total_variation};
use simplexity_core::statics::{check_disturbance_consistency, DisturbanceRule};
use simplexity_core::{fixtures, Mixture, Rational};

use super::{parse_rational, tuple_uncertainty, Ctx, Result};
use crate::format::{self, DisturbanceFile};
use crate::report::{mixture, point, rat, rats, Report};
use crate::{CliError, GditArgs};

fn load(ctx: &mut Ctx, args: &GditArgs) -> Result<(GditTheory, Vec<DisturbanceRule>)> {
    let g = build_gdit(args.inputs, args.outputs)?;
    let rules = match args.disturbance.as_str() {
        "symmetric" => symmetric_disturbance(&g),
        "asymmetric" => {
            if (g.m, g.n) != (2, 2) {
                return Err(CliError::Input("the built-in asymmetric rule needs --inputs 2 --outputs 2".into()));
            }
            fixtures::asymmetric_rules(&g)?
        }
        path => {
            let text = ctx.read(path)?;
            match format::parse_disturbance(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))? {
                DisturbanceFile::Rules(r) => r,
                DisturbanceFile::Weights(w) => asymmetric_disturbance(&g, &w)?,
            }
        }
    };
    Ok((g, rules))
}

fn rules_json(rules: &[DisturbanceRule]) -> Value {
    let mut out = Map::new();
    for r in rules {
        let images: Map<String, Value> = r
            .images
            .iter()
            .map(|((s, o), m)| {
                let key = match o {
                    Some(a) => format!("{s} -> {a}"),
                    None => s.clone(),
                };
                (key, mixture(m))
            })
            .collect();
        out.insert(r.measurement.clone(), Value::Object(images));
    }
    Value::Object(out)
}

pub fn describe(ctx: &mut Ctx, args: &GditArgs) -> Result<Report> {
    let (g, rules) = load(ctx, args)?;
    let t = &g.theory;
    let pts = t.points();
    let simplex = geometry::is_simplex(&pts)?;
    let deps = theory_conditions(t, None)?.len();
    let consistent = check_disturbance_consistency(t, &rules)?;
    let u = simplexity_core::statics::uncertainty(t)?;
    let mut rep = Report::new("gdit");
    rep.summary(format!("{} vertices, dimension {}", g.vertex_count(), t.tomographic_dimension()));
    rep.verdict("simplex", simplex)
        .verdict("rules_consistent", consistent.is_consistent())
        .value("measurements", t.measurements.iter().map(|m| m.name.clone()).collect::<Vec<_>>())
        .value("outcomes", g.n)
        .value("vertices", g.vertex_count())
        .value("tomographic_dimension", t.tomographic_dimension())
        .value("nonsimpliciality_conditions", deps)
        .value("uncertainty", rat(&u));
    let coords: Map<String, Value> = (0..g.vertex_count())
        .map(|v| (g.vertex_name(v).to_string(), json!(g.coords(v))))
        .collect();
    rep.value("coordinates", Value::Object(coords)).certificate("rules", rules_json(&rules));
    let count = g.vertex_count();
    let dim = g.m * (g.n - 1);
    ctx.check("condition count is n^m - m(n-1) - 1", || deps + dim + 1 == count);
    ctx.check("every vertex is certain", || {
        t.pure_states.iter().all(|s| tuple_uncertainty(&s.point).is_zero())
    });
    ctx.check("simplex only for one measurement", || simplex == (g.m == 1));
    Ok(rep)
}

/// Regular state for `(i, a)` recomputed from the vertices sharing `x_i = a`.
fn expected_state(g: &GditTheory, rule: &DisturbanceRule, i: usize, a: usize) -> Option<simplexity_core::Point> {
    let share = g.sharing(i, a);
    let w = Rational::new(1, share.len() as i64);
    let mut acc = Mixture::default();
    for &v in &share {
        for (s, x) in rule.image(g.vertex_name(v), a)?.iter() {
            acc.add(s.clone(), &w * x);
        }
    }
    g.theory.mix(&acc).ok()
}

pub fn correspond(ctx: &mut Ctx, args: &GditArgs, output: Option<&str>) -> Result<Report> {
    let (g, rules) = load(ctx, args)?;
    let c = build_correspondence(g, rules)?;
    let r = &c.regular;
    let mut rep = Report::new("correspond");
    let u = simplexity_core::statics::uncertainty(r)?;
    rep.summary(format!("{} regular states, uncertainty {u}", r.pure_states.len()));
    rep.verdict("regular", r.is_regular()).value("uncertainty", rat(&u));
    let states: Map<String, Value> = r.pure_states.iter().map(|s| (s.name.clone(), point(&s.point))).collect();
    rep.value("states", Value::Object(states));
    let eigen: Vec<String> = r
        .eigenstates
        .iter()
        .map(|e| format!("{}={} -> {}", e.measurement, e.outcome, e.state))
        .collect();
    rep.value("eigenstates", eigen).certificate("rules", rules_json(&c.rules));
    if let Some(out) = output {
        fs::write(out, format::serialize_theory(r)).map_err(|e| CliError::Input(format!("cannot write {out}: {e}")))?;
        rep.value("written", out);
    }
    ctx.check("regular states are the averaged rule images", || {
        r.eigenstates.iter().all(|e| {
            let Some(i) = c.gdit.theory.measurement_index(&e.measurement) else { return false };
            let Some(rule) = c.rules.iter().find(|x| x.measurement == e.measurement) else { return false };
            let Ok(state) = r.state(&e.state) else { return false };
            expected_state(&c.gdit, rule, i, e.outcome).as_ref() == Some(&state.point)
                && state.point.prob(i, e.outcome).is_one()
        })
    });
    ctx.check("regular theory validates", || r.validate().is_valid() && r.is_regular());
    Ok(rep)
}

fn parse_prepare(s: &str) -> Result<(String, usize)> {
    let (m, a) = s
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("--prepare expects MEASUREMENT=OUTCOME, got `{s}`")))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("bad outcome in `{s}`")))?;
    Ok((m.trim().to_string(), a))
}

#[allow(clippy::too_many_arguments)]
pub fn indistinguishability(
    ctx: &mut Ctx,
    args: &GditArgs,
    prepare: &str,
    measure: &str,
    trials: u64,
    seed: u64,
    tolerance: &str,
) -> Result<Report> {
    let (g, rules) = load(ctx, args)?;
    let tol = parse_rational(tolerance, "tolerance")?;
    let (pm, pa) = parse_prepare(prepare)?;
    let c = build_correspondence(g, rules)?;
    let res = indistinguishability_trial(&c, (&pm, pa), measure, trials, seed)?;
    let within = res.total_variation <= tol;
    let mut rep = Report::new("indistinguishability-sim");
    rep.summary(format!("total variation {}", res.total_variation));
    rep.verdict("within_tolerance", within)
        .value("prepare", format!("{pm}={pa}"))
        .value("measure", measure)
        .value("trials", trials)
        .value("seed", seed)
        .value("tolerance", rat(&tol))
        .value("gdit_distribution", rats(&res.gdit_distribution))
        .value("regular_distribution", rats(&res.regular_distribution))
        .value("total_variation", rat(&res.total_variation))
        .certificate(
            "counts",
            json!({"gdit": res.gdit_counts, "gdit_draws": res.gdit_draws, "regular": res.regular_counts}),
        );
    ctx.check("distributions are the normalized counts", || {
        let kept: u64 = res.gdit_counts.iter().sum();
        res.regular_counts.iter().sum::<u64>() == trials
            && kept == trials
            && res.gdit_distribution == frequencies(&res.gdit_counts, kept)
            && res.regular_distribution == frequencies(&res.regular_counts, trials)
    });
    ctx.check("total variation", || {
        total_variation(&res.gdit_distribution, &res.regular_distribution) == res.total_variation
    });
    ctx.check("same seed reproduces the run", || {
        indistinguishability_trial(&c, (&pm, pa), measure, trials, seed)
            .map(|r| r == res)
            .unwrap_or(false)
    });
    Ok(rep)
}
