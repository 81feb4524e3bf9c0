//! Simpliciality, joint measurability, distinguishability and disturbance.

use serde_json::{json, Map, Value};
use simplexity_core::comeasure::{build_joint_system, decide, witness_reproduces_marginals, Comeasurability};
use simplexity_core::contextuality::tuple_string;
use simplexity_core::geometry::{
    self, hull_membership, theory_conditions, weights_to_mixture, AffineDependency, HullMembership,
};
use simplexity_core::statics::disturbance::pushforward;
use simplexity_core::statics::{
    check_disturbance_consistency, collapse_rules, jointly_distinguishable, measurement_dimension_bound,
    DisturbanceRule,
};
use simplexity_core::{Point, Rational, Theory};

use super::{plural, Ctx, Result};
use crate::format;
use crate::report::{mixture, point, rat, rats, Report};
use crate::CliError;

pub fn dependency(d: &AffineDependency) -> Value {
    json!({"left": mixture(&d.left), "right": mixture(&d.right)})
}

/// Coefficients of `left − right` over the named states.
fn coefficients(names: &[String], d: &AffineDependency) -> Vec<Rational> {
    names.iter().map(|n| d.left.weight(n) - d.right.weight(n)).collect()
}

/// Dependencies hold, are linearly independent, and number `k − dim − 1`.
fn dependencies_check(t: &Theory, names: &[String], points: &[Vec<Rational>], deps: &[AffineDependency]) -> bool {
    let Ok(dim) = geometry::affine_dimension(points) else { return false };
    let rows: Vec<Vec<Rational>> = deps.iter().map(|d| coefficients(names, d)).collect();
    deps.iter().all(|d| d.holds_in(t).unwrap_or(false))
        && geometry::rank(&rows) == deps.len()
        && deps.len() + dim + 1 == points.len()
}

pub fn check_simplex(ctx: &mut Ctx, path: &str, query: Option<&str>) -> Result<Report> {
    let t = ctx.theory(path)?;
    let names = t.state_names();
    let pts = t.points();
    let dim = geometry::affine_dimension(&pts)?;
    let simplex = geometry::is_simplex(&pts)?;
    let deps = theory_conditions(&t, None)?;
    let mut rep = Report::new("check-simplex");
    rep.summary(if simplex {
        "simplex".to_string()
    } else {
        format!("non-simplex, {}", plural(deps.len(), "dependency", "dependencies"))
    });
    rep.verdict("simplex", simplex)
        .value("pure_states", pts.len())
        .value("affine_dimension", dim)
        .value("tomographic_dimension", t.tomographic_dimension())
        .certificate("dependencies", deps.iter().map(dependency).collect::<Vec<_>>());
    ctx.check("dependencies", || dependencies_check(&t, &names, &pts, &deps));
    ctx.check("verdict matches dependencies", || simplex == deps.is_empty());

    if let Some(q) = query {
        let p = format::parse_point(q)?;
        let flat = p.flatten();
        match hull_membership(&pts, &flat)? {
            HullMembership::Inside(w) => {
                let m = weights_to_mixture(&names, &w);
                rep.verdict("in_hull", true).certificate("hull_weights", mixture(&m));
                ctx.check("hull weights reproduce the query", || {
                    m.check().is_ok() && t.mix(&m).map(|x| x == p).unwrap_or(false)
                });
            }
            HullMembership::Outside(f) => {
                rep.verdict("in_hull", false).certificate(
                    "separating_functional",
                    json!({"coefficients": rats(&f.coeffs), "offset": rat(&f.offset)}),
                );
                ctx.check("functional separates the query", || f.separates(&pts, &flat));
            }
        }
    }
    Ok(rep)
}

pub fn nonsimpliciality(ctx: &mut Ctx, path: &str) -> Result<Report> {
    let t = ctx.theory(path)?;
    let names = t.state_names();
    let pts = t.points();
    let deps = theory_conditions(&t, None)?;
    let mut rep = Report::new("nonsimpliciality");
    rep.summary(plural(deps.len(), "condition", "conditions"));
    rep.value("conditions", deps.len());
    let mut shared = Vec::with_capacity(deps.len());
    for d in &deps {
        shared.push(point(&t.mix(&d.left)?));
    }
    rep.value("common_points", shared)
        .certificate("dependencies", deps.iter().map(dependency).collect::<Vec<_>>());
    ctx.check("dependencies", || dependencies_check(&t, &names, &pts, &deps));
    Ok(rep)
}

fn subset(pair: &[String]) -> Vec<&str> {
    pair.iter().map(String::as_str).collect()
}

pub fn comeasurable(ctx: &mut Ctx, path: &str, pair: &[String], forced: bool) -> Result<Report> {
    let t = ctx.theory(path)?;
    let names = subset(pair);
    let js = build_joint_system(&t, &names)?;
    let verdict = decide(&js)?;
    let mut rep = Report::new("comeasurable");
    rep.summary(if verdict.is_yes() { "comeasurable" } else { "not comeasurable" });
    rep.verdict("comeasurable", verdict.is_yes())
        .value("measurements", js.measurements.clone())
        .value("associated_states", js.states.clone())
        .value("dependencies", js.dependencies.iter().map(dependency).collect::<Vec<_>>());
    if forced {
        let vals: Vec<Value> = js
            .forced_values()?
            .iter()
            .map(|f| json!({"state": f.state, "tuple": tuple_string(&f.tuple), "value": rat(&f.value)}))
            .collect();
        rep.value("forced_values", vals);
    }
    match &verdict {
        Comeasurability::Yes(w) => {
            let table: Map<String, Value> = w
                .values
                .iter()
                .map(|(s, v)| {
                    let row: Map<String, Value> =
                        w.tuples.iter().zip(v).map(|(tup, p)| (tuple_string(tup), rat(p))).collect();
                    (s.clone(), Value::Object(row))
                })
                .collect();
            rep.certificate("joint_probabilities", Value::Object(table));
            ctx.check("witness reproduces the marginals", || witness_reproduces_marginals(&t, &js, w));
            ctx.check("witness satisfies every constraint", || {
                let x: Vec<Rational> = js.states.iter().flat_map(|s| w.values[s].clone()).collect();
                js.system.is_satisfied_by(&x)
            });
        }
        Comeasurability::No(cert) => {
            let labels = row_labels(&t, &js)?;
            let eq: Map<String, Value> = cert
                .equality_multipliers
                .iter()
                .zip(&labels)
                .filter(|(y, _)| !y.is_zero())
                .map(|(y, l)| (l.clone(), rat(y)))
                .collect();
            let ineq: Map<String, Value> = cert
                .inequality_multipliers
                .iter()
                .zip(&js.system.inequalities)
                .filter(|(y, _)| !y.is_zero())
                .map(|(y, row)| {
                    let v = row.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
                    (format!("{} >= 0", js.system.variables[v]), rat(y))
                })
                .collect();
            rep.certificate("farkas", json!({"equalities": eq, "inequalities": ineq}));
            ctx.check("farkas certificate", || cert.verify(&js.system));
        }
    }
    Ok(rep)
}

/// Labels of the joint system's equality rows in construction order.
fn row_labels(t: &Theory, js: &simplexity_core::comeasure::JointMeasurementSystem) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for s in &js.states {
        for (j, m) in js.measurements.iter().enumerate() {
            for a in 0..js.outcome_counts[j] {
                out.push(format!("marginal P({m}={a}|{s})"));
            }
        }
    }
    for (d, _) in js.dependencies.iter().enumerate() {
        for tup in &js.tuples {
            out.push(format!("dependency {} at {}", d + 1, tuple_string(tup)));
        }
    }
    if out.len() != js.system.equalities.len() {
        return Err(CliError::Input(format!(
            "joint system of {} has an unexpected row count",
            t.measurements.len()
        )));
    }
    Ok(out)
}

pub fn distinguishable(ctx: &mut Ctx, path: &str, pair: &[String]) -> Result<Report> {
    let t = ctx.theory(path)?;
    let names = subset(pair);
    let yes = jointly_distinguishable(&t, &names)?;
    let idx = t.resolve_subset(&names)?;
    let states = t.associated_states(&idx)?;
    let bound = measurement_dimension_bound(&t);
    let mut rep = Report::new("distinguishable");
    rep.summary(if yes { "jointly distinguishable" } else { "not jointly distinguishable" });
    rep.verdict("jointly_distinguishable", yes)
        .value(
            "associated_states",
            states.iter().map(|&s| t.pure_states[s].name.clone()).collect::<Vec<_>>(),
        )
        .value("dimension_bound", bound);
    let deps = theory_conditions(&t, Some(&states))?;
    rep.certificate("dependencies", deps.iter().map(dependency).collect::<Vec<_>>());
    ctx.check("verdict matches dependencies", || yes == deps.is_empty());
    ctx.check("distinguishable sets respect the dimension bound", || !yes || states.len() <= bound);
    Ok(rep)
}

fn violation_json(v: &simplexity_core::statics::DisturbanceViolation) -> Value {
    json!({
        "measurement": v.measurement,
        "condition": dependency(&v.condition),
        "outcome": v.outcome,
        "left": point(&v.left),
        "right": point(&v.right),
    })
}

/// Pushes both sides of `d` through `rule` and compares them per outcome
/// and in total.
fn images_agree(t: &Theory, rule: &DisturbanceRule, d: &AffineDependency) -> Option<(Vec<Point>, Vec<Point>)> {
    let l = pushforward(t, rule, &d.left).ok()?;
    let r = pushforward(t, rule, &d.right).ok()?;
    Some((l, r))
}

fn total(points: &[Point]) -> Option<Point> {
    let mut acc = points.first()?.zero_like();
    for p in points {
        acc.add_scaled(&Rational::one(), p);
    }
    Some(acc)
}

pub fn disturbance_check(ctx: &mut Ctx, path: &str, rules: Option<&str>, collapse: bool) -> Result<Report> {
    let t = ctx.theory(path)?;
    let rules = match (rules, collapse) {
        (_, true) => collapse_rules(&t)?,
        (Some(p), false) => {
            let text = ctx.read(p)?;
            format::parse_rules(&text).map_err(|e| CliError::Input(format!("{p}: {e}")))?
        }
        (None, false) => return Err(CliError::Input("give --rules FILE or --collapse".into())),
    };
    let report = check_disturbance_consistency(&t, &rules)?;
    let mut rep = Report::new("disturbance-check");
    rep.summary(if report.is_consistent() {
        "consistent".to_string()
    } else {
        format!("inconsistent, {}", plural(report.violations.len(), "violation", "violations"))
    });
    rep.verdict("consistent", report.is_consistent())
        .value("rules", rules.iter().map(|r| r.measurement.clone()).collect::<Vec<_>>())
        .value("conditions", report.conditions.iter().map(dependency).collect::<Vec<_>>())
        .certificate("violations", report.violations.iter().map(violation_json).collect::<Vec<_>>());
    ctx.check("violations recomputed", || {
        report.violations.iter().all(|v| {
            let Some(rule) = rules.iter().find(|r| r.measurement == v.measurement) else { return false };
            let Some((l, r)) = images_agree(&t, rule, &v.condition) else { return false };
            let (l, r) = match v.outcome {
                Some(a) => (l.get(a).cloned(), r.get(a).cloned()),
                None => (total(&l), total(&r)),
            };
            l.as_ref() == Some(&v.left) && r.as_ref() == Some(&v.right) && l != r
        })
    });
    ctx.check("unreported conditions agree", || {
        rules.iter().all(|rule| {
            report.conditions.iter().all(|d| {
                let flagged = report
                    .violations
                    .iter()
                    .any(|v| v.measurement == rule.measurement && &v.condition == d);
                let Some((l, r)) = images_agree(&t, rule, d) else { return false };
                let agree = if rule.is_selective() { l == r } else { total(&l) == total(&r) };
                flagged != agree
            })
        })
    });
    Ok(rep)
}
