//! Congruence, joint distributions, OS/XOS evaluation and configurations.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};
use simplexity_core::comeasure::counting_report;
use simplexity_core::contextuality::graph::{congruence_classes, CongruenceClasses, CongruenceGraph};
use simplexity_core::contextuality::inequality::{os_value, xos_value};
use simplexity_core::contextuality::jd::{conditional_jd_2x2, jd_feasible, jd_system, marginals_match, product_jd, JdResult};
use simplexity_core::contextuality::{
    contextual_dimension_report, enumerate_contextual_configurations, gleason_nosignaling_check, tuple_string,
    Behavior, GleasonReport,
};
use simplexity_core::{outcome_tuples, Rational};

use super::{plural, Ctx, Result};
use crate::format::{self, DocumentKind};
use crate::report::{rat, Report};
use crate::CliError;

fn adjacent_names(g: &CongruenceGraph, a: &str, b: &str) -> bool {
    let i = g.vertices.iter().position(|v| v == a);
    let j = g.vertices.iter().position(|v| v == b);
    matches!((i, j), (Some(i), Some(j)) if g.edges.contains(&(i.min(j), i.max(j))))
}

pub fn congruence(ctx: &mut Ctx, path: &str) -> Result<Report> {
    let text = ctx.read(path)?;
    let bad = |e: format::FormatError| CliError::Input(format!("{path}: {e}"));
    let g = match format::document_kind(&text).map_err(bad)? {
        DocumentKind::Theory => CongruenceGraph::from_theory(&format::parse_theory(&text).map_err(bad)?)?,
        DocumentKind::Behavior => CongruenceGraph::from_scenario(format::parse_behavior(&text).map_err(bad)?.scenario()),
        DocumentKind::Graph => format::parse_graph(&text).map_err(bad)?,
    };
    let edges: Vec<String> = g
        .edges
        .iter()
        .map(|&(i, j)| format!("{}-{}", g.vertices[i], g.vertices[j]))
        .collect();
    let mut rep = Report::new("congruence");
    rep.value("vertices", g.vertices.clone()).value("edges", edges);
    match congruence_classes(&g) {
        CongruenceClasses::Classes(classes) => {
            rep.summary(plural(classes.len(), "class", "classes"))
                .verdict("transitive", true)
                .certificate("classes", classes.clone());
            ctx.check("classes partition the vertices", || {
                let all: BTreeSet<&String> = classes.iter().flatten().collect();
                all.len() == g.vertices.len() && classes.iter().map(Vec::len).sum::<usize>() == g.vertices.len()
            });
            ctx.check("adjacent exactly within classes", || {
                classes.iter().enumerate().all(|(ci, c)| {
                    c.iter().all(|a| {
                        classes.iter().enumerate().all(|(di, d)| {
                            d.iter().filter(|b| *b != a).all(|b| adjacent_names(&g, a, b) == (ci == di))
                        })
                    })
                })
            });
        }
        CongruenceClasses::Intransitive { a, b, c } => {
            rep.summary("intransitive")
                .verdict("transitive", false)
                .certificate("chain", json!({"a": a, "b": b, "c": c}));
            ctx.check("chain breaks transitivity", || {
                adjacent_names(&g, &a, &b) && adjacent_names(&g, &b, &c) && !adjacent_names(&g, &a, &c)
            });
        }
    }
    Ok(rep)
}

/// Global distribution over `g`'s single context, keyed by outcome tuple.
fn global_json(g: &Behavior) -> Value {
    let entries: Map<String, Value> = g
        .tuples(0)
        .iter()
        .zip(&g.stats[0])
        .filter(|(_, p)| !p.is_zero())
        .map(|(t, p)| (tuple_string(t), rat(p)))
        .collect();
    Value::Object(entries)
}

/// Every context marginal of `b`, recomputed from the global behavior by
/// measurement name.
fn global_reproduces(b: &Behavior, g: &Behavior) -> bool {
    let s = &b.scenario;
    if g.stats[0].iter().any(Rational::is_negative) || !g.stats[0].iter().sum::<Rational>().is_one() {
        return false;
    }
    (0..s.contexts.len()).all(|c| {
        let sub: Option<Vec<usize>> = s.context_names(c).iter().map(|n| g.scenario.measurement_index(n)).collect();
        sub.and_then(|sub| g.marginal(0, &sub)).as_ref() == Some(&b.stats[c])
    })
}

pub fn jd(ctx: &mut Ctx, path: &str, method: &str) -> Result<Report> {
    let b = ctx.behavior(path)?;
    let mut rep = Report::new("jd");
    rep.value("method", method);
    let global = match method {
        "product" => Some(product_jd(&CongruenceGraph::from_scenario(&b.scenario), &b)?),
        "conditional" => Some(conditional_jd_2x2(&b)?),
        _ => None,
    };
    if let Some(g) = global {
        let order: Vec<String> = g.scenario.measurements.iter().map(|m| m.name.clone()).collect();
        rep.summary("exists")
            .verdict("exists", true)
            .value("order", order)
            .certificate("joint_distribution", global_json(&g));
        ctx.check("joint distribution reproduces every context", || global_reproduces(&b, &g));
        return Ok(rep);
    }
    let order: Vec<String> = b.scenario.measurements.iter().map(|m| m.name.clone()).collect();
    rep.value("order", order);
    match jd_feasible(&b)? {
        JdResult::Exists(x) => {
            let tuples = outcome_tuples(&b.scenario.global_counts());
            let entries: Map<String, Value> = tuples
                .iter()
                .zip(&x)
                .filter(|(_, p)| !p.is_zero())
                .map(|(t, p)| (tuple_string(t), rat(p)))
                .collect();
            rep.summary("exists")
                .verdict("exists", true)
                .certificate("joint_distribution", Value::Object(entries));
            ctx.check("joint distribution reproduces every context", || marginals_match(&b, &x));
        }
        JdResult::NoJd(cert) => {
            let mut labels = Vec::new();
            for c in 0..b.scenario.contexts.len() {
                for t in b.tuples(c) {
                    labels.push(format!("P({}={})", b.scenario.context_label(c), tuple_string(&t)));
                }
            }
            let eq: Map<String, Value> = cert
                .equality_multipliers
                .iter()
                .zip(&labels)
                .filter(|(y, _)| !y.is_zero())
                .map(|(y, l)| (l.clone(), rat(y)))
                .collect();
            rep.summary("no joint distribution")
                .verdict("exists", false)
                .certificate("farkas", json!({"equalities": eq}));
            ctx.check("farkas certificate", || {
                jd_system(&b).map(|cs| cert.verify(&cs)).unwrap_or(false)
            });
        }
    }
    Ok(rep)
}

fn gleason_json(r: &GleasonReport) -> Value {
    Value::from(r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

/// Marginal consistency by direct summation over each context's tuples.
fn nosignaling_direct(b: &Behavior) -> bool {
    let s = &b.scenario;
    (0..s.measurements.len()).all(|mi| {
        let margins: Vec<Vec<Rational>> = (0..s.contexts.len())
            .filter_map(|c| {
                let pos = s.contexts[c].iter().position(|&i| i == mi)?;
                let mut out = vec![Rational::zero(); s.measurements[mi].outcomes];
                for (t, p) in b.tuples(c).iter().zip(&b.stats[c]) {
                    out[t[pos]] += p;
                }
                Some(out)
            })
            .collect();
        margins.windows(2).all(|w| w[0] == w[1])
    })
}

/// Sum over contexts of `f(tuple) · p(tuple)` for the contexts whose
/// measurement sets are `sets`, matched by name.
fn context_sum(b: &Behavior, sets: &[Vec<&str>], f: impl Fn(&[usize]) -> Rational) -> Option<Rational> {
    let s = &b.scenario;
    let mut total = Rational::zero();
    for set in sets {
        let c = (0..s.contexts.len()).find(|&c| {
            let names: BTreeSet<&str> = s.context_names(c).into_iter().collect();
            names == set.iter().copied().collect()
        })?;
        let names = s.context_names(c);
        for (t, p) in b.tuples(c).iter().zip(&b.stats[c]) {
            let ordered: Vec<usize> = set
                .iter()
                .map(|n| t[names.iter().position(|x| x == n).expect("same set")])
                .collect();
            total += p * f(&ordered);
        }
    }
    Some(total)
}

pub fn os_eval(ctx: &mut Ctx, path: &str) -> Result<Report> {
    let b = ctx.behavior(path)?;
    let v = os_value(&b)?;
    let g = gleason_nosignaling_check(&b);
    let pass = if g.is_nonsignaling() { "pass" } else { "fail" };
    let mut rep = Report::new("os-eval");
    rep.summary(format!("{v}, no-signaling: {pass}"));
    rep.verdict("nonsignaling", g.is_nonsignaling())
        .verdict("below_noncontextual_minimum", v < -1i64)
        .value("value", rat(&v))
        .value("noncontextual_range", vec!["-1", "3"])
        .value("marginal_comparisons", g.compared)
        .certificate("gleason_violations", gleason_json(&g));
    let names: Vec<&str> = b.scenario.measurements.iter().map(|m| m.name.as_str()).collect();
    ctx.check("correlators recomputed", || {
        let sets = vec![vec![names[0], names[1]], vec![names[1], names[2]], vec![names[0], names[2]]];
        let corr = |t: &[usize]| Rational::from(if t[0] == t[1] { 1i64 } else { -1 });
        context_sum(&b, &sets, corr) == Some(v.clone())
    });
    ctx.check("no-signaling recomputed", || nosignaling_direct(&b) == g.is_nonsignaling());
    Ok(rep)
}

pub fn xos_eval(ctx: &mut Ctx, path: &str) -> Result<Report> {
    let b = ctx.behavior(path)?;
    let v = xos_value(&b)?;
    let g = gleason_nosignaling_check(&b);
    let pass = if g.is_nonsignaling() { "pass" } else { "fail" };
    let mut rep = Report::new("xos-eval");
    rep.summary(format!("{v}, no-signaling: {pass}"));
    rep.verdict("nonsignaling", g.is_nonsignaling())
        .verdict("above_noncontextual_maximum", v > 2i64)
        .value("value", rat(&v))
        .value("noncontextual_maximum", "2")
        .value("marginal_comparisons", g.compared)
        .certificate("gleason_violations", gleason_json(&g));
    let names: Vec<&str> = b.scenario.measurements.iter().map(|m| m.name.as_str()).collect();
    ctx.check("scores recomputed", || {
        let sets: Vec<Vec<&str>> = (0..4)
            .map(|skip| (0..4).filter(|&k| k != skip).map(|k| names[k]).collect())
            .collect();
        let score = |t: &[usize]| {
            let distinct: BTreeSet<usize> = t.iter().copied().collect();
            Rational::from(u32::from(distinct == BTreeSet::from([0, 1, 2])))
        };
        context_sum(&b, &sets, score) == Some(v.clone())
    });
    ctx.check("no-signaling recomputed", || nosignaling_direct(&b) == g.is_nonsignaling());
    Ok(rep)
}

pub fn contextual_configs(ctx: &mut Ctx, path: &str, limit: usize) -> Result<Report> {
    let file = ctx.behavior_file(path)?;
    let s = file.scenario().clone();
    let count = s.configuration_count();
    let shown: Vec<String> = enumerate_contextual_configurations(&s)?
        .take(limit)
        .map(|c| c.display(&s).to_string())
        .collect();
    let mut rep = Report::new("contextual-configs");
    rep.summary(format!("{count} configurations"));
    rep.value("count", count.to_string())
        .value("shown", shown.len())
        .certificate("configurations", shown.clone());
    ctx.check("enumeration is complete and distinct", || {
        let Ok(all) = enumerate_contextual_configurations(&s) else { return false };
        let mut seen = BTreeSet::new();
        let mut n = 0u128;
        for c in all {
            if c.check(&s).is_err() || !seen.insert(c) {
                return false;
            }
            n += 1;
        }
        n == (0..s.contexts.len()).map(|c| s.context_size(c) as u128).product::<u128>()
    });
    Ok(rep)
}

pub fn dimension_report(ctx: &mut Ctx, n: u64, m: Option<u64>, nu: u64) -> Result<Report> {
    let d = contextual_dimension_report(n)?;
    let mut rep = Report::new("dimension-report");
    rep.summary(format!("contextual gdit {}, no-signaling {}", d.contextual_gdit, d.nosignaling));
    rep.value("outcomes", d.outcomes)
        .value("contextual_gdit", d.contextual_gdit)
        .value("gleason_conditions", d.gleason_conditions)
        .value("nosignaling", d.nosignaling)
        .value("operational", d.operational);
    ctx.check("no-signaling = contextual gdit - gleason conditions", || {
        d.nosignaling + d.gleason_conditions == d.contextual_gdit
    });
    ctx.check("three contexts of n*n - 1 parameters", || d.contextual_gdit == 3 * (n * n - 1));
    if let Some(m) = m {
        let c = counting_report(m, n, nu)?;
        rep.verdict("overconstrained", c.overconstrained).value(
            "counting",
            json!({
                "measurements": m,
                "conditions": nu,
                "constraints": c.constraints,
                "variables": c.variables,
                "threshold": rat(&c.threshold),
            }),
        );
        ctx.check("overconstrained iff constraints exceed variables", || {
            c.overconstrained == (c.constraints > c.variables)
        });
    }
    Ok(rep)
}
