//! Ontic models, coherent-operation search and preparation contextuality.

use serde_json::{json, Map, Value};
use simplexity_core::ontology::{
    compress_g, find_ontic_permutation, prep_contextuality_witness, transpositions, verify_permutation,
    CoherentMap, OnticKind, OnticModel, PermutationSearch, PrepContextuality,
};
use simplexity_core::{Mixture, Rational, Theory};

use super::{Ctx, Result};
use crate::format;
use crate::report::{mixture, point, rats, Report};
use crate::{CliError, ModelArgs};

fn model(ctx: &mut Ctx, t: &Theory, args: &ModelArgs) -> Result<OnticModel> {
    match (args.kind.as_str(), &args.simplex) {
        ("g", None) => Ok(OnticModel::g_type_product(t)?),
        ("g", Some(_)) => Err(CliError::Input("--simplex only applies to --kind s".into())),
        (_, Some(p)) => {
            let text = ctx.read(p)?;
            let spec = format::parse_simplex(&text).map_err(|e| CliError::Input(format!("{p}: {e}")))?;
            Ok(OnticModel::s_type(t, &spec)?)
        }
        (_, None) => Err(CliError::Input("--kind s needs --simplex FILE".into())),
    }
}

/// Each distribution is a probability vector whose image under the
/// intermediate vertices is its operational state.
fn model_check(t: &Theory, m: &OnticModel) -> bool {
    t.pure_states.iter().all(|s| {
        let Some(d) = m.state_distributions.get(&s.name) else { return false };
        if d.len() != m.intermediate_vertices.len()
            || d.iter().any(Rational::is_negative)
            || !d.iter().sum::<Rational>().is_one()
        {
            return false;
        }
        let mut acc = s.point.zero_like();
        for (w, v) in d.iter().zip(&m.intermediate_vertices) {
            acc.add_scaled(w, v);
        }
        acc == s.point
    })
}

fn distributions(m: &OnticModel) -> Value {
    Value::Object(m.state_distributions.iter().map(|(k, v)| (k.clone(), rats(v))).collect())
}

pub fn ontology(ctx: &mut Ctx, path: &str, args: &ModelArgs, compress: Option<&str>) -> Result<Report> {
    let t = ctx.theory(path)?;
    let m = model(ctx, &t, args)?;
    m.verify()?;
    let mut rep = Report::new("ontology");
    rep.summary(format!("{}-type, {} ontic points", m.kind, m.ontic_points.len()));
    rep.value("kind", m.kind.to_string())
        .value("ontic_points", m.ontic_points.clone())
        .value("intermediate_dimension", m.intermediate_dimension()?)
        .value("operational_dimension", m.operational_dimension()?);
    let verts: Map<String, Value> = m
        .ontic_points
        .iter()
        .zip(&m.intermediate_vertices)
        .map(|(n, p)| (n.clone(), point(p)))
        .collect();
    rep.value("intermediate_vertices", Value::Object(verts))
        .certificate("state_distributions", distributions(&m));
    ctx.check("distributions reproduce the states", || model_check(&t, &m));

    if let Some(spec) = compress {
        if m.kind != OnticKind::G {
            return Err(CliError::Input("--compress applies to g-type models".into()));
        }
        let dist = format::parse_rationals(spec)?;
        let counts: Vec<usize> = t.measurements.iter().map(|x| x.outcomes).collect();
        let p = compress_g(&counts, &dist)?;
        rep.value("compressed", point(&p));
        ctx.check("compression is the pushforward", || m.pushforward(&dist).map(|q| q == p).unwrap_or(false));
    }
    Ok(rep)
}

/// `(μ_i(λ))_i` and `(μ_{map(i)}(ν))_i` over the map's domain.
fn signature(m: &OnticModel, map: &CoherentMap, l: usize, target: bool) -> Vec<Rational> {
    map.map
        .iter()
        .map(|(from, to)| {
            let s = if target { to } else { from };
            m.state_distributions[s][l].clone()
        })
        .collect()
}

pub fn find_coherent(
    ctx: &mut Ctx,
    path: &str,
    map: Option<&str>,
    inverter: bool,
    args: &ModelArgs,
) -> Result<Report> {
    let t = ctx.theory(path)?;
    let cmap = match map {
        Some(p) => {
            let text = ctx.read(p)?;
            format::parse_map(&text).map_err(|e| CliError::Input(format!("{p}: {e}")))?
        }
        None if inverter => CoherentMap::inverter(&t)?,
        None => return Err(CliError::Input("give --map FILE or --inverter".into())),
    };
    for s in cmap.map.keys() {
        t.state(s)?;
    }
    let m = model(ctx, &t, args)?;
    let res = find_ontic_permutation(&m, &cmap)?;
    let names = &m.ontic_points;
    let mut rep = Report::new("find-coherent");
    rep.value("kind", m.kind.to_string()).value(
        "map",
        Value::Object(cmap.map.iter().map(|(a, b)| (a.clone(), Value::from(b.clone()))).collect()),
    );
    match &res {
        PermutationSearch::Found(sigma) => {
            let perm: Map<String, Value> =
                sigma.iter().enumerate().map(|(l, &v)| (names[l].clone(), Value::from(names[v].clone()))).collect();
            rep.summary("found").verdict("found", true).certificate("permutation", Value::Object(perm));
            if let Some(sw) = transpositions(sigma) {
                let sw: Vec<String> = sw.iter().map(|&(a, b)| format!("{} <-> {}", names[a], names[b])).collect();
                rep.certificate("transpositions", sw);
            }
            ctx.check("permutation maps every distribution", || {
                verify_permutation(&m, &cmap, sigma).unwrap_or(false)
            });
            ctx.check("signatures match pointwise", || {
                sigma.iter().enumerate().all(|(l, &v)| signature(&m, &cmap, l, false) == signature(&m, &cmap, v, true))
            });
        }
        PermutationSearch::Impossible { lambda } => {
            let sig = signature(&m, &cmap, *lambda, false);
            let k = names.len();
            let src = (0..k).filter(|&l| signature(&m, &cmap, l, false) == sig).count();
            let tgt = (0..k).filter(|&v| signature(&m, &cmap, v, true) == sig).count();
            rep.summary("impossible").verdict("found", false).certificate(
                "obstruction",
                json!({
                    "ontic_point": names[*lambda],
                    "signature": rats(&sig),
                    "source_count": src,
                    "target_count": tgt,
                }),
            );
            ctx.check("signature counts differ", || {
                let sig = signature(&m, &cmap, *lambda, false);
                let src = (0..k).filter(|&l| signature(&m, &cmap, l, false) == sig).count();
                let tgt = (0..k).filter(|&v| signature(&m, &cmap, v, true) == sig).count();
                src != tgt
            });
        }
    }
    Ok(rep)
}

fn ontic_mixture(m: &OnticModel, mix: &Mixture) -> Option<Vec<Rational>> {
    let mut acc = vec![Rational::zero(); m.ontic_points.len()];
    for (s, w) in mix.iter() {
        for (a, x) in acc.iter_mut().zip(m.state_distributions.get(s)?) {
            *a += w * x;
        }
    }
    Some(acc)
}

pub fn prep_contextuality(ctx: &mut Ctx, path: &str, a: &str, b: &str, args: &ModelArgs) -> Result<Report> {
    let t = ctx.theory(path)?;
    let ma = format::parse_mixture(a)?;
    let mb = format::parse_mixture(b)?;
    let m = model(ctx, &t, args)?;
    let res = prep_contextuality_witness(&m, &ma, &mb)?;
    let op = t.mix(&ma)?;
    let mut rep = Report::new("prep-contextuality");
    rep.value("kind", m.kind.to_string())
        .value("mixture_a", mixture(&ma))
        .value("mixture_b", mixture(&mb))
        .value("operational_point", point(&op))
        .value("ontic_points", m.ontic_points.clone());
    let (left, right) = match &res {
        PrepContextuality::Witness { left, right } => {
            rep.summary("witness").verdict("witness", true);
            (left.clone(), right.clone())
        }
        PrepContextuality::NoWitness { distribution } => {
            rep.summary("no witness").verdict("witness", false);
            (distribution.clone(), distribution.clone())
        }
    };
    rep.certificate("ontic_a", rats(&left)).certificate("ontic_b", rats(&right));
    let witness = matches!(res, PrepContextuality::Witness { .. });
    ctx.check("preparations are operationally equal", || t.mix(&mb).map(|p| p == op).unwrap_or(false));
    ctx.check("ontic mixtures recomputed", || {
        ontic_mixture(&m, &ma).as_ref() == Some(&left) && ontic_mixture(&m, &mb).as_ref() == Some(&right)
    });
    ctx.check("verdict matches the mixtures", || witness == (left != right));
    Ok(rep)
}
