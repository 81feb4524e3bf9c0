//! TOML file formats for theories, behaviors, disturbance rules, coherent
//! maps, simplex specifications and congruence graphs.
//!
//! Probabilities are written as strings (`"1/2"`, `"0"`) so that no value
//! ever passes through a float. Bare TOML integers are accepted as well.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use simplexity_core::contextuality::{tuple_string, Behavior, CongruenceGraph, Scenario};
use simplexity_core::ontology::{CoherentMap, SimplexSpec};
use simplexity_core::statics::DisturbanceRule;
use simplexity_core::{outcome_tuples, Eigenstate, Measurement, Mixture, Point, PureState, Rational, Theory};

/// A malformed or inconsistent input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

type Result<T> = std::result::Result<T, FormatError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError(msg.into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn value(&self) -> Result<Rational> {
        match self {
            Num::Int(i) => Ok(Rational::from(*i)),
            Num::Str(s) => s
                .trim()
                .parse()
                .map_err(|e| FormatError(format!("bad rational `{s}`: {e}"))),
        }
    }

    fn of(r: &Rational) -> Self {
        Num::Str(r.to_string())
    }
}

fn values(v: &[Num]) -> Result<Vec<Rational>> {
    v.iter().map(Num::value).collect()
}

fn nums(v: &[Rational]) -> Vec<Num> {
    v.iter().map(Num::of).collect()
}

fn dists_of(rows: &[Vec<Num>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter().map(|r| values(r)).collect()
}

fn mixture_of(m: &BTreeMap<String, Num>) -> Result<Mixture> {
    let mut out = Mixture::default();
    for (k, v) in m {
        out.add(k.clone(), v.value()?);
    }
    Ok(out)
}

fn mixture_doc(m: &Mixture) -> BTreeMap<String, Num> {
    m.iter().map(|(k, v)| (k.clone(), Num::of(v))).collect()
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| FormatError(e.message().trim().to_string()))
}

fn to_toml<T: Serialize>(doc: &T) -> String {
    toml::to_string(doc).expect("documents serialize")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementDoc {
    name: String,
    outcomes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    name: String,
    dists: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenDoc {
    measurement: String,
    outcome: usize,
    state: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryDoc {
    measurement: Vec<MeasurementDoc>,
    state: Vec<StateDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    eigenstate: Vec<EigenDoc>,
}

pub fn parse_theory(text: &str) -> Result<Theory> {
    let doc: TheoryDoc = from_toml(text)?;
    let measurements = doc.measurement.iter().map(|m| Measurement::new(&m.name, m.outcomes)).collect();
    let states = doc
        .state
        .iter()
        .map(|s| Ok(PureState::new(&s.name, dists_of(&s.dists)?)))
        .collect::<Result<Vec<_>>>()?;
    let eigen = doc
        .eigenstate
        .iter()
        .map(|e| Eigenstate {
            measurement: e.measurement.clone(),
            outcome: e.outcome,
            state: e.state.clone(),
        })
        .collect();
    let t = Theory::new(measurements, states, eigen);
    let report = t.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return err(lines.join("; "));
    }
    Ok(t)
}

pub fn serialize_theory(t: &Theory) -> String {
    let doc = TheoryDoc {
        measurement: t
            .measurements
            .iter()
            .map(|m| MeasurementDoc {
                name: m.name.clone(),
                outcomes: m.outcomes,
            })
            .collect(),
        state: t
            .pure_states
            .iter()
            .map(|s| StateDoc {
                name: s.name.clone(),
                dists: s.point.dists().iter().map(|d| nums(d)).collect(),
            })
            .collect(),
        eigenstate: t
            .eigenstates
            .iter()
            .map(|e| EigenDoc {
                measurement: e.measurement.clone(),
                outcome: e.outcome,
                state: e.state.clone(),
            })
            .collect(),
    };
    to_toml(&doc)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextDoc {
    measurements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probabilities: Option<BTreeMap<String, Num>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BehaviorDoc {
    measurement: Vec<MeasurementDoc>,
    context: Vec<ContextDoc>,
}

/// A scenario, with statistics if every context carries probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BehaviorFile {
    Scenario(Scenario),
    Behavior(Behavior),
}

impl BehaviorFile {
    pub fn scenario(&self) -> &Scenario {
        match self {
            BehaviorFile::Scenario(s) => s,
            BehaviorFile::Behavior(b) => &b.scenario,
        }
    }

    pub fn behavior(self) -> Result<Behavior> {
        match self {
            BehaviorFile::Behavior(b) => Ok(b),
            BehaviorFile::Scenario(_) => err("contexts carry no probabilities"),
        }
    }
}

pub fn parse_behavior(text: &str) -> Result<BehaviorFile> {
    let doc: BehaviorDoc = from_toml(text)?;
    let ms: Vec<Measurement> = doc.measurement.iter().map(|m| Measurement::new(&m.name, m.outcomes)).collect();
    let ctxs: Vec<Vec<String>> = doc.context.iter().map(|c| c.measurements.clone()).collect();
    let s = Scenario::from_names(ms, &ctxs).map_err(|e| FormatError(e.to_string()))?;
    let with = doc.context.iter().filter(|c| c.probabilities.is_some()).count();
    if with == 0 {
        return Ok(BehaviorFile::Scenario(s));
    }
    if with != doc.context.len() {
        return err("either every context or none must carry probabilities");
    }
    let mut stats = Vec::with_capacity(doc.context.len());
    for (c, ctx) in doc.context.iter().enumerate() {
        let probs = ctx.probabilities.as_ref().expect("checked above");
        let tuples = outcome_tuples(&s.context_counts(c));
        let keys: Vec<String> = tuples.iter().map(|t| tuple_string(t)).collect();
        for k in probs.keys() {
            if !keys.contains(k) {
                return err(format!("context {}: unknown outcome tuple `{k}`", s.context_label(c)));
            }
        }
        let row = keys
            .iter()
            .map(|k| probs.get(k).map_or(Ok(Rational::zero()), Num::value))
            .collect::<Result<Vec<_>>>()?;
        stats.push(row);
    }
    Behavior::new(s, stats)
        .map(BehaviorFile::Behavior)
        .map_err(|e| FormatError(e.to_string()))
}

fn scenario_doc(s: &Scenario, stats: Option<&[Vec<Rational>]>) -> BehaviorDoc {
    BehaviorDoc {
        measurement: s
            .measurements
            .iter()
            .map(|m| MeasurementDoc {
                name: m.name.clone(),
                outcomes: m.outcomes,
            })
            .collect(),
        context: (0..s.contexts.len())
            .map(|c| ContextDoc {
                measurements: s.context_names(c).iter().map(|n| n.to_string()).collect(),
                probabilities: stats.map(|st| {
                    outcome_tuples(&s.context_counts(c))
                        .iter()
                        .zip(&st[c])
                        .filter(|(_, p)| !p.is_zero())
                        .map(|(t, p)| (tuple_string(t), Num::of(p)))
                        .collect()
                }),
            })
            .collect(),
    }
}

pub fn serialize_behavior(b: &Behavior) -> String {
    to_toml(&scenario_doc(&b.scenario, Some(&b.stats)))
}

pub fn serialize_scenario(s: &Scenario) -> String {
    to_toml(&scenario_doc(s, None))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageDoc {
    state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outcome: Option<usize>,
    mixture: BTreeMap<String, Num>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    measurement: String,
    image: Vec<ImageDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesDoc {
    rule: Vec<RuleDoc>,
}

pub fn parse_rules(text: &str) -> Result<Vec<DisturbanceRule>> {
    let doc: RulesDoc = from_toml(text)?;
    let mut out: Vec<DisturbanceRule> = Vec::new();
    for r in &doc.rule {
        if out.iter().any(|o| o.measurement == r.measurement) {
            return err(format!("two rules for measurement `{}`", r.measurement));
        }
        let mut rule = DisturbanceRule::new(&r.measurement);
        for img in &r.image {
            if rule.images.contains_key(&(img.state.clone(), img.outcome)) {
                return err(format!("rule `{}`: repeated image for `{}`", r.measurement, img.state));
            }
            rule.set(&img.state, img.outcome, mixture_of(&img.mixture)?);
        }
        out.push(rule);
    }
    Ok(out)
}

pub fn serialize_rules(rules: &[DisturbanceRule]) -> String {
    let doc = RulesDoc {
        rule: rules
            .iter()
            .map(|r| RuleDoc {
                measurement: r.measurement.clone(),
                image: r
                    .images
                    .iter()
                    .map(|((s, o), m)| ImageDoc {
                        state: s.clone(),
                        outcome: *o,
                        mixture: mixture_doc(m),
                    })
                    .collect(),
            })
            .collect(),
    };
    to_toml(&doc)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    weights: Vec<Vec<Vec<Num>>>,
}

/// Per-measurement, per-kept-value weights for an asymmetric gdit rule.
pub fn parse_weights(text: &str) -> Result<Vec<Vec<Vec<Rational>>>> {
    let doc: WeightsDoc = from_toml(text)?;
    doc.weights.iter().map(|m| dists_of(m)).collect()
}

pub fn serialize_weights(w: &[Vec<Vec<Rational>>]) -> String {
    to_toml(&WeightsDoc {
        weights: w.iter().map(|m| m.iter().map(|d| nums(d)).collect()).collect(),
    })
}

/// Either explicit rules or asymmetric weights, told apart by the top key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisturbanceFile {
    Rules(Vec<DisturbanceRule>),
    Weights(Vec<Vec<Vec<Rational>>>),
}

pub fn parse_disturbance(text: &str) -> Result<DisturbanceFile> {
    match top_keys(text)?.as_slice() {
        [k] if k == "weights" => parse_weights(text).map(DisturbanceFile::Weights),
        [k] if k == "rule" => parse_rules(text).map(DisturbanceFile::Rules),
        _ => err("expected a `rule` list or a `weights` array"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    map: BTreeMap<String, String>,
}

pub fn parse_map(text: &str) -> Result<CoherentMap> {
    let doc: MapDoc = from_toml(text)?;
    CoherentMap::new(doc.map).map_err(|e| FormatError(e.to_string()))
}

pub fn serialize_map(m: &CoherentMap) -> String {
    to_toml(&MapDoc { map: m.map.clone() })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexDoc {
    vertex: Vec<StateDoc>,
    decomposition: BTreeMap<String, BTreeMap<String, Num>>,
}

pub fn parse_simplex(text: &str) -> Result<SimplexSpec> {
    let doc: SimplexDoc = from_toml(text)?;
    let vertices = doc
        .vertex
        .iter()
        .map(|v| Ok((v.name.clone(), Point(dists_of(&v.dists)?))))
        .collect::<Result<Vec<_>>>()?;
    let decompositions = doc
        .decomposition
        .iter()
        .map(|(k, m)| Ok((k.clone(), mixture_of(m)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(SimplexSpec {
        vertices,
        decompositions,
    })
}

pub fn serialize_simplex(s: &SimplexSpec) -> String {
    to_toml(&SimplexDoc {
        vertex: s
            .vertices
            .iter()
            .map(|(n, p)| StateDoc {
                name: n.clone(),
                dists: p.dists().iter().map(|d| nums(d)).collect(),
            })
            .collect(),
        decomposition: s.decompositions.iter().map(|(k, m)| (k.clone(), mixture_doc(m))).collect(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

pub fn parse_graph(text: &str) -> Result<CongruenceGraph> {
    let doc: GraphDoc = from_toml(text)?;
    CongruenceGraph::new(doc.vertices, &doc.edges).map_err(|e| FormatError(e.to_string()))
}

pub fn serialize_graph(g: &CongruenceGraph) -> String {
    to_toml(&GraphDoc {
        vertices: g.vertices.clone(),
        edges: g
            .edges
            .iter()
            .map(|&(i, j)| (g.vertices[i].clone(), g.vertices[j].clone()))
            .collect(),
    })
}

/// Which document a TOML file holds, judged by its top-level keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Theory,
    Behavior,
    Graph,
}

fn top_keys(text: &str) -> Result<Vec<String>> {
    let table: toml::Table = from_toml(text)?;
    Ok(table.keys().cloned().collect())
}

pub fn document_kind(text: &str) -> Result<DocumentKind> {
    let keys = top_keys(text)?;
    let has = |k: &str| keys.iter().any(|x| x == k);
    if has("state") {
        Ok(DocumentKind::Theory)
    } else if has("context") {
        Ok(DocumentKind::Behavior)
    } else if has("vertices") {
        Ok(DocumentKind::Graph)
    } else {
        err("not a theory, behavior or graph document")
    }
}

/// `X+:1/2,X-:1/2`, or a bare state name for a pure state.
pub fn parse_mixture(s: &str) -> Result<Mixture> {
    let mut m = Mixture::default();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.rsplit_once(':') {
            Some((name, w)) => {
                let w: Rational = w
                    .trim()
                    .parse()
                    .map_err(|e| FormatError(format!("bad weight in `{part}`: {e}")))?;
                m.add(name.trim(), w);
            }
            None => m.add(part, Rational::one()),
        }
    }
    if m.is_empty() {
        return err(format!("empty mixture `{s}`"));
    }
    m.check().map_err(|e| FormatError(format!("mixture `{s}`: {e}")))?;
    Ok(m)
}

pub fn format_mixture(m: &Mixture) -> String {
    m.iter().map(|(k, w)| format!("{k}:{w}")).collect::<Vec<_>>().join(",")
}

/// Comma-separated rationals, with `|` between measurement blocks when
/// parsing a point.
pub fn parse_rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| FormatError(format!("bad rational `{p}`: {e}"))))
        .collect()
}

pub fn parse_point(s: &str) -> Result<Point> {
    Ok(Point(s.split('|').map(parse_rationals).collect::<Result<_>>()?))
}
