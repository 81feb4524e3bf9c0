//! One function per subcommand. Each builds a [`Report`] and, under
//! `--verify`, re-checks its certificates by an independent route.

use std::fs;

use simplexity_core::contextuality::Behavior;
use simplexity_core::{outcome_tuples, Point, Rational, Theory};

use crate::format::{self, BehaviorFile};
use crate::report::{InputDigest, Report, Verification};
use crate::{CliError, Command};

mod context;
mod gdit;
mod ontology;
mod statics;
mod structure;

pub type Result<T> = std::result::Result<T, CliError>;

pub fn execute(cmd: &Command, verify: bool) -> Result<Report> {
    use Command::*;
    let mut ctx = Ctx::new(verify);
    let mut rep = match cmd {
        CheckSimplex { theory, query } => structure::check_simplex(&mut ctx, theory, query.as_deref())?,
        Nonsimpliciality { theory } => structure::nonsimpliciality(&mut ctx, theory)?,
        Comeasurable { theory, pair, forced } => structure::comeasurable(&mut ctx, theory, pair, *forced)?,
        DisturbanceCheck { theory, rules, collapse } => {
            structure::disturbance_check(&mut ctx, theory, rules.as_deref(), *collapse)?
        }
        Uncertainty { file, polytope } => statics::uncertainty(&mut ctx, file, *polytope)?,
        Distinguishable { theory, pair } => structure::distinguishable(&mut ctx, theory, pair)?,
        Chernoff { epsilon, delta, outcomes } => statics::chernoff(&mut ctx, epsilon, delta, *outcomes)?,
        TomographySim { theory, state, trials, seed, epsilon, delta } => {
            statics::tomography_sim(&mut ctx, theory, state, *trials, *seed, epsilon, delta)?
        }
        Gdit(g) => gdit::describe(&mut ctx, g)?,
        Correspond { gdit: g, output } => gdit::correspond(&mut ctx, g, output.as_deref())?,
        IndistinguishabilitySim { gdit: g, prepare, measure, trials, seed, tolerance } => {
            gdit::indistinguishability(&mut ctx, g, prepare, measure, *trials, *seed, tolerance)?
        }
        Ontology { theory, model, compress } => ontology::ontology(&mut ctx, theory, model, compress.as_deref())?,
        FindCoherent { theory, map, inverter, model } => {
            ontology::find_coherent(&mut ctx, theory, map.as_deref(), *inverter, model)?
        }
        PrepContextuality { theory, mix_a, mix_b, model } => {
            ontology::prep_contextuality(&mut ctx, theory, mix_a, mix_b, model)?
        }
        Congruence { file } => context::congruence(&mut ctx, file)?,
        Jd { behavior, method } => context::jd(&mut ctx, behavior, method)?,
        OsEval { behavior } => context::os_eval(&mut ctx, behavior)?,
        XosEval { behavior } => context::xos_eval(&mut ctx, behavior)?,
        ContextualConfigs { behavior, limit } => context::contextual_configs(&mut ctx, behavior, *limit)?,
        DimensionReport { outcomes, measurements, conditions } => {
            context::dimension_report(&mut ctx, *outcomes, *measurements, *conditions)?
        }
    };
    rep.inputs = std::mem::take(&mut ctx.inputs);
    if verify {
        rep.verification = Some(Verification { checks: ctx.checks });
    }
    Ok(rep)
}

/// Per-invocation state: digests of files read and verification checks.
pub struct Ctx {
    pub verify: bool,
    inputs: Vec<InputDigest>,
    checks: Vec<(String, bool)>,
}

impl Ctx {
    fn new(verify: bool) -> Self {
        Ctx {
            verify,
            inputs: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn read(&mut self, path: &str) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
        self.inputs.push(InputDigest::of(path, &bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{path} is not UTF-8")))
    }

    pub fn theory(&mut self, path: &str) -> Result<Theory> {
        let text = self.read(path)?;
        format::parse_theory(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }

    pub fn behavior_file(&mut self, path: &str) -> Result<BehaviorFile> {
        let text = self.read(path)?;
        format::parse_behavior(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }

    pub fn behavior(&mut self, path: &str) -> Result<Behavior> {
        self.behavior_file(path)?
            .behavior()
            .map_err(|e| CliError::Input(format!("{path}: {e}")))
    }

    /// Records a verification check; the closure only runs under `--verify`.
    pub fn check(&mut self, name: &str, f: impl FnOnce() -> bool) {
        if self.verify {
            let ok = f();
            self.checks.push((name.to_string(), ok));
        }
    }
}

pub fn parse_rational(s: &str, what: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|e| CliError::Input(format!("bad {what} `{s}`: {e}")))
}

/// `1 − max over outcome tuples of the mean probability`, by enumeration.
pub fn tuple_uncertainty(p: &Point) -> Rational {
    let counts: Vec<usize> = p.dists().iter().map(Vec::len).collect();
    let m = Rational::from(counts.len());
    let best = outcome_tuples(&counts)
        .iter()
        .map(|t| t.iter().enumerate().map(|(j, &a)| p.prob(j, a).clone()).sum::<Rational>() / &m)
        .max()
        .unwrap_or_default();
    Rational::one() - best
}

pub fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}
