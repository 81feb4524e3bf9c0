//! File formats, reports and subcommands of the `simplexity` command.
//!
//! [`run`] parses an argument vector, executes one analysis and returns the
//! rendered report with an exit code: 0 when the analysis ran (whatever its
//! verdict), 1 when `--verify` rejected a certificate, 2 on bad input.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod format;
pub mod report;

use report::{OutputFormat, Report};

#[derive(Debug, Parser)]
#[command(name = "simplexity", version, about = "Exact analysis of finite operational theories")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,

    /// Re-check every emitted certificate independently.
    #[arg(long, global = true)]
    pub verify: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GditArgs {
    /// Number of measurements.
    #[arg(long)]
    pub inputs: usize,
    /// Outcomes per measurement.
    #[arg(long)]
    pub outputs: usize,
    /// `symmetric`, `asymmetric`, or a rules/weights file.
    #[arg(long, default_value = "symmetric")]
    pub disturbance: String,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Ontic model kind.
    #[arg(long, value_parser = ["g", "s"], default_value = "g")]
    pub kind: String,
    /// Simplex specification, required for `--kind s`.
    #[arg(long)]
    pub simplex: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the pure states span a simplex.
    CheckSimplex {
        theory: String,
        /// Point to test for hull membership, e.g. `1/2,1/2|1,0`.
        #[arg(long)]
        query: Option<String>,
    },
    /// Basis of affine dependencies among the pure states.
    Nonsimpliciality { theory: String },
    /// Decide joint measurability of a measurement subset.
    Comeasurable {
        theory: String,
        #[arg(long, num_args = 2.., required = true)]
        pair: Vec<String>,
        /// Also report joint probabilities pinned by the marginals alone.
        #[arg(long)]
        forced: bool,
    },
    /// Check disturbance rules against the nonsimpliciality conditions.
    DisturbanceCheck {
        theory: String,
        #[arg(long, conflicts_with = "collapse", required_unless_present = "collapse")]
        rules: Option<String>,
        /// Use the eigenstate-collapse rules.
        #[arg(long)]
        collapse: bool,
    },
    /// Uncertainty of a theory, or of a behavior's marginals.
    Uncertainty {
        file: String,
        /// Also maximize over mixed states.
        #[arg(long)]
        polytope: bool,
    },
    /// Whether a subset's associated states are jointly distinguishable.
    Distinguishable {
        theory: String,
        #[arg(long, num_args = 2.., required = true)]
        pair: Vec<String>,
    },
    /// Trial count of the Chernoff tomography bound.
    Chernoff {
        #[arg(long)]
        epsilon: String,
        /// `p/q`, `2/e` or `2/e^k`.
        #[arg(long)]
        delta: String,
        #[arg(long)]
        outcomes: usize,
    },
    /// Simulate tomography on clones of a pure state.
    TomographySim {
        theory: String,
        #[arg(long)]
        state: String,
        /// Defaults to the Chernoff trial count.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[arg(long, default_value = "1/10")]
        delta: String,
    },
    /// Describe a gdit theory and its disturbance rules.
    Gdit(GditArgs),
    /// Regular theory corresponding to a gdit with disturbance.
    Correspond {
        #[command(flatten)]
        gdit: GditArgs,
        /// Write the regular theory to this file.
        #[arg(long)]
        output: Option<String>,
    },
    /// Sample the prepare-and-measure protocol in a gdit and its regular theory.
    IndistinguishabilitySim {
        #[command(flatten)]
        gdit: GditArgs,
        /// Preparation as `MEASUREMENT=OUTCOME`.
        #[arg(long)]
        prepare: String,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "1/50")]
        tolerance: String,
    },
    /// Build a g-type or s-type ontic model.
    Ontology {
        theory: String,
        #[command(flatten)]
        model: ModelArgs,
        /// Compress a distribution over the underlying simplex (g-type).
        #[arg(long)]
        compress: Option<String>,
    },
    /// Search for an ontic permutation implementing a coherent map.
    FindCoherent {
        theory: String,
        #[arg(long, conflicts_with = "inverter", required_unless_present = "inverter")]
        map: Option<String>,
        /// Swap the two eigenstates of every measurement.
        #[arg(long)]
        inverter: bool,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Compare the ontic mixtures of two operationally equal preparations.
    PrepContextuality {
        theory: String,
        /// Mixture such as `X+:1/2,X-:1/2`.
        #[arg(long)]
        mix_a: String,
        #[arg(long)]
        mix_b: String,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Congruence classes of a theory, behavior or graph.
    Congruence { file: String },
    /// Decide or construct a joint distribution for a behavior.
    Jd {
        behavior: String,
        #[arg(long, value_parser = ["lp", "product", "conditional"], default_value = "lp")]
        method: String,
    },
    /// Evaluate the three-measurement correlator sum.
    OsEval { behavior: String },
    /// Evaluate the four-measurement ternary score.
    XosEval { behavior: String },
    /// Enumerate deterministic per-context configurations.
    ContextualConfigs {
        behavior: String,
        /// Print at most this many configurations.
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// Dimension and parameter counts.
    DimensionReport {
        #[arg(long)]
        outcomes: u64,
        /// Also count joint-measurement constraints for this many measurements.
        #[arg(long)]
        measurements: Option<u64>,
        /// Nonsimpliciality conditions for the counting report.
        #[arg(long, default_value_t = 0)]
        conditions: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure kinds that stop an invocation before a report exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
        }
    }
}

impl From<simplexity_core::Error> for CliError {
    fn from(e: simplexity_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<format::FormatError> for CliError {
    fn from(e: format::FormatError) -> Self {
        CliError::Input(e.0)
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match commands::execute(&cli.command, cli.verify) {
        Ok(report) => finish(&report, cli.format),
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn finish(report: &Report, format: OutputFormat) -> Outcome {
    let failed = report.verification.as_ref().is_some_and(|v| !v.passed());
    Outcome {
        code: i32::from(failed),
        stdout: report.render(format),
        stderr: if failed { "error: certificate verification failed\n".into() } else { String::new() },
    }
}
