use alloc::string::String;

use crate::rational::Rational;

/// Errors raised by the analyses. Validation problems on whole theories are
/// reported through [`crate::theory::ValidationReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown pure state `{0}`")]
    UnknownState(String),
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("outcome {outcome} out of range for measurement `{measurement}`")]
    OutcomeOutOfRange { measurement: String, outcome: usize },
    #[error("weights sum to {0}, expected 1")]
    WeightsNotNormalized(Rational),
    #[error("negative weight {weight} on `{state}`")]
    NegativeWeight { state: String, weight: Rational },
    #[error("invalid theory: {0}")]
    InvalidTheory(String),
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("measurements have different outcome counts")]
    HeterogeneousOutcomes,
    #[error("measurement `{measurement}` has no eigenstate for outcome {outcome}")]
    NotRegular { measurement: String, outcome: usize },
    #[error("{0}")]
    OutOfRange(String),
    #[error("constraint system is infeasible")]
    Infeasible,
    #[error("objective is unbounded")]
    Unbounded,
    #[error("no disturbance rule for measurement `{measurement}` on state `{state}`")]
    IncompleteRules { measurement: String, state: String },
    #[error("inconsistent disturbance rules: {0}")]
    InconsistentRules(String),
    #[error("mixtures are not operationally equal")]
    NotOperationallyEqual,
    #[error("congruence relation is not transitive: {0}")]
    Intransitive(String),
    #[error("zero probability in conditioning cell {0}")]
    ZeroDenominatorCell(String),
    #[error("inconsistent marginals: {0}")]
    InconsistentMarginals(String),
    #[error("enumeration of {count} items exceeds the limit of {limit}")]
    SizeGuard { count: u128, limit: u128 },
    #[error("missing context {0}")]
    MissingContext(String),
    #[error("malformed behavior: {0}")]
    InvalidBehavior(String),
    #[error("partner configuration mismatch: {0}")]
    PartnerMismatch(String),
    #[error("decomposition of `{0}` does not reproduce the operational state")]
    DecompositionMismatch(String),
    #[error("denominator too large to sample exactly")]
    SamplingPrecision,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
