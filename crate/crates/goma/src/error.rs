use thiserror::Error;

/// Unified error type for scenario construction, numerics, and simulation.
#[derive(Debug, Error)]
pub enum GomaError {
    /// A distribution parameter lies outside its admissible range.
    #[error("invalid distribution parameter: {0}")]
    InvalidDistribution(String),

    /// A probability argument fell outside [0, 1].
    #[error("probability out of range: {0}")]
    ProbabilityOutOfRange(f64),

    /// Scenario-level inconsistency (empty node set, negative cost, ...).
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A strategy object does not match the scenario it is applied to.
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    /// An operation that requires discrete value distributions met a continuous one.
    #[error("operation requires discrete value distributions: {0}")]
    DiscreteRequired(String),

    /// Degenerate input with no meaningful answer (e.g. fairness of an all-silent profile).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Enumeration refused because it would be astronomically large.
    #[error("refusing exhaustive enumeration over {0} values (limit {1})")]
    EnumerationTooLarge(usize, usize),

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GomaError>;
