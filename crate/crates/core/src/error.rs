use thiserror::Error;

use crate::gde3::IterationStats;
use crate::moea::Individual;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("decision has {got} variables, scenario expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("scenario parse error at line {line}, column {column}: {message}")]
    ScenarioParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario field `{field}`: {reason}")]
    InvalidScenario { field: String, reason: String },

    #[error("unknown bundled scenario `{0}`")]
    UnknownBundle(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("reference {objective} is zero; improvement rate undefined")]
    ZeroReference { objective: &'static str },

    #[error("front is empty")]
    EmptyFront,

    #[error("front has a single member; spread needs at least two")]
    SingletonFront,

    #[error("cannot prune {available} individuals down to {requested}")]
    PruneSize { requested: usize, available: usize },

    #[error("no feasible solution after {iterations} iterations; least total violation {:.6} kWh", least_violating.violation.total)]
    NoFeasible {
        iterations: usize,
        least_violating: Box<Individual>,
        telemetry: Vec<IterationStats>,
    },

    #[error("the grid oracle requires a single-period scenario, got {periods} periods")]
    OracleNeedsSinglePeriod { periods: usize },

    #[error("Wilcoxon test undefined: all paired differences are zero")]
    WilcoxonUndefined,

    #[error("paired samples differ in length ({left} vs {right})")]
    UnpairedSamples { left: usize, right: usize },

    #[error("front file: {0}")]
    FrontFormat(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
