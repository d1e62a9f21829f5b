use crate::dist::KwiseWitness;
use crate::boolfn::Certificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("symbol index {index} out of range for alphabet of size {size}")]
    Symbol { index: usize, size: usize },
    #[error("player index {index} out of range for n = {n}")]
    Player { index: usize, n: usize },
    #[error("weights sum to {0}")]
    WeightSum(String),
    #[error("non-positive weight {weight} at outcome {outcome}")]
    Weight { outcome: String, weight: String },
    #[error("duplicate outcome {0}")]
    DuplicateOutcome(String),
    #[error("marginal of player {player} is invalid: {reason}")]
    Marginal { player: usize, reason: String },
    #[error("conditioning on null event")]
    NullEvent,
    #[error("alphabet or arity mismatch between distributions")]
    Mismatch,
    #[error("function undefined at {0}")]
    Undefined(String),
    #[error("function value {0} outside [-1, 1]")]
    Range(String),
    #[error("requires a binary alphabet")]
    NotBinary,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("not {k}-wise independent: {witness}")]
    NotIndependent { k: usize, witness: Box<KwiseWitness> },
    #[error("inconsistent labels: {0}")]
    Inconsistent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no pivotal players; nothing to reduce")]
    NoPivotalPlayers,
    #[error("certificate failed: {}", .0.failure().unwrap_or("unknown"))]
    Certificate(Box<Certificate>),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
