use thiserror::Error;

use crate::Rational;

/// Everything that can go wrong inside the solver stack.
///
/// `StructureViolation` and `ThreeOptimalityBreach` are raised by case
/// machines when a witness that the analysis guarantees is missing. The
/// pipeline treats them as recoverable and falls back to the baseline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node {0} has degree < 2 in the cover")]
    NotACover(usize),
    #[error("node {0} has degree < 2 in the graph and cannot be covered twice")]
    UncoverableNode(usize),
    #[error("graph is not 2-edge-connected: {0}")]
    NotTwoEc(String),
    #[error("some component of the edge set is not 2-edge-connected")]
    ComponentsNotTwoEc,
    #[error("perfect matching requested on {0} vertices")]
    OddVertexCount(usize),
    #[error("T-join requested for odd |T| = {0}")]
    OddTSize(usize),
    #[error("no type A/B/C subgraph is feasible")]
    NoFeasibleType,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("3-optimality breach: {0}")]
    ThreeOptimalityBreach(String),
    #[error("initial cost bound violated: {0}")]
    BoundViolated(String),
    #[error("cost increased at step `{label}`: {before} -> {after}")]
    CostIncrease {
        label: String,
        before: Rational,
        after: Rational,
    },
    #[error("ratio envelope check failed: {0}")]
    Envelope(String),
    #[error("oracle limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("bad instance spec: {0}")]
    BadSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for the error kinds that signal a case-machine gap rather than bad input.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::StructureViolation(_)
                | Error::ThreeOptimalityBreach(_)
                | Error::CostIncrease { .. }
                | Error::BoundViolated(_)
                | Error::ComponentsNotTwoEc
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn violation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::StructureViolation(msg.into()))
}
