use crate::ncpoly::{AlgebraError, ParseError, TraceDataError};
use crate::rmt::McError;

/// Errors of the symbolic engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    TraceData(#[from] TraceDataError),
    #[error(transparent)]
    MonteCarlo(#[from] McError),
    #[error("unitary index {index} out of range 1..={unitaries}")]
    VarIndex { index: usize, unitaries: usize },
    #[error("operator needs an input without constant term, found {0}")]
    ConstantTerm(String),
    #[error("coupling order {requested} exceeds the budget {budget}")]
    OrderBudget { requested: usize, budget: usize },
    #[error("Neumann series did not terminate within {limit} steps")]
    ChainTooLong { limit: usize },
    #[error("polynomial is not selfadjoint: {0}")]
    NotSelfadjoint(String),
    #[error("potential is not selfadjoint up to cyclic symmetry")]
    PotentialNotCyclicallySelfadjoint,
    #[error("correlator order k = {0} must be at least 1")]
    CorrelatorOrder(usize),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
