use thiserror::Error;

use crate::model::VarId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("assignment covers {got} variables, model declares {expected}")]
    IncompleteAssignment { expected: usize, got: usize },
    #[error("assignment sets clamped variable {var} to {got}")]
    ClampViolation { var: VarId, got: bool },
    #[error("unknown variable {0}")]
    UnknownVar(VarId),
    #[error("invalid energy term: {0}")]
    InvalidTerm(String),
    #[error("energy arithmetic overflow while scaling to a common denominator")]
    Overflow,
    #[error("search budget of {budget} frontier nodes exceeded ({free} free variables); shrink the model or use the annealer")]
    Capacity { budget: u64, free: usize },
    #[error("arity {arity} exceeds the limit of {limit}; decompose first")]
    ArityOverflow { arity: usize, limit: usize },
    #[error("penalty {penalty} does not dominate the energy spread {spread}")]
    LogicDominance { penalty: String, spread: String },
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("netlist contains a combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("unknown gate kind `{0}`")]
    UnknownGateKind(String),
    #[error("unknown net `{0}`")]
    UnknownNet(String),
    #[error("net `{0}` has more than one driver")]
    MultipleDrivers(String),
    #[error("head start {head_start} outside 1..={p}")]
    HeadStart { head_start: usize, p: usize },
    #[error("bus width {width} exceeds the supported maximum {max}")]
    WidthOverflow { width: usize, max: usize },
    #[error("penalty hierarchy violated: {0}")]
    Hierarchy(String),
    #[error("model has no free variables")]
    NothingToDo,
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
