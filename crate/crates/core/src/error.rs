use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid neuron name '{0}'")]
    InvalidName(String),

    #[error("neuron '{0}' declared twice")]
    DuplicateNeuron(String),

    #[error("unknown neuron '{0}'")]
    UnknownNeuron(String),

    #[error("interpretation over {found} neurons used with a signature of {expected}")]
    SignatureMismatch { expected: usize, found: usize },

    #[error("lower bound of a 3-interpretation is not contained in its upper bound")]
    Inconsistent,

    #[error("universe has {size} neurons, above the enumeration cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("operator is not monotone: {0}")]
    NonMonotoneDetected(String),

    #[error("{0} is not positive")]
    NotPositive(&'static str),

    #[error("{0} is not acyclic")]
    NotAcyclic(&'static str),

    #[error("{0} is not ordinary")]
    NotOrdinary(&'static str),

    #[error("program is not minimalist: neuron '{head}' heads more than one rule")]
    NotMinimalist { head: String },

    #[error("invalid net: {0}")]
    InvalidNet(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("invalid layering: {0}")]
    InvalidLayering(String),

    #[error("input neuron '{0}' is not in the input layer")]
    InputOutsideInputLayer(String),

    #[error("operands range over different universes")]
    UniverseMismatch,

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}
