use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("torus dimension {name}={value} is not a positive multiple of 3; the (u - v) mod 3 coloring cannot close")]
    NotThreeColorable { name: &'static str, value: usize },

    #[error("unsupported triangular size {size}; available sizes are {min}..={max}")]
    UnsupportedSize { size: usize, min: usize, max: usize },

    #[error("plaquette id {id} out of range (lattice has {count} plaquettes)")]
    PlaquetteOutOfRange { id: usize, count: usize },

    #[error("qubit id {id} out of range (lattice has {count} qubits)")]
    QubitOutOfRange { id: usize, count: usize },

    #[error("region A is empty")]
    EmptyA,

    #[error("region B is empty (A covers every qubit)")]
    EmptyB,

    #[error("region outside the closed-form scope: {0}")]
    IrregularRegion(String),

    #[error("lattice too small: {0}")]
    LatticeTooSmall(String),

    #[error("inconsistent region statistics: {0}")]
    InconsistentStats(String),

    #[error("invalid couplings: {0}")]
    InvalidCouplings(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("parse error at position {pos} in {input:?}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
