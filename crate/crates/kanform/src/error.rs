use thiserror::Error;

use crate::words::ExponentVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid generator name `{0}`")]
    BadGenerator(String),
    #[error("cannot parse word token `{0}`")]
    BadToken(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("face index {index} out of range in degree {degree}")]
    FaceIndex { degree: usize, index: usize },
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("chain and complex do not match: {0}")]
    Mismatch(String),
    #[error("lifting obstruction: nonzero exponent sums {0}")]
    Obstruction(ExponentVector),
    #[error("target is not a cycle of the bar differential")]
    NotACycle,
    #[error("linear lift exhausted at depth {depth} with {basis} candidate tuples")]
    LinearExhausted { depth: usize, basis: usize },
    #[error("lift certificate failed verification")]
    Certificate,
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("point is not on the constraint surface (residual {0:.3e})")]
    OffConstraint(f64),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
