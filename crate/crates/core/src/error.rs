use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    Index(String),
    /// A leg of a product does not line up with the others.
    #[error("conformability: {0}")]
    Conformability(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("search budget exceeded: need {needed:.3e} candidates, budget {budget}")]
    Budget { needed: f64, budget: u64 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("completion failed: {0}")]
    Completion(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
