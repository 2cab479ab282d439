use thiserror::Error;

use crate::symcore::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("invalid chart: {0}")]
    BadChart(String),
    #[error("interior product of a function")]
    DegreeZero,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("rank is not constant: it drops where {locus} = 0")]
    NonConstantRank { locus: String },
    #[error("degenerate at the point: {0}")]
    Degenerate(String),
    #[error("not of involutive type: {0}")]
    NotTypeI(String),
    #[error("type differs between sample points: {0}")]
    MixedType(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Input and parse problems, as opposed to mathematical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Expr(ExprError::Parse { .. }) | Error::Expr(ExprError::InvalidName(_)) | Error::Input(_) | Error::BadChart(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
