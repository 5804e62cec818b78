use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero has no square class")]
    ZeroInput,
    #[error("invalid field model: {0}")]
    InvalidField(String),
    #[error("scalar does not belong to the field model: {0}")]
    ForeignScalar(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("determinant is not 1")]
    DeterminantNotOne,
    #[error("not an involution: {0}")]
    NotInvolution(String),
    #[error("torus is not θ-stable")]
    NotThetaStable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {needed} elements needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("surjectivity criteria disagree: {0}")]
    CriteriaDisagree(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
