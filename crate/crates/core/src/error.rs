use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: Zmod requires n >= 2")]
    InvalidModulus(u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the coefficient ring is not enumerable (rationals)")]
    NotEnumerable,

    #[error("enumeration of {size} elements exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("algebra has no identity element")]
    NotUnital,

    #[error("invalid Morita context: {0}")]
    InvalidContext(String),

    #[error("bimodule M is not faithful (left: {left}, right: {right})")]
    NotFaithful { left: bool, right: bool },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("the coefficient ring has 2-torsion")]
    TwoTorsion,

    #[error("map is not {k}-commuting; witness {witness}")]
    NotKCommuting { k: usize, witness: String },

    #[error("map is not a derivation; witness {witness}")]
    NotDerivation { witness: String },

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("bad split: {0}")]
    BadSplit(String),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid scalar {value:?} for ring {ring}")]
    InvalidScalar { value: String, ring: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Input-side failures, as opposed to findings about the mathematics.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::TheoremViolation(_) | Error::NotKCommuting { .. })
    }

    /// Variant name, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotEnumerable => "NotEnumerable",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::NotUnital => "NotUnital",
            Error::InvalidContext(_) => "InvalidContext",
            Error::NotFaithful { .. } => "NotFaithful",
            Error::NoSolution(_) => "NoSolution",
            Error::TwoTorsion => "TwoTorsion",
            Error::NotKCommuting { .. } => "NotKCommuting",
            Error::NotDerivation { .. } => "NotDerivation",
            Error::HypothesesNotMet(_) => "HypothesesNotMet",
            Error::TheoremViolation(_) => "TheoremViolation",
            Error::BadSplit(_) => "BadSplit",
            Error::BadShape(_) => "BadShape",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::InvalidScalar { .. } => "InvalidScalar",
            Error::Schema(_) => "Schema",
            Error::Json(_) => "Json",
        }
    }
}
