use thiserror::Error;

/// Errors produced by the library.
///
/// Every variant has a stable machine-readable code, see [`Error::code`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not irreducible over the base field: {0}")]
    NotIrreducible(String),
    #[error("elements live in different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not a subfield of {1}")]
    NotASubfield(String, String),
    #[error("zero is not a unit")]
    ZeroUnit,
    #[error("operation is only available over the rationals")]
    RationalsOnly,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("unsupported transfer shape: {0}")]
    UnsupportedTransferShape(String),
    #[error("unsupported correspondence shape: {0}")]
    UnsupportedCorrShape(String),
    #[error("invalid correspondence: {0}")]
    InvalidCorr(String),
    #[error("side condition failed for {0}: {1}")]
    MoveSideCondition(String, String),
    #[error("field tower degree {0} exceeds the supported bound {1}")]
    DegreeBound(usize, usize),
    #[error("polynomial degree {0} exceeds the supported bound {1}")]
    PolyDegreeBound(usize, usize),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("budget exhausted")]
    BudgetExhausted,
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::NotIrreducible(_) => "not_irreducible",
            Error::FieldMismatch(..) => "field_mismatch",
            Error::NotASubfield(..) => "not_a_subfield",
            Error::ZeroUnit => "zero_unit",
            Error::RationalsOnly => "rationals_only",
            Error::DegreeMismatch(..) => "degree_mismatch",
            Error::UnsupportedTransferShape(_) => "unsupported_transfer_shape",
            Error::UnsupportedCorrShape(_) => "unsupported_corr_shape",
            Error::InvalidCorr(_) => "invalid_corr",
            Error::MoveSideCondition(..) => "move_side_condition",
            Error::DegreeBound(..) => "degree_bound",
            Error::PolyDegreeBound(..) => "poly_degree_bound",
            Error::InvalidPlace(_) => "invalid_place",
            Error::BudgetExhausted => "budget_exhausted",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
