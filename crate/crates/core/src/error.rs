use crate::scalar::Scalar;

/// Errors raised by the algebra, analysis and normal-form routines.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("division by the zero operator")]
    DivisionByZero,
    #[error("operator is not Fuchsian")]
    NotFuchsian,
    #[error("operator has negative t-powers (kmin = {0}); an Euler-shaped operator is required")]
    NegativeValuation(i64),
    #[error("truncation exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("truncation order {available} is below the required order {needed}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("operands are not coprime")]
    NotCoprime,
    #[error("degree bound violated: {0}")]
    DegreeBound(&'static str),
    #[error("operator is resonant at order {0}")]
    Resonant(i64),
    #[error("the Euler part does not split over the active field")]
    NotSplit,
    #[error("root list does not multiply out to the Euler part")]
    RootsMismatch,
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("logarithmic obstruction at exponent {exponent} + {order}")]
    LogObstruction { exponent: Scalar, order: i64 },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("internal invariant breached: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
