use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid exponent profile: {0}")]
    InvalidProfile(String),

    #[error("multi-index {index:?} is not in the box {{0..={}}}^{n}", .m - 1)]
    IndexOutOfBox { index: Vec<u32>, m: u32, n: usize },

    #[error("operation requires gcd d = 1, profile has d = {0}")]
    RequiresCoprime(u32),

    #[error("series order {have} is too small, need at least {need}")]
    InsufficientOrder { have: u32, need: u32 },

    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("logarithm of a series with non-invertible constant term")]
    NonInvertibleConstant,

    #[error("constant term log({0}) is not representable in this ring")]
    UnrepresentableLog(String),

    #[error("zero operator has no leading coefficient")]
    ZeroOperator,

    #[error("expected a univariate operator, got {0} variables")]
    NotUnivariate(usize),

    #[error("monomial x^{exponent:?} does not divide the operator")]
    NotDivisible { exponent: Vec<u32> },

    #[error("factorization identity failed: {0}")]
    FactorizationFailed(String),

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("roots are not separated (min distance {0:e}); discriminant is numerically zero")]
    DegenerateRoots(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vector is not in the relation space (residual {0:e})")]
    NotARelation(f64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
