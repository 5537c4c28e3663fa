use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("negative spectral value {value} at pair {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error("non-positive spectral weight {weight} at pair {index}")]
    NonpositiveWeight { index: usize, weight: f64 },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("function does not tend to zero on its checkable horizon")]
    NotInfinitesimal,

    #[error("dilation factor must be positive, got {0}")]
    NonpositiveLambda(f64),

    #[error("trace-class status is undecided on the available horizon")]
    UndecidedBranch,

    #[error("evaluation point x = {x} lies past the support of a finite-rank function (support ends at {support_end})")]
    SupportExceeded { x: f64, support_end: f64 },

    #[error("zero denominator: the function vanishes identically before x = {0}")]
    ZeroDenominator(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature failed to reach tolerance ({0})")]
    Quadrature(String),

    #[error("invalid estimator configuration: {0}")]
    InvalidConfig(String),

    #[error("tail window for h = {h} holds fewer than 10 increments")]
    HorizonTooShort { h: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no constant validates the bound on the horizon: {0}")]
    NoWitnessOnHorizon(String),

    #[error("operator is not regular (indices {lower} and {upper} differ)")]
    NotRegular { lower: f64, upper: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("function has finite rank")]
    FiniteRank,

    #[error("function is bounded, so it is not of compact type")]
    Bounded,

    #[error("breakpoint search at step {step} left the representable range")]
    BreakpointOverflow { step: usize },

    #[error("breakpoint search at step {step} passed the source horizon {horizon}")]
    HorizonExceeded { step: usize, horizon: f64 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
