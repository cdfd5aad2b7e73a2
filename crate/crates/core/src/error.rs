use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("derivative order must be at least 1")]
    ZeroDerivativeOrder,
    #[error(
        "derivative order exceeds stencil capacity: order {derivative_order} needs more than {points} offsets"
    )]
    DerivativeOrderTooHigh { derivative_order: u32, points: usize },
    #[error("duplicate offset {0}")]
    DuplicateOffset(i32),
    #[error("coefficient count {coefficients} does not match offset count {offsets}")]
    LengthMismatch { offsets: usize, coefficients: usize },
    #[error("not a derivative stencil of order {derivative_order}: moment {moment} is {found}, expected {expected}")]
    MomentViolation {
        derivative_order: u32,
        moment: u32,
        found: String,
        expected: String,
    },
    #[error("rational arithmetic overflow while solving the moment system")]
    Overflow,
    #[error("step size must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("singularity at t = {at}")]
    Singularity { at: f64 },
    #[error("evaluation failed at x = {at}: {cause}")]
    Evaluation { at: f64, cause: Box<Error> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-uniform grid: spacing deviates by {max_deviation:e} relative (tolerance {tolerance:e})")]
    NonUniformGrid { max_deviation: f64, tolerance: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("series too short: {len} samples, at least {needed} required")]
    SeriesTooShort { len: usize, needed: usize },
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("reference values sum to zero")]
    ZeroReferenceSum,
    #[error("invalid step sweep: {0}")]
    InvalidSweep(String),
}

impl Error {
    /// The model singularity behind this error, looking through evaluation wrappers.
    pub fn singular_time(&self) -> Option<f64> {
        match self {
            Error::Singularity { at } => Some(*at),
            Error::Evaluation { cause, .. } => cause.singular_time(),
            _ => None,
        }
    }
}
