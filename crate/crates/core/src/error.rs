use core::fmt;

/// Everything that can go wrong while building, evaluating or constraining a
/// fractal spline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `knots[index] <= knots[index - 1]`.
    NonIncreasingKnots { index: usize },
    /// Fewer than three knots.
    TooFewPoints { found: usize },
    NonFiniteValue { index: usize },
    LengthMismatch { expected: usize, found: usize },
    /// Derivative estimation refuses to overwrite supplied slopes.
    DerivativesAlreadyPresent,
    MissingDerivatives,
    /// `|alpha| > kappa * a` on the given interval.
    ContractivityViolation { interval: usize, alpha: f64, limit: f64 },
    NonPositiveU { interval: usize },
    NegativeV { interval: usize },
    InvalidKappa(f64),
    OutOfDomain { x: f64 },
    InvalidTolerance(f64),
    DepthTooLarge { depth: usize, max_depth: usize },
    NonPositiveData { index: usize },
    /// A threshold denominator vanished: alpha sits on (or past) its admissible limit.
    AlphaOnBoundary { interval: usize },
    InvalidRectangle { lower: f64, upper: f64 },
    DataOutsideRectangle { index: usize },
    DataNotAboveLine { index: usize },
    DataNotBelowLine { index: usize },
    /// No shape parameter satisfies the sufficient conditions on this interval.
    Infeasible { interval: usize },
    InvalidPolicy(&'static str),
    InvalidTensionSequence,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonIncreasingKnots { index } => {
                write!(f, "knot {index} does not strictly exceed its predecessor")
            }
            Error::TooFewPoints { found } => {
                write!(f, "at least 3 interpolation points required, found {found}")
            }
            Error::NonFiniteValue { index } => write!(f, "non-finite value at point {index}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::DerivativesAlreadyPresent => {
                f.write_str("data set already carries derivative values")
            }
            Error::MissingDerivatives => f.write_str("data set has no derivative values"),
            Error::ContractivityViolation { interval, alpha, limit } => write!(
                f,
                "scaling factor {alpha} on interval {interval} exceeds contraction limit {limit}"
            ),
            Error::NonPositiveU { interval } => {
                write!(f, "shape parameter u on interval {interval} must be positive")
            }
            Error::NegativeV { interval } => {
                write!(f, "shape parameter v on interval {interval} must be non-negative")
            }
            Error::InvalidKappa(k) => write!(f, "contraction cap {k} outside [0, 1)"),
            Error::OutOfDomain { x } => write!(f, "abscissa {x} outside the interpolation domain"),
            Error::InvalidTolerance(t) => write!(f, "tolerance {t} must be positive and finite"),
            Error::DepthTooLarge { depth, max_depth } => {
                write!(f, "depth {depth} exceeds the sampling cap {max_depth}")
            }
            Error::NonPositiveData { index } => {
                write!(f, "value at point {index} is not positive")
            }
            Error::AlphaOnBoundary { interval } => write!(
                f,
                "scaling factor on interval {interval} lies on its admissible boundary"
            ),
            Error::InvalidRectangle { lower, upper } => {
                write!(f, "rectangle bounds [{lower}, {upper}] are not ordered")
            }
            Error::DataOutsideRectangle { index } => {
                write!(f, "point {index} lies outside the rectangle")
            }
            Error::DataNotAboveLine { index } => {
                write!(f, "point {index} does not lie strictly above the line")
            }
            Error::DataNotBelowLine { index } => {
                write!(f, "point {index} does not lie strictly below the line")
            }
            Error::Infeasible { interval } => write!(
                f,
                "no shape parameter meets the sufficient conditions on interval {interval}"
            ),
            Error::InvalidPolicy(what) => write!(f, "invalid selection policy: {what}"),
            Error::InvalidTensionSequence => {
                f.write_str("tension values must be non-negative and increasing")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
