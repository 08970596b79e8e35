use core::fmt;

/// Failures raised by the solver kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Density was zero, negative or not finite.
    NonPositiveDensity { rho: f64 },
    /// Density left the admissible set during a Runge-Kutta stage.
    PositivityLoss { i: usize, j: usize, rho: f64, t: f64 },
    /// The CFL time step collapsed or became non-finite.
    TimeStepUnderflow { t: f64, dt: f64 },
    /// A parameter violated its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// Grid extents or spacings out of range.
    InvalidGrid(&'static str),
    /// Vertex field handed to the curl-free scheme has a nonzero discrete curl.
    ConstraintViolation { scaled_curl: f64 },
    /// Field layout does not match the grid or formulation.
    LayoutMismatch { expected: usize, found: usize },
    /// Dual variables below the range of the convex branch, whose density
    /// would have to lie at or under `rho_min`.
    NoConvexPreimage { rho_min: f64 },
    /// Diagnostics recorded out of time order.
    NonMonotoneTime { last: f64, t: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveDensity { rho } => write!(f, "non-positive density {rho}"),
            Error::PositivityLoss { i, j, rho, t } => {
                write!(f, "density {rho} in cell ({i}, {j}) at t = {t} is not positive")
            }
            Error::TimeStepUnderflow { t, dt } => write!(f, "time step {dt} underflowed at t = {t}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` has inadmissible value {value}")
            }
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::ConstraintViolation { scaled_curl } => write!(
                f,
                "initial vertex field is not discretely curl-free (scaled curl {scaled_curl:e})"
            ),
            Error::LayoutMismatch { expected, found } => {
                write!(f, "field layout mismatch: expected {expected} values, found {found}")
            }
            Error::NoConvexPreimage { rho_min } => {
                write!(f, "dual variables have no preimage with density above {rho_min}")
            }
            Error::NonMonotoneTime { last, t } => {
                write!(f, "diagnostics time {t} does not follow previous record at {last}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
