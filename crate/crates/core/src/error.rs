use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// A quadrature or solver failed to reach its tolerance.
    Tolerance {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
    /// The energy denominator changes sign on the integration support.
    SingularDenominator { p: f64, min_denominator: f64 },
    /// The radial solver produced a solution that does not satisfy its equation.
    Solver { what: &'static str, residual: f64 },
    /// The operation does not accept this kind of input.
    Contract(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Tolerance { what, estimate, error } => write!(
                f,
                "{what}: tolerance not reached (estimate {estimate:e}, error {error:e})"
            ),
            Error::SingularDenominator { p, min_denominator } => write!(
                f,
                "energy denominator vanishes on the Gaussian support at p = {p:e} cm^-1 (min {min_denominator:e} erg)"
            ),
            Error::Solver { what, residual } => {
                write!(f, "{what}: residual {residual:e} exceeds solver tolerance")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
