use std::fmt;

/// Errors produced by construction and analysis of second-order cone functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input contains NaN or infinite entries.
    NonFinite,
    /// A matrix required to be symmetric differs from its transpose beyond tolerance.
    NonSymmetric { max_asymmetry: f64 },
    /// A nominally positive semidefinite matrix has an eigenvalue below the
    /// negativity tolerance.
    NotPsd { min_eigenvalue: f64 },
    /// Shapes do not line up.
    DimensionMismatch { expected: usize, found: usize },
    /// Gradient or Hessian requested at a corner point of a non-smooth function.
    NotDifferentiable,
    /// A direction vector is zero.
    ZeroDirection,
    /// Exhaustive grid search is limited to low dimensions.
    DimensionTooLarge { dim: usize, max: usize },
    /// An input value violates a documented precondition.
    InvalidInput { reason: &'static str },
    /// The eigensolver exceeded its sweep limit.
    NoConvergence,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "input contains NaN or infinite entries"),
            Error::NonSymmetric { max_asymmetry } => {
                write!(
                    f,
                    "matrix is not symmetric (max asymmetry {max_asymmetry:e})"
                )
            }
            Error::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotDifferentiable => {
                write!(f, "function is not differentiable at the requested point")
            }
            Error::ZeroDirection => write!(f, "direction vector is zero"),
            Error::DimensionTooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds the supported maximum {max}")
            }
            Error::InvalidInput { reason } => write!(f, "invalid input: {reason}"),
            Error::NoConvergence => write!(f, "eigensolver did not converge"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
