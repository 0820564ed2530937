//! Error types shared across the toolkit.

use alloc::string::String;
use alloc::vec::Vec;

/// A named hypothesis violation produced by parameter validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// The condition that failed, e.g. `"1+lambda*q>0"`.
    pub condition: String,
    /// Human-readable detail with the offending values.
    pub detail: String,
}

/// Toolkit-wide error type.
#[derive(Debug, Clone)]
pub enum Error {
    /// A ball mass or integral diverges (non-integrable singularity).
    DivergentMass,
    /// An integral of interest diverges; detected analytically.
    DivergentIntegral,
    /// A norm diverges; detected analytically.
    DivergentNorm,
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure { achieved: f64, requested: f64 },
    /// A matrix in a family is singular at a sampled point.
    SingularMatrix,
    /// Theorem hypotheses do not hold for the supplied parameters.
    HypothesisViolation(Vec<Violation>),
    /// Ratio denominator is zero (all test functions vanish).
    ZeroDenominator,
    /// Ratio numerator diverges.
    DivergentNumerator,
    /// An exponent combination is degenerate (logarithmic case) and the
    /// closed-form path cannot represent the result.
    DegenerateExponent,
    /// A constructor precondition failed.
    InvalidParameter(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::DivergentMass => write!(f, "ball mass diverges"),
            Error::DivergentIntegral => write!(f, "integral diverges"),
            Error::DivergentNorm => write!(f, "norm diverges"),
            Error::QuadratureFailure {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature failed: error {achieved:e} exceeds tolerance {requested:e}"
            ),
            Error::SingularMatrix => write!(f, "singular matrix in family"),
            Error::HypothesisViolation(v) => {
                write!(f, "hypothesis violations:")?;
                for item in v {
                    write!(f, " [{}: {}]", item.condition, item.detail)?;
                }
                Ok(())
            }
            Error::ZeroDenominator => write!(f, "ratio denominator is zero"),
            Error::DivergentNumerator => write!(f, "ratio numerator diverges"),
            Error::DegenerateExponent => write!(f, "degenerate (logarithmic) exponent"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
