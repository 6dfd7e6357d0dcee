use thiserror::Error;

use crate::decision::SeparationCertificate;
use crate::metric::Metric;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptySet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at point {point}, axis {axis}")]
    NonFinite { point: usize, axis: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{operation} does not support the {metric} metric")]
    UnsupportedMetric {
        operation: &'static str,
        metric: Metric,
    },

    #[error("{operation} is limited to dimension <= {max}, got {dim}")]
    DimensionTooLarge {
        operation: &'static str,
        dim: usize,
        max: usize,
    },

    #[error("{what} needs {required} evaluations, budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error(
        "separation assumption violated: min pairwise distance {:.6} < threshold {:.6}",
        .0.min_pairwise,
        .0.threshold
    )]
    SeparationViolated(SeparationCertificate),

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("estimator failed: {0}")]
    Estimator(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{value} is not in (0, 1)")))
    }
}

/// Approximation parameters are accepted on (0, 1]; the sampling bounds stay
/// valid at exactly 1.
pub(crate) fn check_epsilon(value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", format!("{value} is not in (0, 1]")))
    }
}

pub(crate) fn check_factor(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{value} must be a finite real > 1")))
    }
}
