//! Scalar interval arithmetic with rigorous directed rounding.

mod complex;
mod real;
pub mod rounding;

pub use complex::ComplexInterval;
pub use real::{sqrt_bounds, RealInterval, WithBackend};
pub use rounding::{DefaultRounding, ErrorFree, RoundingBackend, UlpStep};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoint is NaN")]
    NanEndpoint,
    #[error("lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedEndpoints { lo: f64, hi: f64 },
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("square root of an interval reaching {0} < 0")]
    NegativeSqrt(f64),
    #[error("division by an interval containing zero")]
    DivisionByZero,
}

/// Unit roundoff of binary64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Smallest positive subnormal binary64.
pub const ETA: f64 = 5e-324;
