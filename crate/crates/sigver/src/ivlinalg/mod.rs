//! Interval matrices and the verified linear algebra built on them.

mod cholesky;
mod matrix;
mod norm;
mod product;
mod solve;
mod spd;

pub use cholesky::interval_cholesky;
pub use matrix::{augment_pair, real_embedding, ComplexIntervalMatrix, EmbeddingPair, IntervalMatrix, Structure};
pub use norm::{general_norm_bound, norm_lower_bound, nrmbnd, spectral_norm_enclosure, symmetric_norm_bound};
pub use product::{enclose_matvec, gamma, gram_product, identity_minus, imm_multiply, imm_multiply_reference, point_product};
pub use solve::enclose_solve;
pub use spd::{lower_bound_sigma_min_spd, verify_spd, verify_spd_shifted};

pub(crate) use matrix::two_prod;

use thiserror::Error;

use crate::interval::IntervalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IvLinalgError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("radius must be nonnegative and not NaN")]
    InvalidRadius,
    #[error("non-finite midpoint")]
    NonFinite,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not upper triangular")]
    NotUpperTriangular,
    #[error("positive definiteness could not be proven (pivot {index})")]
    NotProvablyPositiveDefinite { index: usize },
    #[error("nonsingularity could not be proven")]
    NotVerifiablyNonsingular,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}
