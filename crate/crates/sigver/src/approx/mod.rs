//! Floating-point factorizations that produce the approximations the
//! verification layer then certifies. Nothing here is rigorous.

mod bsvd;
pub mod cholesky;
mod eig;
mod ldlt;
mod lu;
mod svd;

pub use bsvd::{bsvd_decompose, BsvdFactors};
pub use cholesky::{cholesky_lower, cholesky_upper, congruence_inverse, solve_lower_in_place, solve_upper_in_place};
pub use eig::{approx_gen_eig_extreme, approx_lambda_min, approx_sigma_min_pair, ExtremeEigen, DENSE_LIMIT};
pub use ldlt::{approx_ldlt, inertia_of_d, DBlock, Inertia, LdltFactors};
pub use lu::{approx_inverse, Lu};
pub use svd::{approx_svd, sym_eig, sym_eigenvalues, Svd};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("matrix is not square or shapes disagree")]
    NotSquare,
    #[error("non-positive pivot at index {index}")]
    NotPositiveDefinite { index: usize },
    #[error("zero pivot at index {index}")]
    Singular { index: usize },
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("symmetric indefinite factorization broke down")]
    Breakdown,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}
