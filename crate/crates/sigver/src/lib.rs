//! Verified bounds for the singular values of `R^{-H} A R^{-1}` where
//! `B = R^H R` is Hermitian positive definite.

pub mod approx;
pub mod dense;
pub mod interval;
pub mod ivlinalg;
pub mod matgen;
pub mod mm;
pub mod oracle;
pub mod report;
pub mod verify;

pub use dense::DenseMatrix;
