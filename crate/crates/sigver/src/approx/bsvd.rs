use crate::dense::DenseMatrix;

use super::cholesky::{cholesky_upper, congruence_inverse, solve_upper_in_place};
use super::svd::approx_svd;
use super::ApproxError;

/// Approximate B-SVD factors: `A V_B ~ B U_B diag(sigma)`,
/// `U_B^T B U_B ~ I`, `V_B^T B V_B ~ I`, `sigma` non-increasing.
#[derive(Debug, Clone)]
pub struct BsvdFactors {
    pub u_b: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v_b: DenseMatrix,
}

/// Computes the B-SVD through the SVD of `R^{-T} A R^{-1}` with `B = R^T R`.
pub fn bsvd_decompose(a: &DenseMatrix, b: &DenseMatrix) -> Result<BsvdFactors, ApproxError> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(ApproxError::NotSquare);
    }
    let r = cholesky_upper(b)?;
    let m = congruence_inverse(&r, a);
    let svd = approx_svd(&m)?;
    let mut u_b = svd.u;
    let mut v_b = svd.v;
    solve_upper_in_place(&r, &mut u_b);
    solve_upper_in_place(&r, &mut v_b);
    if !u_b.is_finite() || !v_b.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    Ok(BsvdFactors {
        u_b,
        sigma: svd.s,
        v_b,
    })
}
