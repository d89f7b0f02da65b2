use crate::interval::rounding::dr;
use crate::ivlinalg::{enclose_solve, imm_multiply, interval_cholesky, spectral_norm_enclosure, IntervalMatrix};

use super::{BoundStatus, Method, SigmaMinBound, VerifyError};

/// Interval Cholesky `B = R^T R`, enclosure of `A^{-1} R^T`, then a two-sided
/// spectral norm enclosure of `R A^{-1} R^T`, whose norm is `1 / sigma_min`.
pub fn method_p(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<SigmaMinBound, VerifyError> {
    super::check_pencil(a, b)?;
    let r = interval_cholesky(b)?;
    let s = enclose_solve(a, &r.transpose())?;
    let m = imm_multiply(&r, &s)?;
    let (rho_lo, rho_hi) = spectral_norm_enclosure(&m)?;
    let lower = if rho_hi.is_finite() && rho_hi > 0.0 {
        dr::div_down(1.0, rho_hi)
    } else {
        0.0
    };
    let upper = (rho_lo > 0.0).then(|| dr::div_up(1.0, rho_lo));
    Ok(SigmaMinBound {
        method: Method::P,
        status: BoundStatus::Verified,
        lower,
        upper,
        ..SigmaMinBound::empty(Method::P)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;
    use crate::ivlinalg::Structure;

    #[test]
    fn diagonal_pencil() {
        // sigma_i of R^{-T} A R^{-1} with A = diag(2, 6), B = diag(1, 4): 2 and 1.5
        let a = IntervalMatrix::from_point(DenseMatrix::diag(&[2.0, 6.0]));
        let b = IntervalMatrix::from_point(DenseMatrix::diag(&[1.0, 4.0]))
            .with_structure(Structure::Hermitian)
            .unwrap();
        let r = method_p(&a, &b).unwrap();
        assert!(r.lower <= 1.5 && 1.5 <= r.upper.unwrap());
        assert!(r.upper.unwrap() - r.lower < 1e-10);
    }

    #[test]
    fn indefinite_weight_fails_cleanly() {
        let a = IntervalMatrix::identity(2).with_structure(Structure::General).unwrap();
        let b = IntervalMatrix::from_point(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]))
            .with_structure(Structure::Hermitian)
            .unwrap();
        assert!(matches!(method_p(&a, &b), Err(VerifyError::NotProvablyPositiveDefinite)));
    }
}
