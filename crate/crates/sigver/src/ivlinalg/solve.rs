use crate::approx::approx_inverse;
use crate::interval::rounding::dr;

use super::matrix::IntervalMatrix;
use super::norm::nrmbnd;
use super::product::{identity_minus, imm_multiply};
use super::IvLinalgError;

/// Encloses `{ A^{-1} C : A in a, C in c }`.
///
/// With an approximate inverse `X`, approximate solution `S0 = X mid(c)`,
/// residual `Z = C - A S0` and `E = I - X A`, every solution satisfies
/// `S = S0 + X Z + E (I - E)^{-1} X Z`. The last term is bounded entrywise
/// by `beta / (1 - beta) ||X Z||_2` where `beta >= ||E||_2`; `beta < 1` also
/// proves every `A` nonsingular.
pub fn enclose_solve(a: &IntervalMatrix, c: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    if !a.is_square() || c.rows() != a.rows() {
        return Err(IvLinalgError::DimensionMismatch {
            expected: (a.rows(), c.cols()),
            found: c.shape(),
        });
    }
    let x = approx_inverse(a.mid()).map_err(|_| IvLinalgError::NotVerifiablyNonsingular)?;
    let s0 = x.matmul(c.mid());
    if !s0.is_finite() {
        return Err(IvLinalgError::NotVerifiablyNonsingular);
    }
    let xi = IntervalMatrix::from_point(x);
    let s0i = IntervalMatrix::from_point(s0);
    let e = identity_minus(&imm_multiply(&xi, a)?)?;
    let beta = nrmbnd(&e);
    if !(beta < 1.0) {
        return Err(IvLinalgError::NotVerifiablyNonsingular);
    }
    let z = c.sub(&imm_multiply(a, &s0i)?)?;
    let xz = imm_multiply(&xi, &z)?;
    let corr = dr::mul_up(dr::div_up(beta, dr::sub_down(1.0, beta)), nrmbnd(&xz));
    Ok(s0i.add(&xz)?.inflated(corr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    #[test]
    fn encloses_exact_inverse() {
        let a = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![2.0, 3.0]]);
        let s = enclose_solve(&IntervalMatrix::from_point(a), &IntervalMatrix::identity(2)).unwrap();
        let inv = DenseMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.2, 0.4]]);
        // 0.3 etc. are not representable: check enclosure of nearest doubles loosely
        for i in 0..2 {
            for j in 0..2 {
                let e = s.entry(i, j);
                assert!(e.lo() <= inv[(i, j)] + 1e-16 && e.hi() >= inv[(i, j)] - 1e-16);
                assert!(e.width() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_fails() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(
            enclose_solve(&IntervalMatrix::from_point(a), &IntervalMatrix::identity(2)),
            Err(IvLinalgError::NotVerifiablyNonsingular)
        );
    }
}
