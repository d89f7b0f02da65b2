use faer::linalg::solvers::{DenseSolveCore, PartialPivLu, Solve};
use faer::{Mat, MatRef};

use crate::dense::DenseMatrix;

use super::ApproxError;

/// LU factorization with partial pivoting (faer backed).
pub struct Lu {
    inner: PartialPivLu<f64>,
    n: usize,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Result<Self, ApproxError> {
        if !a.is_square() {
            return Err(ApproxError::NotSquare);
        }
        if !a.is_finite() {
            return Err(ApproxError::NonFinite);
        }
        let inner = a.as_ref().partial_piv_lu();
        let u = inner.U();
        let n = a.rows();
        for i in 0..n {
            if u[(i, i)] == 0.0 {
                return Err(ApproxError::Singular { index: i });
            }
        }
        Ok(Self { inner, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `A^{-1} b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut m = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        self.inner.solve_in_place(m.as_mut());
        (0..b.len()).map(|i| m[(i, 0)]).collect()
    }

    /// `A^{-T} b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let mut m = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        self.inner.solve_transpose_in_place(m.as_mut());
        (0..b.len()).map(|i| m[(i, 0)]).collect()
    }

    /// `A^{-1} B` for a block of right-hand sides.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        let mut m = Mat::from_fn(b.rows(), b.cols(), |i, j| b[(i, j)]);
        self.inner.solve_in_place(m.as_mut());
        DenseMatrix::from_faer(m.as_ref())
    }

    pub fn inverse(&self) -> DenseMatrix {
        let inv: Mat<f64> = self.inner.inverse();
        let r: MatRef<'_, f64> = inv.as_ref();
        DenseMatrix::from_faer(r)
    }
}

/// Approximate inverse `X ~ A^{-1}`.
pub fn approx_inverse(a: &DenseMatrix) -> Result<DenseMatrix, ApproxError> {
    let x = Lu::new(a)?.inverse();
    if !x.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let a = DenseMatrix::from_rows(&[vec![4.0, 7.0], vec![2.0, 6.0]]);
        let x = approx_inverse(&a).unwrap();
        let p = a.matmul(&x);
        assert!(p.sub(&DenseMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn solves_and_transpose_solves() {
        let a = DenseMatrix::from_fn(6, 6, |i, j| if i == j { 5.0 } else { (i + 2 * j) as f64 * 0.1 });
        let lu = Lu::new(&a).unwrap();
        let b = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x = lu.solve(&b);
        let r = a.mul_vec(&x);
        assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-12));
        let y = lu.solve_transpose(&b);
        let r = a.t_mul_vec(&y);
        assert!(r.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-12));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(Lu::new(&a), Err(ApproxError::Singular { .. })));
    }
}
