use faer::linalg::solvers::SelfAdjointEigen;
use faer::Side;

use crate::dense::DenseMatrix;

use super::ApproxError;

/// Approximate SVD `A = U diag(s) V^T` with `s` non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

pub fn approx_svd(a: &DenseMatrix) -> Result<Svd, ApproxError> {
    if !a.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    let f = a.as_ref().svd().map_err(|_| ApproxError::NoConvergence("svd"))?;
    let s: Vec<f64> = (0..a.rows().min(a.cols())).map(|i| f.S()[i]).collect();
    Ok(Svd {
        u: DenseMatrix::from_faer(f.U()),
        s,
        v: DenseMatrix::from_faer(f.V()),
    })
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eig(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix), ApproxError> {
    if !a.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    let f = SelfAdjointEigen::new(a.as_ref(), Side::Lower).map_err(|_| ApproxError::NoConvergence("eig"))?;
    let vals = (0..a.rows()).map(|i| f.S()[i]).collect();
    Ok((vals, DenseMatrix::from_faer(f.U())))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>, ApproxError> {
    if !a.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    a.as_ref()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| ApproxError::NoConvergence("eig"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_of_diagonal_is_sorted() {
        let a = DenseMatrix::diag(&[1.0, -3.0, 2.0]);
        let f = approx_svd(&a).unwrap();
        assert_eq!(f.s.len(), 3);
        assert!((f.s[0] - 3.0).abs() < 1e-15 && (f.s[2] - 1.0).abs() < 1e-15);
        let back = f.u.matmul(&DenseMatrix::diag(&f.s)).matmul_t(&f.v);
        assert!(back.sub(&a).max_abs() < 1e-14);
    }

    #[test]
    fn symmetric_eigenvalues_ascend() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let v = sym_eigenvalues(&a).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        let (vals, vecs) = sym_eig(&a).unwrap();
        let x = vecs.column(0);
        let ax = a.mul_vec(&x);
        assert!((ax[0] - vals[0] * x[0]).abs() < 1e-14);
    }
}
