//! Blocked floating-point Cholesky and triangular solves.
//!
//! Every computed entry is a sum of the same products as in the textbook
//! algorithm, only grouped differently, so the usual `gamma_{n+1}` backward
//! error bound of the Cholesky factor applies.

use faer::linalg::matmul::matmul;
use faer::{Accum, MatMut, MatRef, Par};

use crate::dense::{axpy, dot, DenseMatrix};

use super::ApproxError;

const BLOCK: usize = 64;

/// Upper-triangular `R` with `R^T R = A` for symmetric positive definite `A`.
///
/// Only the lower triangle of `a` is read. Fails on the first pivot that is
/// not strictly positive (or not finite).
pub fn cholesky_upper(a: &DenseMatrix) -> Result<DenseMatrix, ApproxError> {
    Ok(cholesky_lower(a)?.transpose())
}

/// Lower-triangular `L` with `L L^T = A`.
pub fn cholesky_lower(a: &DenseMatrix) -> Result<DenseMatrix, ApproxError> {
    if !a.is_square() {
        return Err(ApproxError::NotSquare);
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut kb = 0;
    while kb < n {
        let e = (kb + BLOCK).min(n);
        // diagonal block, left-looking within the block
        for j in kb..e {
            for i in j..e {
                let s = {
                    let (ri, rj) = (w.row(i), w.row(j));
                    w[(i, j)] - dot(&ri[kb..j], &rj[kb..j])
                };
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(ApproxError::NotPositiveDefinite { index: j });
                    }
                    w[(j, j)] = s.sqrt();
                } else {
                    w[(i, j)] = s / w[(j, j)];
                }
            }
        }
        if e == n {
            break;
        }
        // panel rows below: solve x L11^T = w_row
        for i in e..n {
            for j in kb..e {
                let s = {
                    let (ri, rj) = (w.row(i), w.row(j));
                    ri[j] - dot(&ri[kb..j], &rj[kb..j])
                };
                w[(i, j)] = s / w[(j, j)];
            }
        }
        // trailing update with one product
        let m = n - e;
        let panel = w.submatrix(e, kb, m, e - kb);
        {
            let full = MatMut::from_row_major_slice_mut(w.as_mut_slice(), n, n);
            let trailing = full.submatrix_mut(e, e, m, m);
            let p = MatRef::from_row_major_slice(panel.as_slice(), m, e - kb);
            matmul(trailing, Accum::Add, p, p.transpose(), -1.0, Par::Seq);
        }
        kb = e;
    }
    for i in 0..n {
        for j in i + 1..n {
            w[(i, j)] = 0.0;
        }
    }
    if !w.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    Ok(w)
}

/// Solves `L X = B` in place for lower-triangular `L`.
pub fn solve_lower_in_place(l: &DenseMatrix, b: &mut DenseMatrix) {
    let n = l.rows();
    assert_eq!(b.rows(), n, "dimension mismatch");
    let m = b.cols();
    let mut kb = 0;
    while kb < n {
        let e = (kb + BLOCK).min(n);
        for i in kb..e {
            let mut row = b.row(i).to_vec();
            for k in kb..i {
                let lik = l[(i, k)];
                if lik != 0.0 {
                    axpy(-lik, b.row(k), &mut row);
                }
            }
            let d = l[(i, i)];
            row.iter_mut().for_each(|x| *x /= d);
            b.row_mut(i).copy_from_slice(&row);
        }
        if e < n {
            let lp = l.submatrix(e, kb, n - e, e - kb);
            let xb = b.submatrix(kb, 0, e - kb, m);
            let full = MatMut::from_row_major_slice_mut(b.as_mut_slice(), n, m);
            matmul(full.submatrix_mut(e, 0, n - e, m), Accum::Add, lp.as_ref(), xb.as_ref(), -1.0, Par::Seq);
        }
        kb = e;
    }
}

/// Solves `U X = B` in place for upper-triangular `U`.
pub fn solve_upper_in_place(u: &DenseMatrix, b: &mut DenseMatrix) {
    let n = u.rows();
    assert_eq!(b.rows(), n, "dimension mismatch");
    let m = b.cols();
    let mut e = n;
    while e > 0 {
        let kb = e.saturating_sub(BLOCK);
        for i in (kb..e).rev() {
            let mut row = b.row(i).to_vec();
            for k in i + 1..e {
                let uik = u[(i, k)];
                if uik != 0.0 {
                    axpy(-uik, b.row(k), &mut row);
                }
            }
            let d = u[(i, i)];
            row.iter_mut().for_each(|x| *x /= d);
            b.row_mut(i).copy_from_slice(&row);
        }
        if kb > 0 {
            let up = u.submatrix(0, kb, kb, e - kb);
            let xb = b.submatrix(kb, 0, e - kb, m);
            let full = MatMut::from_row_major_slice_mut(b.as_mut_slice(), n, m);
            matmul(full.submatrix_mut(0, 0, kb, m), Accum::Add, up.as_ref(), xb.as_ref(), -1.0, Par::Seq);
        }
        e = kb;
    }
}

/// `R^{-T} A R^{-1}` for upper-triangular `R`, symmetrized when `A` is.
pub fn congruence_inverse(r: &DenseMatrix, a: &DenseMatrix) -> DenseMatrix {
    let rt = r.transpose();
    let mut y = a.clone();
    solve_lower_in_place(&rt, &mut y); // R^{-T} A
    let mut yt = y.transpose();
    solve_lower_in_place(&rt, &mut yt); // R^{-T} (R^{-T} A)^T = (R^{-T} A R^{-1})^T
    yt.transpose()
}

/// Solves `R x = b` for one right-hand side.
pub fn solve_upper_vec(r: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let mut m = DenseMatrix::from_vec(b.len(), 1, b.to_vec());
    solve_upper_in_place(r, &mut m);
    m.into_vec()
}

/// Solves `R^T x = b` for upper-triangular `R`.
pub fn solve_upper_transpose_vec(r: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = r.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= r[(k, i)] * x[k];
        }
        x[i] = s / r[(i, i)];
    }
    x
}
