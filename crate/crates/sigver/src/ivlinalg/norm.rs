//! Upper bounds on spectral norms of interval matrices.

use crate::dense::{norm2, DenseMatrix};
use crate::interval::rounding::dr;

use super::matrix::IntervalMatrix;
use super::product::{enclose_matvec, gram_product};
use super::spd::verify_spd;
use super::IvLinalgError;

/// Upward-rounded row sums of a nonnegative matrix.
pub(crate) fn row_sums_up(m: &DenseMatrix) -> Vec<f64> {
    (0..m.rows()).map(|i| dr::sum_up(m.row(i).iter().copied())).collect()
}

/// Upward-rounded column sums of a nonnegative matrix.
pub(crate) fn col_sums_up(m: &DenseMatrix) -> Vec<f64> {
    let mut s = vec![0.0; m.cols()];
    for i in 0..m.rows() {
        for (acc, &x) in s.iter_mut().zip(m.row(i)) {
            *acc = dr::add_up(*acc, x);
        }
    }
    s
}

/// Upward-rounded `M^T v` for nonnegative `M` and `v`.
pub(crate) fn t_mul_vec_up(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; m.cols()];
    for (i, &vi) in v.iter().enumerate() {
        for (acc, &x) in s.iter_mut().zip(m.row(i)) {
            *acc = dr::add_up(*acc, dr::mul_up(x, vi));
        }
    }
    s
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x))
}

/// `min(||N||_1, ||N||_inf)` for a nonnegative `N`, rounded up. Bounds
/// `||N||_2` when `N` is symmetric.
pub fn symmetric_norm_bound(m: &DenseMatrix) -> f64 {
    max_of(&row_sums_up(m)).min(max_of(&col_sums_up(m)))
}

/// `sqrt(max_i (N^T (N e))_i)` rounded up; bounds `||N||_2` for any
/// nonnegative `N`.
pub fn general_norm_bound(m: &DenseMatrix) -> f64 {
    let v = row_sums_up(m);
    let w = t_mul_vec_up(m, &v);
    dr::sqrt_up(max_of(&w))
}

/// Upper bound on `max ||X||_2` over all members of `m`.
///
/// Hermitian-flagged inputs use the symmetric bound on `mag(m)`; others use
/// the general one.
pub fn nrmbnd(m: &IntervalMatrix) -> f64 {
    let mag = m.mag();
    if m.is_hermitian() {
        symmetric_norm_bound(&mag)
    } else {
        general_norm_bound(&mag)
    }
}

/// Approximate dominant singular triple of a point matrix by power
/// iteration on `A^T A`. Returns `(sigma, v)` with `||v|| = 1`.
pub(crate) fn power_sigma_max(a: &DenseMatrix, iters: usize) -> (f64, Vec<f64>) {
    let n = a.cols();
    if n == 0 {
        return (0.0, vec![]);
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut sigma = 0.0;
    for _ in 0..iters {
        let w = a.t_mul_vec(&a.mul_vec(&v));
        let nw = norm2(&w);
        if nw == 0.0 || !nw.is_finite() {
            return (0.0, v);
        }
        let s_new = nw.sqrt();
        v = w.into_iter().map(|x| x / nw).collect();
        let done = (s_new - sigma).abs() <= 1e-13 * s_new;
        sigma = s_new;
        if done {
            break;
        }
    }
    (sigma, v)
}

/// Verified lower bound `||m x|| / ||x||` over all members.
pub fn norm_lower_bound(m: &IntervalMatrix, x: &[f64]) -> Result<f64, IvLinalgError> {
    let y = enclose_matvec(m, x)?;
    let ny = dr::sqrt_down(y.iter().fold(0.0, |acc, yi| {
        let g = yi.mig();
        dr::add_down(acc, dr::mul_down(g, g))
    }));
    let nx = dr::norm2_up(x.iter().copied());
    if nx == 0.0 {
        return Ok(0.0);
    }
    Ok(dr::div_down(ny, nx))
}

/// Two-sided enclosure `(lo, hi)` of `max ||X||_2` over all members.
///
/// The upper bound comes from proving `rho^2 I - M^T M` positive definite
/// for a slightly inflated power-iteration estimate `rho`. If that never
/// succeeds, the cheap [`nrmbnd`] is returned instead.
pub fn spectral_norm_enclosure(m: &IntervalMatrix) -> Result<(f64, f64), IvLinalgError> {
    let (est, v) = power_sigma_max(m.mid(), 300);
    let lo = norm_lower_bound(m, &v)?;
    let fallback = nrmbnd(m);
    if !(est > 0.0) || !est.is_finite() {
        return Ok((lo, fallback));
    }
    let gram = gram_product(m)?;
    for f in [1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 0.5, 1.0] {
        let rho = dr::mul_up(est, 1.0 + f);
        if rho >= fallback {
            break;
        }
        let rho2 = dr::mul_up(rho, rho);
        let c = gram.neg().add_diagonal(rho2);
        if verify_spd(&c)? {
            return Ok((lo, dr::sqrt_up(rho2).min(fallback)));
        }
    }
    Ok((lo, fallback))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivlinalg::matrix::Structure;

    #[test]
    fn diagonal_norm_bound_is_exact() {
        let d = IntervalMatrix::from_point(DenseMatrix::diag(&[1.0, -3.0, 2.0]))
            .with_structure(Structure::Hermitian)
            .unwrap();
        assert_eq!(nrmbnd(&d), 3.0);
        let g = IntervalMatrix::from_point(DenseMatrix::diag(&[1.0, -3.0, 2.0]));
        assert_eq!(nrmbnd(&g), 3.0);
    }

    #[test]
    fn general_bound_dominates_two_norm() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = nrmbnd(&IntervalMatrix::from_point(a.clone()));
        // ||A||_2 of [[1,2],[3,4]] is 5.4649857...
        assert!(b >= 5.464985704219043);
        let (lo, hi) = spectral_norm_enclosure(&IntervalMatrix::from_point(a)).unwrap();
        assert!(lo <= 5.464985704219043 && 5.464985704219043 <= hi);
        assert!(hi - lo < 1e-6);
    }
}
