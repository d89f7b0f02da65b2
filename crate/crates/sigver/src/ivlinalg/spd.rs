//! Verified positive definiteness of interval matrices.

use crate::approx::{approx_lambda_min, cholesky_lower};
use crate::dense::DenseMatrix;
use crate::interval::rounding::dr;
use crate::interval::{ETA, UNIT_ROUNDOFF};

use super::matrix::IntervalMatrix;
use super::norm::{col_sums_up, symmetric_norm_bound};
use super::product::gamma;
use super::IvLinalgError;

/// Proves that every symmetric member of `m` is positive definite.
///
/// Returns `Ok(false)` when the proof does not go through, which says
/// nothing either way.
pub fn verify_spd(m: &IntervalMatrix) -> Result<bool, IvLinalgError> {
    verify_spd_shifted(m, 0.0)
}

/// Proves `X - shift I` positive definite for every symmetric member `X`.
///
/// A floating Cholesky factor `L` of `mid(m) - c I` is computed for a
/// shift `c` exceeding `shift + ||rad(m)||` plus a bound on the rounding
/// errors of the factorization (`gamma_{n+1} || |L| |L|^T ||`). When it
/// exists, Weyl's inequality yields the claim.
pub fn verify_spd_shifted(m: &IntervalMatrix, shift: f64) -> Result<bool, IvLinalgError> {
    if !m.is_hermitian() {
        return Err(IvLinalgError::NotHermitian);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(true);
    }
    let mid = m.mid();
    if !mid.is_finite() || m.rad().as_slice().iter().any(|r| !r.is_finite()) || !shift.is_finite() {
        return Ok(false);
    }
    let rho_rad = if m.is_point() { 0.0 } else { symmetric_norm_bound(m.rad()) };
    let base = dr::add_up(shift, rho_rad);
    let g = gamma(n + 1);
    let row_abs_max = (0..n)
        .map(|i| mid.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut extra = dr::mul_up(gamma(n + 3), row_abs_max);
    for _ in 0..3 {
        let c = dr::add_up(base, extra);
        let mut shifted = mid.clone();
        let mut diag_max = 0.0f64;
        for i in 0..n {
            let v = mid[(i, i)] - c;
            shifted[(i, i)] = v;
            diag_max = diag_max.max(v.abs());
        }
        let l = match cholesky_lower(&shifted) {
            Ok(l) => l,
            Err(_) => return Ok(false),
        };
        let delta = rounding_bound(&l, g);
        let f_bound = dr::mul_up(UNIT_ROUNDOFF, diag_max);
        let need = dr::add_up(dr::add_up(base, delta), f_bound);
        if c >= need {
            return Ok(true);
        }
        extra = dr::mul_up(2.0, dr::add_up(delta, f_bound));
    }
    Ok(false)
}

/// `gamma ||(|L| |L|^T)||_inf` plus an underflow allowance, rounded up.
fn rounding_bound(l: &DenseMatrix, g: f64) -> f64 {
    let n = l.rows();
    let abs_l = l.abs();
    // v = |L|^T e, w = |L| v
    let v = col_sums_up(&abs_l);
    let mut wmax = 0.0f64;
    let mut lmax = 0.0f64;
    for i in 0..n {
        let row = abs_l.row(i);
        let mut s = 0.0;
        for k in 0..=i {
            s = dr::add_up(s, dr::mul_up(row[k], v[k]));
        }
        wmax = wmax.max(s);
        lmax = lmax.max(row[i]);
    }
    let nf = n as f64;
    let under = dr::mul_up(dr::mul_up(nf, dr::add_up(nf + 1.0, lmax)), ETA);
    dr::add_up(dr::mul_up(g, wmax), under)
}

/// Verified lower bound on the smallest eigenvalue of every symmetric
/// member of `b`, or `0.0` if none could be proven.
///
/// Trial shifts start just below an approximate eigenvalue and decrease
/// geometrically until one is certified.
pub fn lower_bound_sigma_min_spd(b: &IntervalMatrix) -> Result<f64, IvLinalgError> {
    if !b.is_hermitian() {
        return Err(IvLinalgError::NotHermitian);
    }
    let lam = match approx_lambda_min(b.mid()) {
        Ok(l) => l,
        Err(_) => return Ok(0.0),
    };
    if !(lam > 0.0) || !lam.is_finite() {
        return Ok(0.0);
    }
    for f in [1.0 - 1e-3, 1.0 - 1e-2, 0.9, 0.5, 0.25, 0.1, 0.01, 1e-4] {
        let s = lam * f;
        if verify_spd_shifted(b, s)? {
            return Ok(s);
        }
    }
    Ok(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivlinalg::matrix::Structure;

    fn herm(m: DenseMatrix) -> IntervalMatrix {
        IntervalMatrix::from_point(m).with_structure(Structure::Hermitian).unwrap()
    }

    #[test]
    fn identity_is_spd() {
        assert!(verify_spd(&IntervalMatrix::identity(5)).unwrap());
    }

    #[test]
    fn indefinite_is_not_verified() {
        let m = herm(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]));
        assert!(!verify_spd(&m).unwrap());
    }

    #[test]
    fn nearly_singular_is_not_verified() {
        let m = herm(DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0 + 1e-17]]));
        assert!(!verify_spd(&m).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        let s = lower_bound_sigma_min_spd(&IntervalMatrix::identity(4)).unwrap();
        assert!(s > 0.9 && s <= 1.0);
        let d = herm(DenseMatrix::diag(&[4.0, 9.0]));
        let s = lower_bound_sigma_min_spd(&d).unwrap();
        assert!(s > 3.9 && s <= 4.0);
    }

    #[test]
    fn non_hermitian_flag_is_an_error() {
        let m = IntervalMatrix::from_point(DenseMatrix::identity(2));
        assert_eq!(verify_spd(&m), Err(IvLinalgError::NotHermitian));
    }
}
