use crate::interval::rounding::dr;
use crate::interval::RealInterval;
use crate::ivlinalg::{enclose_matvec, lower_bound_sigma_min_spd, IntervalMatrix};

use super::VerifyError;

/// Verified upper bound on `sigma_min` from an approximate singular vector
/// pair `xhat = (v; u)` of the augmented pencil.
///
/// For any shift `mu`, some eigenvalue `+-sigma_i` of
/// `([[0, A^T], [A, 0]], diag(B, B))` lies within
/// `||A_bar x - mu B_bar x|| / (sqrt(lambda_min(B)) sqrt(x^T B_bar x))` of
/// `mu`, so `sigma_min <= |mu| + that`. The bound is evaluated at `lower`
/// and at the Rayleigh quotient of `xhat`; the smaller one is returned.
pub fn upper_bound_sigma_min(
    a: &IntervalMatrix,
    b: &IntervalMatrix,
    lower: f64,
    xhat: &[f64],
) -> Result<f64, VerifyError> {
    let lam_b = lower_bound_sigma_min_spd(b)?;
    if !(lam_b > 0.0) {
        return Err(VerifyError::NotProvablyPositiveDefinite);
    }
    upper_bound_with_weight_bound(a, b, lower, xhat, lam_b)
}

pub(crate) fn upper_bound_with_weight_bound(
    a: &IntervalMatrix,
    b: &IntervalMatrix,
    lower: f64,
    xhat: &[f64],
    lam_b: f64,
) -> Result<f64, VerifyError> {
    let n = a.rows();
    if xhat.len() != 2 * n {
        return Err(VerifyError::DimensionMismatch);
    }
    let (v, u) = xhat.split_at(n);
    let atu = enclose_matvec(&a.transpose(), u)?;
    let av = enclose_matvec(a, v)?;
    let bv = enclose_matvec(b, v)?;
    let bu = enclose_matvec(b, u)?;
    let bx: Vec<RealInterval> = bv.iter().chain(&bu).copied().collect();
    let ax: Vec<RealInterval> = atu.into_iter().chain(av).collect();
    let xbx = xhat
        .iter()
        .zip(&bx)
        .fold(RealInterval::zero(), |acc, (&x, y)| acc + y.scale(x));
    if !(xbx.lo() > 0.0) {
        return Err(VerifyError::NotProvablyPositiveDefinite);
    }
    let denom = dr::mul_down(dr::sqrt_down(lam_b), dr::sqrt_down(xbx.lo()));
    let bound_at = |mu: f64| -> f64 {
        let rn = dr::norm2_up(ax.iter().zip(&bx).map(|(p, q)| (*p - q.scale(mu)).mag()));
        dr::add_up(mu.abs(), dr::div_up(rn, denom))
    };
    // Rayleigh quotient x^T A_bar x / x^T B_bar x of the midpoint data
    let xax: f64 = xhat.iter().zip(&ax).map(|(x, y)| x * y.mid_rad().0).sum();
    let rq = xax / xbx.mid_rad().0;
    let mut best = bound_at(lower);
    if rq.is_finite() {
        best = best.min(bound_at(rq.abs()));
    }
    if !best.is_finite() {
        return Err(VerifyError::NotProvablyPositiveDefinite);
    }
    Ok(best)
}
