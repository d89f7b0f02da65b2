//! Enclosures of all singular values from approximate B-SVD factors.

use crate::approx::{bsvd_decompose, BsvdFactors};
use crate::dense::DenseMatrix;
use crate::interval::rounding::dr;
use crate::ivlinalg::{identity_minus, imm_multiply, nrmbnd, IntervalMatrix};

use super::{DeltaVariant, SingularValueEnclosure, VerifyError};

/// Columns of `m` scaled by `s`, with rounding errors absorbed in the radii.
fn scale_columns(m: &IntervalMatrix, s: &[f64]) -> IntervalMatrix {
    let (rows, cols) = m.shape();
    let mut mid = DenseMatrix::zeros(rows, cols);
    let mut rad = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let (p, e) = crate::ivlinalg::two_prod(m.mid()[(i, j)], s[j]);
            mid[(i, j)] = p;
            rad[(i, j)] = dr::add_up(dr::mul_up(m.rad()[(i, j)], s[j].abs()), e);
        }
    }
    IntervalMatrix::from_mid_rad(mid, rad).expect("finite scaled matrix")
}

/// Verified `alpha`, `beta` and the three residual bounds for given factors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Defects {
    pub alpha: f64,
    pub beta: f64,
    pub delta: [f64; 3],
}

pub(crate) fn defects(a: &IntervalMatrix, b: &IntervalMatrix, f: &BsvdFactors) -> Result<Defects, VerifyError> {
    let n = a.rows();
    if f.u_b.shape() != (n, n) || f.v_b.shape() != (n, n) || f.sigma.len() != n {
        return Err(VerifyError::DimensionMismatch);
    }
    let u = IntervalMatrix::from_point(f.u_b.clone());
    let v = IntervalMatrix::from_point(f.v_b.clone());
    let ut = IntervalMatrix::from_point(f.u_b.transpose());
    let vt = IntervalMatrix::from_point(f.v_b.transpose());
    let bu = imm_multiply(b, &u)?;
    let bv = imm_multiply(b, &v)?;
    // U^T B U - I is symmetric for every symmetric B
    let gu = identity_minus(&imm_multiply(&ut, &bu)?)?.symmetrized()?;
    let gv = identity_minus(&imm_multiply(&vt, &bv)?)?.symmetrized()?;
    let alpha = nrmbnd(&gu);
    let beta = nrmbnd(&gv);
    let sig = &f.sigma;
    let sigma_max = sig.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    // residual A V - B U Sigma, shared by all variants
    let av = imm_multiply(a, &v)?;
    let res = av.sub(&scale_columns(&bu, sig))?;
    let ut_res = imm_multiply(&ut, &res)?;
    // U^T A V - Sigma = U^T (A V - B U Sigma) - (I - U^T B U) Sigma; the
    // rewritten form overestimates by about cond(B) once B is ill-conditioned,
    // so the direct product is bounded as well and the smaller bound kept
    let d1_shared = nrmbnd(&ut_res.sub(&scale_columns(&gu, sig))?);
    let sigma_diag = IntervalMatrix::from_point(DenseMatrix::diag(sig));
    let d1_direct = nrmbnd(&imm_multiply(&ut, &av)?.sub(&sigma_diag)?);
    let a_sig = dr::mul_up(alpha, sigma_max);
    let d1 = d1_shared.min(d1_direct);
    let d2 = dr::add_up(nrmbnd(&ut_res), a_sig);
    let d3 = dr::add_up(dr::mul_up(nrmbnd(&ut), nrmbnd(&res)), a_sig);
    Ok(Defects {
        alpha,
        beta,
        delta: [d1, d2, d3],
    })
}

/// Non-increasing `|sigma_hat|`, the order Weyl's inequality pairs with.
fn sorted_abs(s: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = s.iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Enclosures `sigma_i in [(s_i - delta) / sqrt((1+alpha)(1+beta)),
/// (s_i + delta) / sqrt((1-alpha)(1-beta))]` with outward rounding.
pub(crate) fn enclosure_from_defects(
    sigma_hat: &[f64],
    alpha: f64,
    beta: f64,
    delta: f64,
    variant: DeltaVariant,
) -> Result<SingularValueEnclosure, VerifyError> {
    if !(alpha < 1.0 && beta < 1.0) || !delta.is_finite() {
        return Err(VerifyError::OrthogonalityDefectTooLarge { alpha, beta });
    }
    let s = sorted_abs(sigma_hat);
    let den_lo = dr::sqrt_up(dr::mul_up(dr::add_up(1.0, alpha), dr::add_up(1.0, beta)));
    let den_hi = dr::sqrt_down(dr::mul_down(dr::sub_down(1.0, alpha), dr::sub_down(1.0, beta)));
    if !(den_hi > 0.0) {
        return Err(VerifyError::OrthogonalityDefectTooLarge { alpha, beta });
    }
    let lower = s
        .iter()
        .map(|&x| {
            let num = dr::sub_down(x, delta);
            if num <= 0.0 {
                0.0
            } else {
                dr::div_down(num, den_lo)
            }
        })
        .collect();
    let upper = s.iter().map(|&x| dr::div_up(dr::add_up(x, delta), den_hi)).collect();
    Ok(SingularValueEnclosure {
        lower,
        upper,
        alpha,
        beta,
        delta,
        delta_variant: variant,
        sigma_hat: s,
    })
}

/// Verified enclosures of all singular values of the real pencil `(a, b)`
/// from approximate factors.
pub fn verify_all_singular_values(
    a: &IntervalMatrix,
    b: &IntervalMatrix,
    factors: &BsvdFactors,
    variant: DeltaVariant,
) -> Result<SingularValueEnclosure, VerifyError> {
    super::check_pencil(a, b)?;
    let d = defects(a, b, factors)?;
    let delta = d.delta[variant.index()];
    enclosure_from_defects(&factors.sigma, d.alpha, d.beta, delta, variant)
}

/// Computes the factors from the midpoints, then verifies them.
pub fn method_d(a: &IntervalMatrix, b: &IntervalMatrix, variant: DeltaVariant) -> Result<SingularValueEnclosure, VerifyError> {
    super::check_pencil(a, b)?;
    let f = bsvd_decompose(a.mid(), b.mid())?;
    verify_all_singular_values(a, b, &f, variant)
}

/// Enclosures of the singular values of `R A^{-1} R^H` (non-increasing),
/// the reciprocals of the pencil's singular values, from the same
/// `alpha`, `beta`, `delta`.
pub fn invert_enclosure(enc: &SingularValueEnclosure) -> Result<SingularValueEnclosure, VerifyError> {
    let (alpha, beta, delta) = (enc.alpha, enc.beta, enc.delta);
    let num_lo = dr::sqrt_down(dr::mul_down(dr::sub_down(1.0, alpha), dr::sub_down(1.0, beta)));
    let num_hi = dr::sqrt_up(dr::mul_up(dr::add_up(1.0, alpha), dr::add_up(1.0, beta)));
    let n = enc.sigma_hat.len();
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for j in (0..n).rev() {
        let s = enc.sigma_hat[j];
        let den = dr::sub_down(s, delta);
        if !(den > 0.0) {
            return Err(VerifyError::NonpositiveLowerBound { index: j });
        }
        lower.push(dr::div_down(num_lo, dr::add_up(s, delta)));
        upper.push(dr::div_up(num_hi, den));
    }
    let mut sigma_hat = enc.sigma_hat.clone();
    sigma_hat.reverse();
    Ok(SingularValueEnclosure {
        lower,
        upper,
        alpha,
        beta,
        delta,
        delta_variant: enc.delta_variant,
        sigma_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivlinalg::Structure;

    #[test]
    fn identity_pencil_is_exact() {
        let a = IntervalMatrix::identity(4).with_structure(Structure::General).unwrap();
        let b = IntervalMatrix::identity(4);
        let e = method_d(&a, &b, DeltaVariant::D1).unwrap();
        for i in 0..4 {
            assert!(e.lower[i] <= 1.0 && 1.0 <= e.upper[i]);
            assert!(e.upper[i] - e.lower[i] < 1e-14);
        }
    }

    #[test]
    fn inversion_matches_corollary_formulas() {
        let enc = enclosure_from_defects(&[3.0, 2.0, 1.0], 1e-10, 2e-10, 1e-9, DeltaVariant::D2).unwrap();
        let inv = invert_enclosure(&enc).unwrap();
        // largest reciprocal comes from the smallest singular value
        let want_hi = dr::div_up(
            dr::sqrt_up(dr::mul_up(dr::add_up(1.0, 1e-10), dr::add_up(1.0, 2e-10))),
            dr::sub_down(1.0, 1e-9),
        );
        assert_eq!(inv.upper[0], want_hi);
        assert!(inv.lower[2] <= 1.0 / 3.0 && 1.0 / 3.0 <= inv.upper[2]);
    }

    #[test]
    fn nonpositive_lower_bound_is_reported() {
        let enc = enclosure_from_defects(&[1.0, 1e-12], 1e-12, 1e-12, 1e-9, DeltaVariant::D1).unwrap();
        assert_eq!(enc.lower[1], 0.0);
        assert!(matches!(invert_enclosure(&enc), Err(VerifyError::NonpositiveLowerBound { index: 1 })));
    }

    #[test]
    fn large_defect_is_rejected() {
        assert!(matches!(
            enclosure_from_defects(&[1.0], 1.5, 0.0, 0.0, DeltaVariant::D1),
            Err(VerifyError::OrthogonalityDefectTooLarge { .. })
        ));
    }
}
