//! Rigorous enclosures of matrix products.
//!
//! The midpoint is one floating-point product; the radius collects the input
//! radii plus an a-priori rounding bound `gamma_k |A||B|` evaluated by
//! nonnegative floating products whose own error is bounded the same way.

use crate::dense::{gemm, DenseMatrix};
use crate::interval::rounding::dr;
use crate::interval::{RealInterval, ETA, UNIT_ROUNDOFF};

use super::matrix::{IntervalMatrix, Structure};
use super::IvLinalgError;

/// Upper bound on `k u / (1 - k u)`.
///
/// # Panics
/// Panics when `k u >= 1/2`, where the bound is meaningless.
pub fn gamma(k: usize) -> f64 {
    let ku = dr::mul_up(k as f64, UNIT_ROUNDOFF);
    assert!(ku < 0.5, "dimension {k} too large for a-priori rounding bounds");
    dr::div_up(ku, dr::sub_down(1.0, ku))
}

/// Upper bound of an exact nonnegative length-`k` sum whose floating value is `t`.
#[inline]
pub(crate) fn nonneg_exact_bound(t: f64, k: usize, g: f64) -> f64 {
    let keta = dr::mul_up(k as f64, ETA);
    dr::div_up(dr::add_up(t, keta), dr::sub_down(1.0, g))
}

fn finish_radius(t: &DenseMatrix, k: usize) -> DenseMatrix {
    let g = gamma(k);
    let keta = dr::mul_up(k as f64, ETA);
    t.map(|x| dr::add_up(nonneg_exact_bound(x, k, g), keta))
}

/// Enclosure of the exact product of two point matrices.
pub fn point_product(a: &DenseMatrix, b: &DenseMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    imm_multiply(&IntervalMatrix::from_point(a.clone()), &IntervalMatrix::from_point(b.clone()))
}

/// Enclosure of `{ X Y : X in a, Y in b }`.
pub fn imm_multiply(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    if a.cols() != b.rows() {
        return Err(IvLinalgError::DimensionMismatch {
            expected: (a.cols(), b.cols()),
            found: b.shape(),
        });
    }
    let k = a.cols();
    let (m, n) = (a.rows(), b.cols());
    if k == 0 {
        return Ok(IntervalMatrix::zeros(m, n));
    }
    let g = gamma(k);
    let mid = gemm(a.mid(), false, b.mid(), false);
    if !mid.is_finite() {
        return Err(IvLinalgError::NonFinite);
    }
    let abs_bm = b.mid().abs();
    let rad = if b.is_point() {
        // (g |Am| + Ar) |Bm|
        let w = a.mid().zip_map(a.rad(), |am, ar| dr::add_up(dr::mul_up(g, am.abs()), ar));
        finish_radius(&gemm(&w, false, &abs_bm, false), k)
    } else if a.is_point() {
        // |Am| (g |Bm| + Br)
        let w = b.mid().zip_map(b.rad(), |bm, br| dr::add_up(dr::mul_up(g, bm.abs()), br));
        finish_radius(&gemm(&a.mid().abs(), false, &w, false), k)
    } else {
        // |Am| (g |Bm| + Br) + Ar (|Bm| + Br)
        let w1 = b.mid().zip_map(b.rad(), |bm, br| dr::add_up(dr::mul_up(g, bm.abs()), br));
        let w2 = b.mid().zip_map(b.rad(), |bm, br| dr::add_up(bm.abs(), br));
        let t1 = gemm(&a.mid().abs(), false, &w1, false);
        let t2 = gemm(a.rad(), false, &w2, false);
        let r1 = finish_radius(&t1, k);
        let r2 = finish_radius(&t2, k);
        r1.zip_map(&r2, dr::add_up)
    };
    IntervalMatrix::from_mid_rad(mid, rad)
}

/// Enclosure of `A^T A` flagged Hermitian.
pub fn gram_product(a: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    imm_multiply(&a.transpose(), a)?.symmetrized()
}

/// Entrywise interval evaluation of the product; slow reference used to
/// cross-check the midpoint-radius kernel.
pub fn imm_multiply_reference(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    if a.cols() != b.rows() {
        return Err(IvLinalgError::DimensionMismatch {
            expected: (a.cols(), b.cols()),
            found: b.shape(),
        });
    }
    let k = a.cols();
    Ok(IntervalMatrix::from_intervals(a.rows(), b.cols(), |i, j| {
        (0..k).fold(RealInterval::zero(), |acc, l| acc + a.entry(i, l) * b.entry(l, j))
    }))
}

/// Interval vector `a x` for a point vector `x`.
pub fn enclose_matvec(a: &IntervalMatrix, x: &[f64]) -> Result<Vec<RealInterval>, IvLinalgError> {
    let xm = IntervalMatrix::from_point(DenseMatrix::from_vec(x.len(), 1, x.to_vec()));
    let y = imm_multiply(a, &xm)?;
    Ok((0..y.rows()).map(|i| y.entry(i, 0)).collect())
}

/// Enclosure of `I - X` for a square interval matrix.
pub fn identity_minus(x: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    let id = IntervalMatrix::identity(x.rows()).with_structure_unchecked(Structure::General);
    id.sub(x)
}
