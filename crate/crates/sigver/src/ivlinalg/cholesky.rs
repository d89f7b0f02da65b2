//! Interval Cholesky factorization.

use crate::dense::DenseMatrix;
use crate::interval::rounding::dr;
use crate::interval::{RealInterval, ETA};

use super::matrix::{IntervalMatrix, Structure};
use super::product::{gamma, nonneg_exact_bound};
use super::IvLinalgError;

/// Encloses the upper Cholesky factor `R` (`B = R^T R`) of every symmetric
/// member of `b`.
///
/// Each inner product `sum_k r_ki r_kj` is accumulated in midpoint-radius
/// form with an a-priori rounding bound. Fails with
/// [`IvLinalgError::NotProvablyPositiveDefinite`] as soon as a diagonal
/// square-root argument is not provably positive.
pub fn interval_cholesky(b: &IntervalMatrix) -> Result<IntervalMatrix, IvLinalgError> {
    if !b.is_hermitian() {
        return Err(IvLinalgError::NotHermitian);
    }
    let n = b.rows();
    // column-major storage: column j holds r_0j .. r_jj contiguously
    let mut rm = vec![0.0f64; n * n];
    let mut rr = vec![0.0f64; n * n];
    for j in 0..n {
        for i in 0..=j {
            let (ci, cj) = (i * n, j * n);
            let (mi, ri) = (&rm[ci..ci + i], &rr[ci..ci + i]);
            let (mj, rj) = (&rm[cj..cj + i], &rr[cj..cj + i]);
            let mut s_mid = 0.0;
            let mut s_abs = 0.0;
            let mut s_rad = 0.0;
            let mut active = false;
            for k in 0..i {
                active |= (mi[k] != 0.0 || ri[k] != 0.0) && (mj[k] != 0.0 || rj[k] != 0.0);
                let p = mi[k] * mj[k];
                s_mid += p;
                s_abs += p.abs();
                s_rad += mi[k].abs() * rj[k] + ri[k] * (mj[k].abs() + rj[k]);
            }
            // every term has an exactly zero factor: the sum is exactly zero
            let s = if !active {
                RealInterval::zero()
            } else {
                let g = gamma(i + 4);
                let abs_exact = nonneg_exact_bound(s_abs, i, g);
                let rad_exact = nonneg_exact_bound(s_rad, i, g);
                let keta = dr::mul_up(i as f64, ETA);
                let e = dr::add_up(dr::add_up(dr::mul_up(g, abs_exact), rad_exact), keta);
                RealInterval::from_sorted(dr::sub_down(s_mid, e), dr::add_up(s_mid, e))
            };
            let t = b.entry(i, j) - s;
            let r = if i < j {
                let rii = RealInterval::from_sorted(
                    dr::sub_down(rm[ci + i], rr[ci + i]),
                    dr::add_up(rm[ci + i], rr[ci + i]),
                );
                t.div(rii).map_err(|_| IvLinalgError::NotProvablyPositiveDefinite { index: i })?
            } else {
                if !(t.lo() > 0.0) {
                    return Err(IvLinalgError::NotProvablyPositiveDefinite { index: j });
                }
                t.sqrt()?
            };
            let (m, rad) = r.mid_rad();
            if !m.is_finite() || !rad.is_finite() {
                return Err(IvLinalgError::NotProvablyPositiveDefinite { index: j });
            }
            rm[cj + i] = m;
            rr[cj + i] = rad;
        }
    }
    // column-major upper == row-major lower; transpose into row-major upper
    let mid = DenseMatrix::from_vec(n, n, rm).transpose();
    let rad = DenseMatrix::from_vec(n, n, rr).transpose();
    Ok(IntervalMatrix::from_mid_rad(mid, rad)?.with_structure_unchecked(Structure::UpperTriangular))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivlinalg::product::imm_multiply;

    #[test]
    fn identity_factor_is_identity() {
        let r = interval_cholesky(&IntervalMatrix::identity(4)).unwrap();
        assert!(r.contains(&DenseMatrix::identity(4)));
        assert!(r.rad().max_abs() == 0.0);
    }

    #[test]
    fn two_by_two_contains_exact_factor() {
        let b = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]);
        let bi = IntervalMatrix::from_point(b).with_structure(Structure::Hermitian).unwrap();
        let r = interval_cholesky(&bi).unwrap();
        let exact = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        assert!(r.contains(&exact));
        let rtr = imm_multiply(&r.transpose(), &r).unwrap();
        assert!(rtr.contains(bi.mid()));
    }

    #[test]
    fn indefinite_matrix_fails() {
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        let bi = IntervalMatrix::from_point(b).with_structure(Structure::Hermitian).unwrap();
        assert_eq!(
            interval_cholesky(&bi),
            Err(IvLinalgError::NotProvablyPositiveDefinite { index: 1 })
        );
    }
}
