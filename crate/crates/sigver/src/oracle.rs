//! Arbitrary-precision reference values for the pencil singular values,
//! used to check verified enclosures.
//!
//! `B = R^T R` is factored in MPFR arithmetic, `M = R^{-T} A R^{-1}` is
//! formed by triangular solves, and one-sided Jacobi produces the singular
//! values of `M`, after rotating by an orthonormalized binary64 estimate of
//! its right singular vectors. Each result is recomputed at twice the
//! precision; the two runs must agree to [`AGREEMENT_BITS`] bits or the
//! precision is doubled.

use rug::{Assign, Float};
use thiserror::Error;

use crate::approx::approx_svd;
use crate::dense::DenseMatrix;
use crate::matgen::ComplexDense;

/// Required relative agreement between the two precisions, in bits.
pub const AGREEMENT_BITS: i32 = 40;

/// Precision above which the oracle gives up.
pub const MAX_BITS: u32 = 2048;

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("A and B must be square and of equal size")]
    DimensionMismatch,
    #[error("B is not positive definite at {bits} bits (pivot {index})")]
    NotPositiveDefinite { index: usize, bits: u32 },
    #[error("no agreement to {AGREEMENT_BITS} bits up to {MAX_BITS} bits of precision")]
    PrecisionInsufficient,
}

/// Singular values, non-increasing, from the higher-precision run.
#[derive(Debug, Clone)]
pub struct OracleValues {
    pub bits: u32,
    pub values: Vec<Float>,
}

impl OracleValues {
    /// Nearest binary64 values.
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Float::to_f64).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest singular value.
    pub fn min(&self) -> &Float {
        self.values.last().expect("nonempty spectrum")
    }

    /// Whether `lo <= sigma_i <= hi` holds exactly.
    pub fn inside(&self, i: usize, lo: f64, hi: f64) -> bool {
        self.values[i] >= lo && self.values[i] <= hi
    }
}

fn to_hp(m: &DenseMatrix, prec: u32) -> Vec<Vec<Float>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Float::with_val(prec, m[(i, j)])).collect())
        .collect()
}

/// Upper Cholesky factor, row-major.
fn cholesky(b: &[Vec<Float>], prec: u32) -> Result<Vec<Vec<Float>>, OracleError> {
    let n = b.len();
    let mut r = vec![vec![Float::new(prec); n]; n];
    for j in 0..n {
        for i in 0..=j {
            let s = Float::with_val(prec, Float::dot((0..i).map(|k| (&r[k][i], &r[k][j]))));
            let t = Float::with_val(prec, &b[i][j] - &s);
            if i == j {
                if t <= 0 {
                    return Err(OracleError::NotPositiveDefinite { index: j, bits: prec });
                }
                r[j][j] = t.sqrt();
            } else {
                r[i][j] = t / &r[i][i];
            }
        }
    }
    Ok(r)
}

/// Columns of `R^{-T} A R^{-1}`.
fn congruence(a: &[Vec<Float>], r: &[Vec<Float>], prec: u32) -> Vec<Vec<Float>> {
    let n = a.len();
    // rows of X = A R^{-1}: x R = a
    let mut x = vec![vec![Float::new(prec); n]; n];
    for (row, arow) in x.iter_mut().zip(a) {
        for j in 0..n {
            let s = Float::with_val(prec, Float::dot((0..j).map(|k| (&row[k], &r[k][j]))));
            row[j] = Float::with_val(prec, &arow[j] - &s) / &r[j][j];
        }
    }
    // columns of M: R^T m = x_col
    let mut cols = vec![vec![Float::new(prec); n]; n];
    for (j, col) in cols.iter_mut().enumerate() {
        for i in 0..n {
            let s = Float::with_val(prec, Float::dot((0..i).map(|k| (&r[k][i], &col[k]))));
            col[i] = Float::with_val(prec, &x[i][j] - &s) / &r[i][i];
        }
    }
    cols
}

/// Columns of an orthonormal basis (at `prec` bits) close to the right
/// singular vectors of `m`, from a binary64 SVD; `None` if that fails.
fn right_basis(cols: &[Vec<Float>], prec: u32) -> Option<Vec<Vec<Float>>> {
    let n = cols.len();
    let approx = DenseMatrix::from_fn(n, n, |i, j| cols[j][i].to_f64());
    let v = approx_svd(&approx).ok()?.v;
    let mut q: Vec<Vec<Float>> = (0..n).map(|j| (0..n).map(|i| Float::with_val(prec, v[(i, j)])).collect()).collect();
    // modified Gram-Schmidt, applied twice
    for _ in 0..2 {
        for j in 0..n {
            let (done, rest) = q.split_at_mut(j);
            let qj = &mut rest[0];
            for qk in done.iter() {
                let h = Float::with_val(prec, Float::dot(qk.iter().zip(qj.iter())));
                for (x, y) in qj.iter_mut().zip(qk) {
                    *x -= Float::with_val(prec, &h * y);
                }
            }
            let norm = Float::with_val(prec, Float::dot(qj.iter().zip(qj.iter()))).sqrt();
            if norm.is_zero() {
                return None;
            }
            qj.iter_mut().for_each(|x| *x /= &norm);
        }
    }
    Some(q)
}

/// Columns of `M Q`; same singular values as `M` but nearly orthogonal
/// columns, so Jacobi needs few sweeps.
fn precondition(cols: Vec<Vec<Float>>, prec: u32) -> Vec<Vec<Float>> {
    let Some(q) = right_basis(&cols, prec) else { return cols };
    let n = cols.len();
    let rows: Vec<Vec<Float>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    q.iter()
        .map(|qj| rows.iter().map(|r| Float::with_val(prec, Float::dot(r.iter().zip(qj)))).collect())
        .collect()
}

/// One-sided Jacobi on the columns; returns the column norms, sorted.
fn jacobi_singular_values(mut w: Vec<Vec<Float>>, prec: u32) -> Vec<Float> {
    let n = w.len();
    let tol = Float::with_val(prec, Float::i_exp(1, 4 - prec as i32));
    let (mut tmp_p, mut tmp_q) = (Float::new(prec), Float::new(prec));
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (lo, hi) = w.split_at_mut(q);
                let (wp, wq) = (&mut lo[p], &mut hi[0]);
                let alpha = Float::with_val(prec, Float::dot(wp.iter().zip(wp.iter())));
                let beta = Float::with_val(prec, Float::dot(wq.iter().zip(wq.iter())));
                let gamma = Float::with_val(prec, Float::dot(wp.iter().zip(wq.iter())));
                if gamma.is_zero() {
                    continue;
                }
                let scale = Float::with_val(prec, &alpha * &beta).sqrt() * &tol;
                if Float::with_val(prec, gamma.abs_ref()) <= scale {
                    continue;
                }
                rotated = true;
                let zeta = Float::with_val(prec, &beta - &alpha) / Float::with_val(prec, &gamma * 2u32);
                let root = (Float::with_val(prec, zeta.square_ref()) + 1u32).sqrt();
                let denom = Float::with_val(prec, zeta.abs_ref()) + &root;
                let mut t = Float::with_val(prec, 1u32) / denom;
                if zeta.is_sign_negative() {
                    t = -t;
                }
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &c * &t);
                for (xp, xq) in wp.iter_mut().zip(wq.iter_mut()) {
                    tmp_p.assign(&c * &*xp - &s * &*xq);
                    tmp_q.assign(&s * &*xp + &c * &*xq);
                    std::mem::swap(xp, &mut tmp_p);
                    std::mem::swap(xq, &mut tmp_q);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<Float> = w
        .iter()
        .map(|col| Float::with_val(prec, Float::dot(col.iter().zip(col.iter()))).sqrt())
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    s
}

/// Singular values of `R^{-T} A R^{-1}` at a single precision.
pub fn singular_values_at(a: &DenseMatrix, b: &DenseMatrix, bits: u32) -> Result<Vec<Float>, OracleError> {
    let n = a.rows();
    if !a.is_square() || b.shape() != (n, n) {
        return Err(OracleError::DimensionMismatch);
    }
    let r = cholesky(&to_hp(b, bits), bits)?;
    let m = congruence(&to_hp(a, bits), &r, bits);
    Ok(jacobi_singular_values(precondition(m, bits), bits))
}

fn agree(lo: &[Float], hi: &[Float]) -> bool {
    lo.iter().zip(hi).all(|(x, y)| {
        let prec = y.prec();
        let diff = Float::with_val(prec, x - y).abs();
        let bound = Float::with_val(prec, y.abs_ref()) >> AGREEMENT_BITS as u32;
        diff <= bound
    })
}

/// Reference singular values of the real pencil `(a, b)`, non-increasing,
/// computed with at least `bits` bits (at least 64).
pub fn oracle_singular_values(a: &DenseMatrix, b: &DenseMatrix, bits: u32) -> Result<OracleValues, OracleError> {
    let mut p = bits.max(64);
    while 2 * p <= MAX_BITS {
        let lo = singular_values_at(a, b, p)?;
        let hi = singular_values_at(a, b, 2 * p)?;
        if agree(&lo, &hi) {
            return Ok(OracleValues { bits: 2 * p, values: hi });
        }
        p *= 2;
    }
    Err(OracleError::PrecisionInsufficient)
}

fn embed(m: &ComplexDense) -> DenseMatrix {
    let n = m.re.rows();
    DenseMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => m.re[(i, j)],
        (false, false) => m.re[(i - n, j - n)],
        (true, false) => -m.im[(i, j - n)],
        (false, true) => m.im[(i - n, j)],
    })
}

/// Complex pencil with Hermitian `b`; the real embedding carries every
/// singular value twice, so every other value is kept.
pub fn oracle_singular_values_complex(
    a: &ComplexDense,
    b: &ComplexDense,
    bits: u32,
) -> Result<OracleValues, OracleError> {
    let full = oracle_singular_values(&embed(a), &embed(b), bits)?;
    Ok(OracleValues {
        bits: full.bits,
        values: full.values.into_iter().step_by(2).collect(),
    })
}
