//! Extreme eigenpairs of symmetric-definite pencils `H x = lambda S x`.
//!
//! Small problems are reduced to a standard symmetric eigenproblem through
//! the Cholesky factor of `S`. Large ones use block inverse subspace
//! iteration with Rayleigh-Ritz extraction, which only needs solves with `H`
//! and products with `H` and `S`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::{axpy, dot, norm2, DenseMatrix};

use super::cholesky::{cholesky_upper, congruence_inverse, solve_upper_vec};
use super::lu::Lu;
use super::svd::{approx_svd, sym_eig, sym_eigenvalues};
use super::ApproxError;

/// Pencils up to this order are solved densely.
pub const DENSE_LIMIT: usize = 2000;


const MAX_ITERATIONS: usize = 600;

/// Eigenvalue of smallest magnitude and an eigenvector.
#[derive(Debug, Clone)]
pub struct ExtremeEigen {
    pub lambda: f64,
    pub vector: Vec<f64>,
}

trait PencilOps {
    fn dim(&self) -> usize;
    fn solve_h(&self, y: &[f64]) -> Vec<f64>;
    fn apply_h(&self, x: &[f64]) -> Vec<f64>;
    fn apply_s(&self, x: &[f64]) -> Vec<f64>;
}

struct DensePencil<'a> {
    h: &'a DenseMatrix,
    s: &'a DenseMatrix,
    lu: Lu,
}

impl PencilOps for DensePencil<'_> {
    fn dim(&self) -> usize {
        self.h.rows()
    }
    fn solve_h(&self, y: &[f64]) -> Vec<f64> {
        self.lu.solve(y)
    }
    fn apply_h(&self, x: &[f64]) -> Vec<f64> {
        self.h.mul_vec(x)
    }
    fn apply_s(&self, x: &[f64]) -> Vec<f64> {
        self.s.mul_vec(x)
    }
}

/// The pencil `([[0, A^T], [A, 0]], diag(B, B))` without forming it.
struct AugmentedPencil<'a> {
    a: &'a DenseMatrix,
    b: &'a DenseMatrix,
    lu: Lu,
}

impl PencilOps for AugmentedPencil<'_> {
    fn dim(&self) -> usize {
        2 * self.a.rows()
    }
    fn solve_h(&self, y: &[f64]) -> Vec<f64> {
        let n = self.a.rows();
        let mut x = self.lu.solve(&y[n..]);
        x.extend(self.lu.solve_transpose(&y[..n]));
        x
    }
    fn apply_h(&self, x: &[f64]) -> Vec<f64> {
        let n = self.a.rows();
        let mut y = self.a.t_mul_vec(&x[n..]);
        y.extend(self.a.mul_vec(&x[..n]));
        y
    }
    fn apply_s(&self, x: &[f64]) -> Vec<f64> {
        let n = self.a.rows();
        let mut y = self.b.mul_vec(&x[..n]);
        y.extend(self.b.mul_vec(&x[n..]));
        y
    }
}

fn dense_extreme(h: &DenseMatrix, s: &DenseMatrix) -> Result<ExtremeEigen, ApproxError> {
    let r = cholesky_upper(s)?;
    let c = congruence_inverse(&r, h).symmetric_part();
    let (vals, vecs) = sym_eig(&c)?;
    let idx = (0..vals.len())
        .min_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs()))
        .ok_or(ApproxError::NotSquare)?;
    let x = solve_upper_vec(&r, &vecs.column(idx));
    Ok(ExtremeEigen {
        lambda: vals[idx],
        vector: x,
    })
}

/// Smallest singular triple of `R^{-T} A R^{-1}` with `B = R^T R`, mapped
/// back so that `(v; u)` has unit `diag(B, B)` norm.
fn dense_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<ExtremeEigen, ApproxError> {
    let n = a.rows();
    let r = cholesky_upper(b)?;
    let svd = approx_svd(&congruence_inverse(&r, a))?;
    let k = n - 1;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let v: Vec<f64> = svd.v.column(k).iter().map(|x| x * scale).collect();
    let u: Vec<f64> = svd.u.column(k).iter().map(|x| x * scale).collect();
    let mut vector = solve_upper_vec(&r, &v);
    vector.extend(solve_upper_vec(&r, &u));
    Ok(ExtremeEigen { lambda: svd.s[k], vector })
}

/// Orthonormalizes `ys` in the `S` inner product (two Gram-Schmidt passes),
/// replacing numerically dependent vectors by fresh random ones.
fn s_orthonormalize(ops: &dyn PencilOps, ys: Vec<Vec<f64>>, rng: &mut ChaCha20Rng) -> Vec<Vec<f64>> {
    let n = ops.dim();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(ys.len());
    let mut sbasis: Vec<Vec<f64>> = Vec::with_capacity(ys.len());
    for y0 in ys {
        let mut y = y0;
        for attempt in 0..3 {
            let norm_before = {
                let sy = ops.apply_s(&y);
                dot(&y, &sy).max(0.0).sqrt()
            };
            for _ in 0..2 {
                for (q, sq) in basis.iter().zip(&sbasis) {
                    let c = dot(&y, sq);
                    axpy(-c, q, &mut y);
                }
            }
            let sy = ops.apply_s(&y);
            let nrm = dot(&y, &sy).max(0.0).sqrt();
            if nrm > 1e-10 * norm_before && nrm.is_finite() && nrm > 0.0 {
                basis.push(y.iter().map(|v| v / nrm).collect());
                sbasis.push(sy.iter().map(|v| v / nrm).collect());
                break;
            }
            if attempt < 2 {
                y = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            }
        }
    }
    basis
}

fn block_inverse_iteration(ops: &dyn PencilOps, block: usize) -> Result<ExtremeEigen, ApproxError> {
    let n = ops.dim();
    let k = block.min(n);
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_e16e);
    let init: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
    let mut x = s_orthonormalize(ops, init, &mut rng);
    let mut best: Option<(f64, ExtremeEigen)> = None;
    let mut stable = 0;
    let mut last = f64::NAN;
    for _ in 0..MAX_ITERATIONS {
        let sx: Vec<Vec<f64>> = x.iter().map(|v| ops.apply_s(v)).collect();
        let y: Vec<Vec<f64>> = sx.iter().map(|v| ops.solve_h(v)).collect();
        if y.iter().any(|v| v.iter().any(|e| !e.is_finite())) {
            return Err(ApproxError::NonFinite);
        }
        // Ritz values of S H^{-1} S on span(x); the wanted ones are exterior
        let m = x.len();
        let t = DenseMatrix::from_fn(m, m, |i, j| 0.5 * (dot(&sx[i], &y[j]) + dot(&sx[j], &y[i])));
        let (vals, q) = sym_eig(&t)?;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| vals[j].abs().total_cmp(&vals[i].abs()));
        let yr: Vec<Vec<f64>> = order
            .iter()
            .map(|&c| {
                let mut out = vec![0.0; n];
                for (r, v) in y.iter().enumerate() {
                    axpy(q[(r, c)], v, &mut out);
                }
                out
            })
            .collect();
        x = s_orthonormalize(ops, yr, &mut rng);
        let mu = vals[order[0]];
        if mu == 0.0 {
            continue;
        }
        let theta = 1.0 / mu;
        let v = &x[0];
        let hv = ops.apply_h(v);
        let sv = ops.apply_s(v);
        let res: Vec<f64> = hv.iter().zip(&sv).map(|(a, b)| a - theta * b).collect();
        let rel = norm2(&res) / (norm2(&hv) + theta.abs() * norm2(&sv));
        let candidate = ExtremeEigen { lambda: theta, vector: v.clone() };
        if rel <= 1e-13 {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|(r, _)| rel < *r) {
            best = Some((rel, candidate));
        }
        if (theta - last).abs() <= 4.0 * f64::EPSILON * theta.abs() {
            stable += 1;
            if stable >= 3 && rel <= 1e-8 {
                break;
            }
        } else {
            stable = 0;
        }
        last = theta;
    }
    best.map(|(_, e)| e).ok_or(ApproxError::NoConvergence("inverse subspace iteration"))
}

/// Eigenvalue of smallest magnitude of `H x = lambda S x` with `S` SPD.
pub fn approx_gen_eig_extreme(h: &DenseMatrix, s: &DenseMatrix) -> Result<ExtremeEigen, ApproxError> {
    if !h.is_square() || h.shape() != s.shape() {
        return Err(ApproxError::NotSquare);
    }
    if h.rows() <= DENSE_LIMIT {
        return dense_extreme(h, s);
    }
    let ops = DensePencil { h, s, lu: Lu::new(h)? };
    block_inverse_iteration(&ops, 8)
}

/// Smallest singular value `sigma` of the pencil `(A, B)` with the stacked
/// vector `(v; u)` satisfying `A v = sigma B u`, `A^T u = sigma B v`.
pub fn approx_sigma_min_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<ExtremeEigen, ApproxError> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(ApproxError::NotSquare);
    }
    let n = a.rows();
    let mut e = if n <= DENSE_LIMIT {
        dense_pair(a, b)?
    } else {
        let ops = AugmentedPencil { a, b, lu: Lu::new(a)? };
        block_inverse_iteration(&ops, 12)?
    };
    if e.lambda < 0.0 {
        e.lambda = -e.lambda;
        e.vector[n..].iter_mut().for_each(|x| *x = -*x);
    }
    Ok(e)
}

/// Approximate smallest eigenvalue of a symmetric matrix.
pub fn approx_lambda_min(s: &DenseMatrix) -> Result<f64, ApproxError> {
    sym_eigenvalues(s)?
        .first()
        .copied()
        .ok_or(ApproxError::NotSquare)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_pair(n: usize) -> (DenseMatrix, DenseMatrix) {
        let a = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0 + (i as f64) * 0.3
            } else {
                ((i * 13 + j * 7) % 9) as f64 * 0.01
            }
        });
        let b = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -0.5
            } else {
                0.0
            }
        });
        (a, b)
    }

    #[test]
    fn dense_and_iterative_paths_agree() {
        let (a, b) = test_pair(30);
        let dense = approx_sigma_min_pair(&a, &b).unwrap();
        let ops = AugmentedPencil {
            a: &a,
            b: &b,
            lu: Lu::new(&a).unwrap(),
        };
        let mut it = block_inverse_iteration(&ops, 12).unwrap();
        it.lambda = it.lambda.abs();
        assert!((dense.lambda - it.lambda).abs() <= 1e-12 * dense.lambda);
    }

    #[test]
    fn pair_vector_has_positive_orientation() {
        let (a, b) = test_pair(20);
        let e = approx_sigma_min_pair(&a, &b).unwrap();
        let n = 20;
        let (v, u) = e.vector.split_at(n);
        let av = a.mul_vec(v);
        let bu = b.mul_vec(u);
        let r: f64 = av.iter().zip(&bu).map(|(x, y)| (x - e.lambda * y).abs()).fold(0.0, f64::max);
        assert!(r < 1e-10, "residual {r}");
        assert!(e.lambda > 0.0);
    }

    #[test]
    fn generalized_spd_pencil_smallest_eigenvalue() {
        let h = DenseMatrix::diag(&[4.0, 9.0, 1.0]);
        let s = DenseMatrix::diag(&[2.0, 3.0, 4.0]);
        let e = approx_gen_eig_extreme(&h, &s).unwrap();
        assert!((e.lambda - 0.25).abs() < 1e-14);
    }

    #[test]
    fn iterative_path_handles_doubled_values() {
        // real embedding of a complex pair: every singular value is doubled
        let (a0, b0) = test_pair(15);
        let a1 = DenseMatrix::from_fn(15, 15, |i, j| if i == j { 0.7 } else { 0.0 });
        let a = DenseMatrix::from_fn(30, 30, |i, j| match (i < 15, j < 15) {
            (true, true) => a0[(i, j)],
            (false, false) => a0[(i - 15, j - 15)],
            (true, false) => -a1[(i, j - 15)],
            (false, true) => a1[(i - 15, j)],
        });
        let b = DenseMatrix::from_fn(30, 30, |i, j| if (i < 15) == (j < 15) { b0[(i % 15, j % 15)] } else { 0.0 });
        let dense = approx_sigma_min_pair(&a, &b).unwrap();
        let ops = AugmentedPencil { a: &a, b: &b, lu: Lu::new(&a).unwrap() };
        let it = block_inverse_iteration(&ops, 12).unwrap();
        assert!((dense.lambda - it.lambda.abs()).abs() <= 1e-10 * dense.lambda);
    }
}
