//! Methods that certify a shift `theta <= sigma_min` without factoring `B`
//! in interval arithmetic.

use crate::approx::{approx_gen_eig_extreme, approx_ldlt, approx_sigma_min_pair, inertia_of_d, DBlock, ExtremeEigen};
use crate::dense::DenseMatrix;
use crate::interval::rounding::dr;
use crate::interval::{RealInterval, UNIT_ROUNDOFF};
use crate::ivlinalg::{
    augment_pair, gram_product, imm_multiply, lower_bound_sigma_min_spd, nrmbnd, verify_spd, IntervalMatrix,
    Structure,
};

use super::upper::upper_bound_with_weight_bound;
use super::{BoundStatus, Method, SigmaMinBound, VerifyError};

/// Number of shrink steps `eps <- 1 - (1 - eps) / 2` before giving up.
pub const MAX_THETA_RETRIES: usize = 6;

/// Number of `tau` increases per shift in the indefinite method.
pub const MAX_TAU_RETRIES: usize = 20;

fn shrink(eps: f64) -> f64 {
    1.0 - (1.0 - eps) / 2.0
}

fn check_epsilon(eps: f64) -> Result<(), VerifyError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(VerifyError::InvalidEpsilon(eps))
    }
}

fn attach_upper(
    bound: &mut SigmaMinBound,
    a: &IntervalMatrix,
    b: &IntervalMatrix,
    pair: Option<&ExtremeEigen>,
    lam_b: f64,
) {
    let computed;
    let pair = match pair {
        Some(p) => p,
        None => match approx_sigma_min_pair(a.mid(), b.mid()) {
            Ok(p) => {
                computed = p;
                &computed
            }
            Err(_) => return,
        },
    };
    if let Ok(u) = upper_bound_with_weight_bound(a, b, bound.lower, &pair.vector, lam_b) {
        bound.upper = Some(u.max(bound.lower));
    }
}

/// Positive definiteness of `A^T A - theta B^2` and `A A^T - theta B^2`
/// proves `sigma_min >= sqrt(theta)`.
pub fn method_s1(a: &IntervalMatrix, b: &IntervalMatrix, epsilon: f64) -> Result<SigmaMinBound, VerifyError> {
    super::check_pencil(a, b)?;
    check_epsilon(epsilon)?;
    let mut out = SigmaMinBound::empty(Method::S1);
    out.epsilon = Some(epsilon);
    let lam_b = lower_bound_sigma_min_spd(b)?;
    if !(lam_b > 0.0) {
        return Ok(out);
    }
    let am = a.mid();
    let bm = b.mid();
    let b2_mid = bm.matmul(bm).symmetric_part();
    let t1 = approx_gen_eig_extreme(&am.t_matmul(am).symmetric_part(), &b2_mid)?;
    let t2 = approx_gen_eig_extreme(&am.matmul_t(am).symmetric_part(), &b2_mid)?;
    let theta_tilde = t1.lambda.abs().min(t2.lambda.abs());
    if !(theta_tilde > 0.0) || !theta_tilde.is_finite() {
        return Ok(out);
    }
    let ata = gram_product(a)?;
    let aat = gram_product(&a.transpose())?;
    let b2 = imm_multiply(b, b)?.symmetrized()?;
    let mut eps = epsilon;
    for _ in 0..=MAX_THETA_RETRIES {
        let theta = (1.0 - eps) * theta_tilde;
        let tb2 = b2.scale(theta);
        let ok = verify_spd(&ata.sub(&tb2)?.with_structure_unchecked(Structure::Hermitian))?
            && verify_spd(&aat.sub(&tb2)?.with_structure_unchecked(Structure::Hermitian))?;
        if ok {
            out.status = BoundStatus::Verified;
            out.lower = dr::sqrt_down(theta);
            out.theta = Some(theta);
            out.epsilon = Some(eps);
            attach_upper(&mut out, a, b, None, lam_b);
            return Ok(out);
        }
        eps = shrink(eps);
    }
    out.epsilon = Some(eps);
    Ok(out)
}

/// Outcome of one inertia test of `G(theta) + tau I`.
enum Inertia {
    Proven { tau: f64, delta: f64 },
    WrongInertia,
    Inconclusive,
}

/// Enclosure of `L D L^T` with `D` block diagonal, as `(L D) L^T`.
fn enclose_ldlt(l: &DenseMatrix, blocks: &[DBlock]) -> Result<IntervalMatrix, VerifyError> {
    let n = l.rows();
    // (L D) has at most two nonzero products per entry
    let mut ld = vec![RealInterval::zero(); n * n];
    let mut k = 0;
    for blk in blocks {
        match *blk {
            DBlock::One(d) => {
                for i in k..n {
                    ld[i * n + k] = RealInterval::point(l[(i, k)]).scale(d);
                }
                k += 1;
            }
            DBlock::Two { a, b, c } => {
                for i in k..n {
                    let (p, q) = (RealInterval::point(l[(i, k)]), RealInterval::point(l[(i, k + 1)]));
                    ld[i * n + k] = p.scale(a) + q.scale(b);
                    ld[i * n + k + 1] = p.scale(b) + q.scale(c);
                }
                k += 2;
            }
        }
    }
    let ldm = IntervalMatrix::from_intervals(n, n, |i, j| ld[i * n + j]);
    Ok(imm_multiply(&ldm, &IntervalMatrix::from_point(l.transpose()))?)
}

fn test_inertia(g: &IntervalMatrix, n: usize, tau0: f64) -> Result<Inertia, VerifyError> {
    let dim = g.rows();
    let mut tau = tau0;
    for _ in 0..=MAX_TAU_RETRIES {
        let mut shifted = g.mid().clone();
        for i in 0..dim {
            shifted[(i, i)] += tau;
        }
        let f = match approx_ldlt(&shifted) {
            Ok(f) => f,
            Err(_) => return Ok(Inertia::Inconclusive),
        };
        let inr = inertia_of_d(&f.blocks);
        if inr.positive != n || inr.zero != 0 {
            return Ok(Inertia::WrongInertia);
        }
        let gp = IntervalMatrix::from_intervals(dim, dim, |i, j| g.entry(f.perm[i], f.perm[j]))
            .add_diagonal(tau);
        let resid = gp.sub(&enclose_ldlt(&f.l, &f.blocks)?)?.symmetrized()?;
        let delta = nrmbnd(&resid);
        if tau > delta {
            return Ok(Inertia::Proven { tau, delta });
        }
        tau = 2.0 * tau.max(delta);
        if !tau.is_finite() {
            break;
        }
    }
    Ok(Inertia::Inconclusive)
}

/// Inertia of `[[theta B, A^T], [A, theta B]]` through a perturbed `LDL^T`:
/// `n` positive eigenvalues prove `sigma_min >= theta`.
pub fn method_s2(a: &IntervalMatrix, b: &IntervalMatrix, epsilon: f64) -> Result<SigmaMinBound, VerifyError> {
    super::check_pencil(a, b)?;
    check_epsilon(epsilon)?;
    let n = a.rows();
    let mut out = SigmaMinBound::empty(Method::S2);
    out.epsilon = Some(epsilon);
    let lam_b = lower_bound_sigma_min_spd(b)?;
    if !(lam_b > 0.0) {
        return Ok(out);
    }
    let pair = approx_sigma_min_pair(a.mid(), b.mid())?;
    let theta_tilde = pair.lambda;
    if !(theta_tilde > 0.0) || !theta_tilde.is_finite() {
        return Ok(out);
    }
    let mut eps = epsilon;
    for _ in 0..=MAX_THETA_RETRIES {
        let theta = (1.0 - eps) * theta_tilde;
        let g = augment_pair(a, b, theta)?;
        let tau0 = dr::mul_up(10.0 * UNIT_ROUNDOFF, nrmbnd(&g));
        match test_inertia(&g, n, tau0)? {
            Inertia::Proven { tau, delta } => {
                out.status = BoundStatus::Verified;
                out.lower = theta;
                out.theta = Some(theta);
                out.tau = Some(tau);
                out.residual_delta = Some(delta);
                out.epsilon = Some(eps);
                attach_upper(&mut out, a, b, Some(&pair), lam_b);
                return Ok(out);
            }
            Inertia::WrongInertia | Inertia::Inconclusive => eps = shrink(eps),
        }
    }
    out.epsilon = Some(eps);
    Ok(out)
}
