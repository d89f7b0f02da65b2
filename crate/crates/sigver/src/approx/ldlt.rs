//! Symmetric indefinite factorization `P M P^T = L D L^T` (Bunch-Kaufman
//! pivoting, faer backed) and the exact inertia of the computed `D`.

use faer::linalg::solvers::Lblt;
use faer::Side;

use crate::dense::DenseMatrix;
use crate::interval::RealInterval;

use super::ApproxError;

/// Diagonal block of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DBlock {
    One(f64),
    /// Symmetric 2x2 block `[[a, b], [b, c]]`.
    Two { a: f64, b: f64, c: f64 },
}

/// Floating factors with `(P M P^T)_{ij} = M[perm[i]][perm[j]]`.
#[derive(Debug, Clone)]
pub struct LdltFactors {
    pub l: DenseMatrix,
    pub blocks: Vec<DBlock>,
    pub perm: Vec<usize>,
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl LdltFactors {
    /// `D` as a dense block-diagonal matrix.
    pub fn d_matrix(&self) -> DenseMatrix {
        let n = self.l.rows();
        let mut d = DenseMatrix::zeros(n, n);
        let mut k = 0;
        for blk in &self.blocks {
            match *blk {
                DBlock::One(x) => {
                    d[(k, k)] = x;
                    k += 1;
                }
                DBlock::Two { a, b, c } => {
                    d[(k, k)] = a;
                    d[(k, k + 1)] = b;
                    d[(k + 1, k)] = b;
                    d[(k + 1, k + 1)] = c;
                    k += 2;
                }
            }
        }
        d
    }
}

/// Factors a symmetric matrix; only its lower triangle is read.
pub fn approx_ldlt(m: &DenseMatrix) -> Result<LdltFactors, ApproxError> {
    if !m.is_square() {
        return Err(ApproxError::NotSquare);
    }
    if !m.is_finite() {
        return Err(ApproxError::NonFinite);
    }
    let n = m.rows();
    let f = Lblt::new(m.as_ref(), Side::Lower);
    let l = DenseMatrix::from_faer(f.L());
    let diag = f.B_diag();
    let sub = f.B_subdiag();
    let mut blocks = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if k + 1 < n && sub[k] != 0.0 {
            blocks.push(DBlock::Two {
                a: diag[k],
                b: sub[k],
                c: diag[k + 1],
            });
            k += 2;
        } else {
            blocks.push(DBlock::One(diag[k]));
            k += 1;
        }
    }
    let (fwd, _) = f.P().arrays();
    let perm = fwd.to_vec();
    if !l.is_finite() {
        return Err(ApproxError::Breakdown);
    }
    for b in &blocks {
        let ok = match *b {
            DBlock::One(x) => x.is_finite(),
            DBlock::Two { a, b, c } => a.is_finite() && b.is_finite() && c.is_finite(),
        };
        if !ok {
            return Err(ApproxError::Breakdown);
        }
    }
    Ok(LdltFactors { l, blocks, perm })
}

/// Exact inertia of the block-diagonal `D`.
///
/// 2x2 determinants are evaluated in interval arithmetic; a block whose
/// determinant sign cannot be decided counts as two zero eigenvalues, which
/// only ever makes a caller's positivity test fail.
pub fn inertia_of_d(blocks: &[DBlock]) -> Inertia {
    let mut inr = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for blk in blocks {
        match *blk {
            DBlock::One(x) => {
                if x > 0.0 {
                    inr.positive += 1;
                } else if x < 0.0 {
                    inr.negative += 1;
                } else {
                    inr.zero += 1;
                }
            }
            DBlock::Two { a, b, c } => {
                let det = RealInterval::point(a) * RealInterval::point(c) - RealInterval::point(b).sqr();
                if det.hi() < 0.0 {
                    inr.positive += 1;
                    inr.negative += 1;
                } else if det.lo() > 0.0 {
                    if a > 0.0 {
                        inr.positive += 2;
                    } else {
                        inr.negative += 2;
                    }
                } else {
                    inr.zero += 2;
                }
            }
        }
    }
    inr
}
