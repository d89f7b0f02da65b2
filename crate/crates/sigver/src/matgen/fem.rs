//! P1 finite elements for `-Δu + b·∇u + c u` on the unit square with
//! homogeneous Dirichlet data and `b(x, y) = R (-y + 1/2, x - 1/2)`.
//!
//! The mesh has `m x m` interior nodes, width `h = 1/(m+1)`, and every cell
//! `[i, i+1] x [j, j+1]` (in units of `h`) is cut along the diagonal from
//! `(i, j)` to `(i+1, j+1)`. Element integrals use the edge-midpoint rule,
//! exact for the quadratic integrands that occur. In units of `h` every
//! quadrature sum is a small dyadic rational, so it is accumulated exactly
//! and only the final scaling by `h^2 / 12` or `h^2 / 24` is rounded, in
//! interval arithmetic.

use std::collections::BTreeMap;

use crate::dense::DenseMatrix;
use crate::interval::RealInterval;
use crate::ivlinalg::{ComplexIntervalMatrix, IntervalMatrix, IvLinalgError, Structure};
use crate::verify::{Pencil, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemProblem {
    /// Interior nodes per axis; `n = m^2`.
    pub m: usize,
    /// Strength of the rotating convection field.
    pub r_coef: f64,
    pub c_re: f64,
    pub c_im: f64,
}

impl FemProblem {
    pub fn new(m: usize, r_coef: f64, c_re: f64, c_im: f64) -> Self {
        assert!(m >= 1, "m must be positive");
        Self { m, r_coef, c_re, c_im }
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    /// Enclosure of the mesh width `1 / (m + 1)`.
    pub fn h(&self) -> RealInterval {
        RealInterval::point(1.0)
            .div(RealInterval::point((self.m + 1) as f64))
            .expect("nonzero denominator")
    }
}

/// Assembled pair: `A` (complex when `Im c != 0`) and the stiffness `B`.
#[derive(Debug, Clone)]
pub struct FemPair {
    pub a: ComplexIntervalMatrix,
    pub b: IntervalMatrix,
}

impl FemPair {
    pub fn is_real(&self) -> bool {
        let im = self.a.im();
        im.is_point() && im.mid().as_slice().iter().all(|&x| x == 0.0)
    }

    /// Real pencil when `A` is real, otherwise a complex pencil.
    pub fn pencil(&self) -> Result<Pencil, VerifyError> {
        if self.is_real() {
            Pencil::real(self.a.re().clone(), self.b.clone())
        } else {
            let n = self.b.rows();
            let b = ComplexIntervalMatrix::new(self.b.clone(), IntervalMatrix::zeros(n, n))?.with_hermitian()?;
            Pencil::complex(self.a.clone(), b)
        }
    }
}

/// Exact per-entry quadrature sums: stiffness, convection (over `R h^2 / 12`)
/// and mass (over `h^2 / 24`).
#[derive(Default, Clone, Copy)]
struct Sums {
    k: f64,
    q: f64,
    p: f64,
}

/// Local vertices and gradients (units of `1/h`) of the two triangle kinds.
const TRIANGLES: [([(usize, usize); 3], [(f64, f64); 3]); 2] = [
    ([(0, 0), (1, 0), (1, 1)], [(-1.0, 0.0), (1.0, -1.0), (0.0, 1.0)]),
    ([(0, 0), (1, 1), (0, 1)], [(0.0, -1.0), (1.0, 0.0), (-1.0, 1.0)]),
];

fn accumulate(p: &FemProblem) -> BTreeMap<(usize, usize), Sums> {
    let m = p.m;
    let centre = (m + 1) as f64 / 2.0;
    let node = |x: usize, y: usize| -> Option<usize> {
        (x >= 1 && x <= m && y >= 1 && y <= m).then(|| (y - 1) * m + (x - 1))
    };
    let mut sums: BTreeMap<(usize, usize), Sums> = BTreeMap::new();
    for cj in 0..=m {
        for ci in 0..=m {
            for (verts, grads) in TRIANGLES.iter() {
                let glob: Vec<Option<usize>> = verts.iter().map(|&(dx, dy)| node(ci + dx, cj + dy)).collect();
                for a in 0..3 {
                    let Some(row) = glob[a] else { continue };
                    for b in 0..3 {
                        let Some(col) = glob[b] else { continue };
                        let (gb, ga) = (grads[b], grads[a]);
                        let mut q = 0.0;
                        // midpoints of the two edges through vertex a
                        for other in (0..3).filter(|&o| o != a) {
                            let mx = ci as f64 + (verts[a].0 + verts[other].0) as f64 / 2.0;
                            let my = cj as f64 + (verts[a].1 + verts[other].1) as f64 / 2.0;
                            q += -(my - centre) * gb.0 + (mx - centre) * gb.1;
                        }
                        let e = sums.entry((row, col)).or_default();
                        e.k += 0.5 * (ga.0 * gb.0 + ga.1 * gb.1);
                        e.q += q;
                        e.p += if a == b { 2.0 } else { 1.0 };
                    }
                }
            }
        }
    }
    sums
}

fn to_matrix(n: usize, entries: &[((usize, usize), RealInterval)]) -> Result<IntervalMatrix, IvLinalgError> {
    let mut lo = DenseMatrix::zeros(n, n);
    let mut hi = DenseMatrix::zeros(n, n);
    for &((i, j), v) in entries {
        lo[(i, j)] = v.lo();
        hi[(i, j)] = v.hi();
    }
    IntervalMatrix::from_bounds(&lo, &hi)
}

/// Assembles `A = K + C + c M` and `B = K` as interval matrices.
pub fn fem_assemble(p: &FemProblem) -> Result<FemPair, IvLinalgError> {
    let n = p.n();
    let h = p.h();
    let h2 = h.sqr();
    let conv = h2.scale(p.r_coef).div(RealInterval::point(12.0))?;
    let mass = h2.div(RealInterval::point(24.0))?;
    let sums = accumulate(p);
    let mut re = Vec::with_capacity(sums.len());
    let mut im = Vec::with_capacity(sums.len());
    let mut stiff = Vec::with_capacity(sums.len());
    for (&ij, s) in &sums {
        let k = RealInterval::point(s.k);
        let mass_ij = mass.scale(s.p);
        re.push((ij, k + conv.scale(s.q) + mass_ij.scale(p.c_re)));
        im.push((ij, mass_ij.scale(p.c_im)));
        stiff.push((ij, k));
    }
    let b = to_matrix(n, &stiff)?.with_structure(Structure::Hermitian)?;
    let a = ComplexIntervalMatrix::new(to_matrix(n, &re)?, to_matrix(n, &im)?)?;
    Ok(FemPair { a, b })
}
