use crate::dense::DenseMatrix;
use crate::interval::rounding::dr;
use crate::interval::{ComplexInterval, RealInterval, ETA};

use super::IvLinalgError;

/// Rounded sum and the exact magnitude-safe error of it.
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return (s, 0.0);
    }
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Rounded product and an upper bound on the magnitude of its error.
#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return (p, 0.0);
    }
    if p.abs() < 1e-280 {
        return (p, ETA);
    }
    (p, a.mul_add(b, -p).abs())
}

/// Structural promise attached to an interval matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    General,
    /// Every entry interval equals its transposed partner setwise.
    Hermitian,
    /// Entries strictly below the diagonal are exactly zero.
    UpperTriangular,
}

/// Real interval matrix in midpoint-radius form.
///
/// Entry `(i, j)` encloses `[mid - rad, mid + rad]` evaluated with outward
/// rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    mid: DenseMatrix,
    rad: DenseMatrix,
    structure: Structure,
    point: bool,
}

fn check_rad(rad: &DenseMatrix) -> Result<bool, IvLinalgError> {
    let mut point = true;
    for &r in rad.as_slice() {
        if r.is_nan() || r < 0.0 {
            return Err(IvLinalgError::InvalidRadius);
        }
        if r != 0.0 {
            point = false;
        }
    }
    Ok(point)
}

impl IntervalMatrix {
    pub fn from_point(m: DenseMatrix) -> Self {
        let rad = DenseMatrix::zeros(m.rows(), m.cols());
        Self {
            mid: m,
            rad,
            structure: Structure::General,
            point: true,
        }
    }

    pub fn from_mid_rad(mid: DenseMatrix, rad: DenseMatrix) -> Result<Self, IvLinalgError> {
        if mid.shape() != rad.shape() {
            return Err(IvLinalgError::DimensionMismatch {
                expected: mid.shape(),
                found: rad.shape(),
            });
        }
        if mid.as_slice().iter().any(|x| x.is_nan()) {
            return Err(IvLinalgError::NonFinite);
        }
        let point = check_rad(&rad)?;
        Ok(Self {
            mid,
            rad,
            structure: Structure::General,
            point,
        })
    }

    /// Builds from entrywise intervals.
    pub fn from_intervals(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RealInterval) -> Self {
        let mut mid = DenseMatrix::zeros(rows, cols);
        let mut rad = DenseMatrix::zeros(rows, cols);
        let mut point = true;
        for i in 0..rows {
            for j in 0..cols {
                let (m, r) = f(i, j).mid_rad();
                mid[(i, j)] = m;
                rad[(i, j)] = r;
                point &= r == 0.0;
            }
        }
        Self {
            mid,
            rad,
            structure: Structure::General,
            point,
        }
    }

    /// Builds from entrywise lower and upper bounds.
    pub fn from_bounds(lo: &DenseMatrix, hi: &DenseMatrix) -> Result<Self, IvLinalgError> {
        if lo.shape() != hi.shape() {
            return Err(IvLinalgError::DimensionMismatch {
                expected: lo.shape(),
                found: hi.shape(),
            });
        }
        let mut err = None;
        let m = Self::from_intervals(lo.rows(), lo.cols(), |i, j| match RealInterval::new(lo[(i, j)], hi[(i, j)]) {
            Ok(x) => x,
            Err(e) => {
                err = Some(e);
                RealInterval::zero()
            }
        });
        match err {
            Some(e) => Err(e.into()),
            None => Ok(m),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_point(DenseMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_point(DenseMatrix::identity(n)).with_structure_unchecked(Structure::Hermitian)
    }

    pub fn rows(&self) -> usize {
        self.mid.rows()
    }

    pub fn cols(&self) -> usize {
        self.mid.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mid.shape()
    }

    pub fn is_square(&self) -> bool {
        self.mid.is_square()
    }

    pub fn mid(&self) -> &DenseMatrix {
        &self.mid
    }

    pub fn rad(&self) -> &DenseMatrix {
        &self.rad
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn is_hermitian(&self) -> bool {
        self.structure == Structure::Hermitian
    }

    /// `true` when every radius is zero.
    pub fn is_point(&self) -> bool {
        self.point
    }

    pub fn entry(&self, i: usize, j: usize) -> RealInterval {
        let m = self.mid[(i, j)];
        let r = self.rad[(i, j)];
        RealInterval::from_sorted(dr::sub_down(m, r), dr::add_up(m, r))
    }

    /// Flags the matrix with `s` after checking the promise exactly.
    pub fn with_structure(mut self, s: Structure) -> Result<Self, IvLinalgError> {
        match s {
            Structure::General => {}
            Structure::Hermitian => {
                if !self.is_square() || !self.mid.is_symmetric() || !self.rad.is_symmetric() {
                    return Err(IvLinalgError::NotHermitian);
                }
            }
            Structure::UpperTriangular => {
                let n = self.rows();
                for i in 0..n {
                    for j in 0..i.min(self.cols()) {
                        if self.mid[(i, j)] != 0.0 || self.rad[(i, j)] != 0.0 {
                            return Err(IvLinalgError::NotUpperTriangular);
                        }
                    }
                }
            }
        }
        self.structure = s;
        Ok(self)
    }

    pub(crate) fn with_structure_unchecked(mut self, s: Structure) -> Self {
        self.structure = s;
        self
    }

    /// Intersects each entry with its transposed partner and flags the
    /// result Hermitian. Sound whenever every intended member is symmetric.
    pub fn symmetrized(&self) -> Result<Self, IvLinalgError> {
        if !self.is_square() {
            return Err(IvLinalgError::NotHermitian);
        }
        let n = self.rows();
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        for i in 0..n {
            for j in 0..i {
                let x = self
                    .entry(i, j)
                    .intersect(&self.entry(j, i))
                    .ok_or(IvLinalgError::NotHermitian)?;
                let (m, r) = if self.mid[(i, j)] == self.mid[(j, i)] {
                    (self.mid[(i, j)], self.rad[(i, j)].min(self.rad[(j, i)]))
                } else {
                    x.mid_rad()
                };
                mid[(i, j)] = m;
                mid[(j, i)] = m;
                rad[(i, j)] = r;
                rad[(j, i)] = r;
            }
        }
        let point = check_rad(&rad)?;
        Ok(Self {
            mid,
            rad,
            structure: Structure::Hermitian,
            point,
        })
    }

    pub fn transpose(&self) -> Self {
        let structure = match self.structure {
            Structure::Hermitian => Structure::Hermitian,
            _ => Structure::General,
        };
        Self {
            mid: self.mid.transpose(),
            rad: self.rad.transpose(),
            structure,
            point: self.point,
        }
    }

    /// Entrywise upper bound of `|X|` over all members.
    pub fn mag(&self) -> DenseMatrix {
        self.mid.zip_map(&self.rad, |m, r| dr::add_up(m.abs(), r))
    }

    /// Entrywise lower bound on `|X|`.
    pub fn mig(&self) -> DenseMatrix {
        self.mid.zip_map(&self.rad, |m, r| dr::sub_down(m.abs(), r).max(0.0))
    }

    pub fn inf(&self) -> DenseMatrix {
        self.mid.zip_map(&self.rad, dr::sub_down)
    }

    pub fn sup(&self) -> DenseMatrix {
        self.mid.zip_map(&self.rad, dr::add_up)
    }

    /// `true` if the point matrix `x` is a member.
    pub fn contains(&self, x: &DenseMatrix) -> bool {
        x.shape() == self.shape()
            && x.as_slice()
                .iter()
                .zip(self.mid.as_slice().iter().zip(self.rad.as_slice()))
                .all(|(&v, (&m, &r))| dr::sub_down(m, r) <= v && v <= dr::add_up(m, r))
    }

    /// `true` if every member of `other` is a member of `self`.
    pub fn encloses(&self, other: &IntervalMatrix) -> bool {
        other.shape() == self.shape()
            && (0..self.rows()).all(|i| (0..self.cols()).all(|j| self.entry(i, j).encloses(&other.entry(i, j))))
    }

    fn combine(&self, o: &Self, sign: f64) -> Result<Self, IvLinalgError> {
        if self.shape() != o.shape() {
            return Err(IvLinalgError::DimensionMismatch {
                expected: self.shape(),
                found: o.shape(),
            });
        }
        let mut mid = DenseMatrix::zeros(self.rows(), self.cols());
        let mut rad = DenseMatrix::zeros(self.rows(), self.cols());
        let (am, ar) = (self.mid.as_slice(), self.rad.as_slice());
        let (bm, br) = (o.mid.as_slice(), o.rad.as_slice());
        for (k, (m, r)) in mid.as_mut_slice().iter_mut().zip(rad.as_mut_slice()).enumerate() {
            let (s, e) = two_sum(am[k], sign * bm[k]);
            *m = s;
            *r = dr::add_up(dr::add_up(ar[k], br[k]), e.abs());
        }
        if !mid.is_finite() {
            return Err(IvLinalgError::NonFinite);
        }
        let structure = if self.structure == o.structure && self.structure != Structure::UpperTriangular {
            self.structure
        } else {
            Structure::General
        };
        let point = check_rad(&rad)?;
        Ok(Self {
            mid,
            rad,
            structure,
            point,
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self, IvLinalgError> {
        self.combine(o, 1.0)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, IvLinalgError> {
        self.combine(o, -1.0)
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: self.mid.scaled(-1.0),
            rad: self.rad.clone(),
            structure: match self.structure {
                Structure::UpperTriangular => Structure::UpperTriangular,
                s => s,
            },
            point: self.point,
        }
    }

    /// Product with a point scalar.
    pub fn scale(&self, s: f64) -> Self {
        let sa = s.abs();
        let mut mid = DenseMatrix::zeros(self.rows(), self.cols());
        let mut rad = DenseMatrix::zeros(self.rows(), self.cols());
        let (xm, xr) = (self.mid.as_slice(), self.rad.as_slice());
        for (k, (m, r)) in mid.as_mut_slice().iter_mut().zip(rad.as_mut_slice()).enumerate() {
            let (p, e) = two_prod(s, xm[k]);
            *m = p;
            *r = if xr[k] == 0.0 { e } else { dr::add_up(dr::mul_up(sa, xr[k]), e) };
        }
        let point = rad.as_slice().iter().all(|&r| r == 0.0);
        Self {
            mid,
            rad,
            structure: self.structure,
            point,
        }
    }

    /// `X + s I`.
    pub fn add_diagonal(&self, s: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows().min(self.cols()) {
            let (m, e) = two_sum(self.mid[(i, i)], s);
            out.mid[(i, i)] = m;
            out.rad[(i, i)] = dr::add_up(self.rad[(i, i)], e.abs());
        }
        out.point = out.rad.as_slice().iter().all(|&r| r == 0.0);
        out
    }

    /// Widens every entry by `r >= 0`.
    pub fn inflated(&self, r: f64) -> Self {
        if r == 0.0 {
            return self.clone();
        }
        Self {
            mid: self.mid.clone(),
            rad: self.rad.map(|x| dr::add_up(x, r)),
            structure: self.structure,
            point: false,
        }
    }

    /// Assembles `[[a11, a12], [a21, a22]]`.
    pub fn block2x2(a11: &Self, a12: &Self, a21: &Self, a22: &Self) -> Result<Self, IvLinalgError> {
        let (r1, c1) = a11.shape();
        let (r2, c2) = a22.shape();
        if a12.shape() != (r1, c2) || a21.shape() != (r2, c1) {
            return Err(IvLinalgError::DimensionMismatch {
                expected: (r1, c2),
                found: a12.shape(),
            });
        }
        let mut mid = DenseMatrix::zeros(r1 + r2, c1 + c2);
        let mut rad = DenseMatrix::zeros(r1 + r2, c1 + c2);
        for (blk, r0, c0) in [(a11, 0, 0), (a12, 0, c1), (a21, r1, 0), (a22, r1, c1)] {
            mid.set_submatrix(r0, c0, &blk.mid);
            rad.set_submatrix(r0, c0, &blk.rad);
        }
        let point = [a11, a12, a21, a22].iter().all(|b| b.point);
        Ok(Self {
            mid,
            rad,
            structure: Structure::General,
            point,
        })
    }

    pub fn count_nonzeros(&self) -> usize {
        self.mid
            .as_slice()
            .iter()
            .zip(self.rad.as_slice())
            .filter(|(&m, &r)| m != 0.0 || r != 0.0)
            .count()
    }
}

/// Complex interval matrix stored as real and imaginary interval parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexIntervalMatrix {
    re: IntervalMatrix,
    im: IntervalMatrix,
    hermitian: bool,
}

impl ComplexIntervalMatrix {
    pub fn new(re: IntervalMatrix, im: IntervalMatrix) -> Result<Self, IvLinalgError> {
        if re.shape() != im.shape() {
            return Err(IvLinalgError::DimensionMismatch {
                expected: re.shape(),
                found: im.shape(),
            });
        }
        Ok(Self {
            re: re.with_structure_unchecked(Structure::General),
            im: im.with_structure_unchecked(Structure::General),
            hermitian: false,
        })
    }

    pub fn from_point(re: DenseMatrix, im: DenseMatrix) -> Result<Self, IvLinalgError> {
        Self::new(IntervalMatrix::from_point(re), IntervalMatrix::from_point(im))
    }

    /// Flags the matrix Hermitian after checking `re` symmetric and `im`
    /// antisymmetric exactly (zero imaginary diagonal midpoints).
    pub fn with_hermitian(mut self) -> Result<Self, IvLinalgError> {
        let n = self.re.rows();
        if !self.re.is_square() {
            return Err(IvLinalgError::NotHermitian);
        }
        for i in 0..n {
            if self.im.mid[(i, i)] != 0.0 {
                return Err(IvLinalgError::NotHermitian);
            }
            for j in 0..i {
                let ok = self.re.mid[(i, j)] == self.re.mid[(j, i)]
                    && self.re.rad[(i, j)] == self.re.rad[(j, i)]
                    && self.im.mid[(i, j)] == -self.im.mid[(j, i)]
                    && self.im.rad[(i, j)] == self.im.rad[(j, i)];
                if !ok {
                    return Err(IvLinalgError::NotHermitian);
                }
            }
        }
        self.re = self.re.with_structure(Structure::Hermitian)?;
        self.hermitian = true;
        Ok(self)
    }

    pub fn re(&self) -> &IntervalMatrix {
        &self.re
    }

    pub fn im(&self) -> &IntervalMatrix {
        &self.im
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> ComplexInterval {
        ComplexInterval::new(self.re.entry(i, j), self.im.entry(i, j))
    }

    pub fn count_nonzeros(&self) -> usize {
        (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .filter(|&j| {
                        self.re.mid[(i, j)] != 0.0
                            || self.re.rad[(i, j)] != 0.0
                            || self.im.mid[(i, j)] != 0.0
                            || self.im.rad[(i, j)] != 0.0
                    })
                    .count()
            })
            .sum()
    }

    /// Real `2n x 2n` matrix `[[Re, -Im], [Im, Re]]`; exact.
    pub fn real_embedding(&self) -> IntervalMatrix {
        let neg_im = self.im.neg();
        let e = IntervalMatrix::block2x2(&self.re, &neg_im, &self.im, &self.re).expect("square blocks");
        if self.hermitian {
            e.with_structure_unchecked(Structure::Hermitian)
        } else {
            e
        }
    }
}

/// Real embeddings of a complex pencil.
#[derive(Debug, Clone)]
pub struct EmbeddingPair {
    pub a: IntervalMatrix,
    pub b: IntervalMatrix,
}

/// Embeds `(A, B)` as real `2n x 2n` matrices. Each singular value of the
/// complex pencil appears twice in the embedded one.
pub fn real_embedding(a: &ComplexIntervalMatrix, b: &ComplexIntervalMatrix) -> Result<EmbeddingPair, IvLinalgError> {
    if !b.is_hermitian() {
        return Err(IvLinalgError::NotHermitian);
    }
    if a.rows() != a.cols() || a.rows() != b.rows() {
        return Err(IvLinalgError::DimensionMismatch {
            expected: (b.rows(), b.rows()),
            found: (a.rows(), a.cols()),
        });
    }
    Ok(EmbeddingPair {
        a: a.real_embedding(),
        b: b.real_embedding(),
    })
}

/// The symmetric `2n x 2n` matrix `[[theta B, A^T], [A, theta B]]`.
pub fn augment_pair(a: &IntervalMatrix, b: &IntervalMatrix, theta: f64) -> Result<IntervalMatrix, IvLinalgError> {
    if !b.is_hermitian() {
        return Err(IvLinalgError::NotHermitian);
    }
    if a.shape() != b.shape() {
        return Err(IvLinalgError::DimensionMismatch {
            expected: b.shape(),
            found: a.shape(),
        });
    }
    let tb = b.scale(theta);
    let g = IntervalMatrix::block2x2(&tb, &a.transpose(), a, &tb)?;
    Ok(g.with_structure_unchecked(Structure::Hermitian))
}
