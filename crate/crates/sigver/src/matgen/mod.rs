//! Seeded test-matrix generators.
//!
//! Every generator draws from `ChaCha20Rng::seed_from_u64(seed)` and turns
//! the stream into standard normals with `rand_distr::StandardNormal`,
//! filling matrices in row-major order. Identical seeds give bit-identical
//! matrices on every platform.

mod fem;

pub use fem::{fem_assemble, FemPair, FemProblem};

use std::fmt;
use std::str::FromStr;

use faer::linalg::solvers::Qr;
use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::dense::DenseMatrix;

/// The generator behind every seeded matrix.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha20Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn randn_with(rng: &mut ChaCha20Rng, n: usize) -> DenseMatrix {
    let data = (0..n * n).map(|_| normal(rng)).collect();
    DenseMatrix::from_vec(n, n, data)
}

/// `n x n` matrix of i.i.d. standard normal entries.
pub fn gen_randn(n: usize, seed: u64) -> DenseMatrix {
    randn_with(&mut rng_from_seed(seed), n)
}

/// `n I + (G + G^T) / 2` with `G` standard normal; symmetric exactly.
pub fn gen_shifted_sym(n: usize, seed: u64) -> DenseMatrix {
    let g = gen_randn(n, seed);
    let mut s = g.symmetric_part();
    for i in 0..n {
        s[(i, i)] += n as f64;
    }
    s
}

/// Geometric singular values `kappa^{-i/(n-1)}`, `i = 0..n`.
pub fn geometric_singular_values(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n).map(|i| kappa.powf(-(i as f64) / (n - 1) as f64)).collect()
}

/// Haar-distributed orthogonal factor: `Q` of a Gaussian matrix with the
/// signs of `diag(R)` folded into the columns.
fn haar_orthogonal(rng: &mut ChaCha20Rng, n: usize) -> DenseMatrix {
    let g = randn_with(rng, n);
    let qr = Qr::new(g.as_ref());
    let q = qr.compute_Q();
    let r = qr.R();
    DenseMatrix::from_fn(n, n, |i, j| if r[(j, j)] < 0.0 { -q[(i, j)] } else { q[(i, j)] })
}

/// `U diag(sigma) V^T` with geometric `sigma` from `1` to `1 / kappa`.
pub fn gen_randsvd(n: usize, kappa: f64, seed: u64) -> DenseMatrix {
    assert!(kappa >= 1.0, "kappa must be at least 1");
    let mut rng = rng_from_seed(seed);
    let u = haar_orthogonal(&mut rng, n);
    let v = haar_orthogonal(&mut rng, n);
    let s = geometric_singular_values(n, kappa);
    let us = DenseMatrix::from_fn(n, n, |i, j| u[(i, j)] * s[j]);
    us.matmul_t(&v)
}

/// `Q diag(sigma) Q^T`, symmetric positive definite with condition `kappa`.
pub fn gen_spd_randsvd(n: usize, kappa: f64, seed: u64) -> DenseMatrix {
    assert!(kappa >= 1.0, "kappa must be at least 1");
    let mut rng = rng_from_seed(seed);
    let q = haar_orthogonal(&mut rng, n);
    let s = geometric_singular_values(n, kappa);
    let qs = DenseMatrix::from_fn(n, n, |i, j| q[(i, j)] * s[j]);
    qs.matmul_t(&q).symmetric_part()
}

/// Complex matrix split into real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDense {
    pub re: DenseMatrix,
    pub im: DenseMatrix,
}

fn complex_randn_with(rng: &mut ChaCha20Rng, n: usize) -> Mat<c64> {
    let mut m = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re = normal(rng);
            let im = normal(rng);
            m[(i, j)] = c64::new(re, im);
        }
    }
    m
}

fn haar_unitary(rng: &mut ChaCha20Rng, n: usize) -> Mat<c64> {
    let g = complex_randn_with(rng, n);
    let qr = Qr::new(g.as_ref());
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        let d = r[(j, j)];
        let a = d.norm();
        if a > 0.0 {
            let ph = d / a;
            for i in 0..n {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

fn split(m: &Mat<c64>) -> ComplexDense {
    ComplexDense {
        re: DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re),
        im: DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].im),
    }
}

fn scaled_product(u: &Mat<c64>, s: &[f64], v: &Mat<c64>) -> Mat<c64> {
    let n = u.nrows();
    let us = Mat::<c64>::from_fn(n, n, |i, j| u[(i, j)] * s[j]);
    &us * v.adjoint()
}

/// Complex i.i.d. matrix with standard normal real and imaginary parts.
pub fn gen_complex_randn(n: usize, seed: u64) -> ComplexDense {
    split(&complex_randn_with(&mut rng_from_seed(seed), n))
}

/// Complex `U diag(sigma) V^H` with unitary `U`, `V`.
pub fn gen_complex_randsvd(n: usize, kappa: f64, seed: u64) -> ComplexDense {
    assert!(kappa >= 1.0, "kappa must be at least 1");
    let mut rng = rng_from_seed(seed);
    let u = haar_unitary(&mut rng, n);
    let v = haar_unitary(&mut rng, n);
    split(&scaled_product(&u, &geometric_singular_values(n, kappa), &v))
}

/// Hermitian positive definite `Q diag(sigma) Q^H`; the real part is
/// symmetric and the imaginary part antisymmetric exactly.
pub fn gen_complex_spd_randsvd(n: usize, kappa: f64, seed: u64) -> ComplexDense {
    assert!(kappa >= 1.0, "kappa must be at least 1");
    let mut rng = rng_from_seed(seed);
    let q = haar_unitary(&mut rng, n);
    let h = split(&scaled_product(&q, &geometric_singular_values(n, kappa), &q));
    let re = h.re.symmetric_part();
    let im = DenseMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 0.5 * (h.im[(i, j)] - h.im[(j, i)]) });
    ComplexDense { re, im }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Randn,
    ShiftedSym,
    Randsvd,
    SpdRandsvd,
    Identity,
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::Randn => "randn",
            GenKind::ShiftedSym => "shifted_sym",
            GenKind::Randsvd => "randsvd",
            GenKind::SpdRandsvd => "spd_randsvd",
            GenKind::Identity => "identity",
        })
    }
}

impl FromStr for GenKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "randn" => Ok(GenKind::Randn),
            "shifted_sym" => Ok(GenKind::ShiftedSym),
            "randsvd" => Ok(GenKind::Randsvd),
            "spd_randsvd" => Ok(GenKind::SpdRandsvd),
            "identity" | "eye" => Ok(GenKind::Identity),
            other => Err(format!("unknown generator '{other}'")),
        }
    }
}

impl GenKind {
    /// Whether the output is symmetric (and, for these kinds, positive
    /// definite with high probability).
    pub fn is_symmetric(self) -> bool {
        matches!(self, GenKind::ShiftedSym | GenKind::SpdRandsvd | GenKind::Identity)
    }
}

/// Fully determines one generated matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GenKind,
    pub n: usize,
    /// Target condition number; used by the randsvd kinds only.
    pub kappa: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GenKind, n: usize, kappa: f64, seed: u64) -> Self {
        Self { kind, n, kappa, seed }
    }

    pub fn generate(&self) -> DenseMatrix {
        assert!(self.n >= 1, "n must be positive");
        match self.kind {
            GenKind::Randn => gen_randn(self.n, self.seed),
            GenKind::ShiftedSym => gen_shifted_sym(self.n, self.seed),
            GenKind::Randsvd => gen_randsvd(self.n, self.kappa, self.seed),
            GenKind::SpdRandsvd => gen_spd_randsvd(self.n, self.kappa, self.seed),
            GenKind::Identity => DenseMatrix::identity(self.n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{approx_svd, sym_eigenvalues};

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(gen_randn(7, 42), gen_randn(7, 42));
        assert_ne!(gen_randn(7, 42), gen_randn(7, 43));
        assert_eq!(gen_randsvd(9, 1e3, 1), gen_randsvd(9, 1e3, 1));
    }

    #[test]
    fn randn_moments() {
        let a = gen_randn(500, 7);
        let n = a.as_slice().len() as f64;
        let mean = a.as_slice().iter().sum::<f64>() / n;
        let var = a.as_slice().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        // 5 sigma of the sample mean and sample variance
        assert!(mean.abs() < 5.0 / n.sqrt());
        assert!((var - 1.0).abs() < 5.0 * (2.0 / n).sqrt());
    }

    #[test]
    fn randsvd_hits_condition() {
        let a = gen_randsvd(100, 1e6, 3);
        let s = approx_svd(&a).unwrap().s;
        assert!((s[0] - 1.0).abs() < 1e-2);
        assert!((s[0] / s[99] / 1e6 - 1.0).abs() < 1e-2);
        let q = gen_randsvd(20, 1.0, 3);
        let s = approx_svd(&q).unwrap().s;
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-13));
    }

    #[test]
    fn spd_randsvd_is_spd_with_condition() {
        let b = gen_spd_randsvd(60, 1e4, 5);
        assert!(b.is_symmetric());
        let e = sym_eigenvalues(&b).unwrap();
        assert!(e[0] > 0.0);
        assert!((e[59] / e[0] / 1e4 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn shifted_sym_is_symmetric_positive() {
        let b = gen_shifted_sym(50, 11);
        assert!(b.is_symmetric());
        assert!(sym_eigenvalues(&b).unwrap()[0] > 0.0);
    }

    #[test]
    fn complex_hermitian_parts_are_exact() {
        let h = gen_complex_spd_randsvd(8, 100.0, 2);
        assert!(h.re.is_symmetric());
        for i in 0..8 {
            assert_eq!(h.im[(i, i)], 0.0);
            for j in 0..8 {
                assert_eq!(h.im[(i, j)], -h.im[(j, i)]);
            }
        }
    }

    #[test]
    fn complex_randsvd_embedding_has_doubled_values() {
        let c = gen_complex_randsvd(6, 1e2, 9);
        let e = DenseMatrix::from_fn(12, 12, |i, j| match (i < 6, j < 6) {
            (true, true) | (false, false) => c.re[(i % 6, j % 6)],
            (true, false) => -c.im[(i, j - 6)],
            (false, true) => c.im[(i - 6, j)],
        });
        let s = approx_svd(&e).unwrap().s;
        let want = geometric_singular_values(6, 1e2);
        for k in 0..6 {
            assert!((s[2 * k] - want[k]).abs() < 1e-12 && (s[2 * k + 1] - want[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("spd-randsvd".parse::<GenKind>().unwrap(), GenKind::SpdRandsvd);
        assert_eq!(GenKind::ShiftedSym.to_string(), "shifted_sym");
    }
}
