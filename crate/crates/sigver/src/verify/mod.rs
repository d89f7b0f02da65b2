//! Verification methods for the singular values of the pencil `(A, B)`,
//! i.e. of `R^{-H} A R^{-1}` with `B = R^H R`.

mod all_values;
mod method_p;
mod shift;
mod upper;

pub use all_values::{invert_enclosure, method_d, verify_all_singular_values};
pub use method_p::method_p;
pub use shift::{method_s1, method_s2, MAX_TAU_RETRIES, MAX_THETA_RETRIES};
pub use upper::upper_bound_sigma_min;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::approx::ApproxError;
use crate::interval::IntervalError;
use crate::ivlinalg::{real_embedding, ComplexIntervalMatrix, IntervalMatrix, IvLinalgError};

/// Default shrink factor for the shift methods.
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    P,
    D,
    S1,
    S2,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::P, Method::D, Method::S1, Method::S2];

    pub fn name(self) -> &'static str {
        match self {
            Method::P => "P",
            Method::D => "D",
            Method::S1 => "S1",
            Method::S2 => "S2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p" => Ok(Method::P),
            "d" => Ok(Method::D),
            "s1" => Ok(Method::S1),
            "s2" => Ok(Method::S2),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

/// Which residual bound feeds the all-values enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DeltaVariant {
    /// `||U^T A V - Sigma||` through the residual identity; tightest.
    #[default]
    D1,
    /// `||U^T (A V - B U Sigma)|| + alpha sigma_max`.
    D2,
    /// `||U^T|| ||A V - B U Sigma|| + alpha sigma_max`; cheapest.
    D3,
}

impl DeltaVariant {
    pub const ALL: [DeltaVariant; 3] = [DeltaVariant::D1, DeltaVariant::D2, DeltaVariant::D3];

    pub fn index(self) -> usize {
        match self {
            DeltaVariant::D1 => 0,
            DeltaVariant::D2 => 1,
            DeltaVariant::D3 => 2,
        }
    }
}

impl fmt::Display for DeltaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaVariant::D1 => "d1",
            DeltaVariant::D2 => "d2",
            DeltaVariant::D3 => "d3",
        })
    }
}

impl FromStr for DeltaVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d1" => Ok(DeltaVariant::D1),
            "d2" => Ok(DeltaVariant::D2),
            "d3" => Ok(DeltaVariant::D3),
            other => Err(format!("unknown delta variant '{other}'")),
        }
    }
}

/// Enclosures `lower[i] <= sigma_i <= upper[i]`, non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValueEnclosure {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub delta_variant: DeltaVariant,
    /// Approximate values the enclosures are centred on, same order.
    pub sigma_hat: Vec<f64>,
}

impl SingularValueEnclosure {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn contains(&self, i: usize, x: f64) -> bool {
        self.lower[i] <= x && x <= self.upper[i]
    }

    /// Enclosure of the smallest singular value.
    pub fn sigma_min(&self) -> Option<(f64, f64)> {
        let k = self.len().checked_sub(1)?;
        Some((self.lower[k], self.upper[k]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Verified,
    Inconclusive,
}

/// Verified bounds on `sigma_min` with the diagnostics of the method used.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaMinBound {
    pub method: Method,
    pub status: BoundStatus,
    /// `0` when nothing was proven.
    pub lower: f64,
    pub upper: Option<f64>,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub residual_delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
}

impl SigmaMinBound {
    pub fn empty(method: Method) -> Self {
        Self {
            method,
            status: BoundStatus::Inconclusive,
            lower: 0.0,
            upper: None,
            theta: None,
            tau: None,
            residual_delta: None,
            epsilon: None,
            alpha: None,
            beta: None,
            delta: None,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == BoundStatus::Verified && self.lower > 0.0
    }

    /// Upper bound on `sigma_min^{-1}`, if a positive lower bound exists.
    pub fn inv_upper(&self) -> Option<f64> {
        (self.lower > 0.0).then(|| crate::interval::rounding::dr::div_up(1.0, self.lower))
    }

    fn from_enclosure(enc: &SingularValueEnclosure) -> Self {
        let (lo, hi) = enc.sigma_min().unwrap_or((0.0, f64::INFINITY));
        Self {
            status: if lo > 0.0 { BoundStatus::Verified } else { BoundStatus::Inconclusive },
            lower: lo,
            upper: Some(hi),
            alpha: Some(enc.alpha),
            beta: Some(enc.beta),
            delta: Some(enc.delta),
            ..Self::empty(Method::D)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("A and B must be square and of equal size")]
    DimensionMismatch,
    #[error("B must be flagged Hermitian")]
    NotHermitian,
    #[error("positive definiteness of B could not be proven")]
    NotProvablyPositiveDefinite,
    #[error("A could not be proven nonsingular")]
    NotVerifiablyNonsingular,
    #[error("orthogonality defect too large (alpha = {alpha:e}, beta = {beta:e})")]
    OrthogonalityDefectTooLarge { alpha: f64, beta: f64 },
    #[error("lower bound of singular value {index} is not positive")]
    NonpositiveLowerBound { index: usize },
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("approximation failed: {0}")]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Linalg(IvLinalgError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

impl From<IvLinalgError> for VerifyError {
    fn from(e: IvLinalgError) -> Self {
        match e {
            IvLinalgError::NotProvablyPositiveDefinite { .. } => VerifyError::NotProvablyPositiveDefinite,
            IvLinalgError::NotVerifiablyNonsingular => VerifyError::NotVerifiablyNonsingular,
            IvLinalgError::NotHermitian => VerifyError::NotHermitian,
            IvLinalgError::DimensionMismatch { .. } => VerifyError::DimensionMismatch,
            other => VerifyError::Linalg(other),
        }
    }
}

pub(crate) fn check_pencil(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<(), VerifyError> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(VerifyError::DimensionMismatch);
    }
    if !b.is_hermitian() {
        return Err(VerifyError::NotHermitian);
    }
    Ok(())
}

/// Options shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOptions {
    pub epsilon: f64,
    /// Overrides `epsilon` for S1 only.
    pub epsilon_s1: Option<f64>,
    pub delta_variant: DeltaVariant,
}

impl Default for MethodOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            epsilon_s1: None,
            delta_variant: DeltaVariant::D1,
        }
    }
}

/// A real or complex pencil. Complex pencils are handled through the real
/// embedding `[[Re, -Im], [Im, Re]]`, which doubles every singular value's
/// multiplicity.
#[derive(Debug, Clone)]
pub enum Pencil {
    Real { a: IntervalMatrix, b: IntervalMatrix },
    Complex { a: ComplexIntervalMatrix, b: ComplexIntervalMatrix, embedded: Box<(IntervalMatrix, IntervalMatrix)> },
}

impl Pencil {
    pub fn real(a: IntervalMatrix, b: IntervalMatrix) -> Result<Self, VerifyError> {
        check_pencil(&a, &b)?;
        Ok(Pencil::Real { a, b })
    }

    pub fn complex(a: ComplexIntervalMatrix, b: ComplexIntervalMatrix) -> Result<Self, VerifyError> {
        let e = real_embedding(&a, &b)?;
        check_pencil(&e.a, &e.b)?;
        Ok(Pencil::Complex { a, b, embedded: Box::new((e.a, e.b)) })
    }

    /// Order of the original (not embedded) pencil.
    pub fn dim(&self) -> usize {
        match self {
            Pencil::Real { a, .. } => a.rows(),
            Pencil::Complex { a, .. } => a.rows(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Pencil::Complex { .. })
    }

    pub fn nnz(&self) -> (usize, usize) {
        match self {
            Pencil::Real { a, b } => (a.count_nonzeros(), b.count_nonzeros()),
            Pencil::Complex { a, b, .. } => (a.count_nonzeros(), b.count_nonzeros()),
        }
    }

    /// The real pair the methods operate on.
    pub fn real_pair(&self) -> (&IntervalMatrix, &IntervalMatrix) {
        match self {
            Pencil::Real { a, b } => (a, b),
            Pencil::Complex { embedded, .. } => (&embedded.0, &embedded.1),
        }
    }

    /// Enclosures of all singular values of the original pencil.
    pub fn all_singular_values(&self, variant: DeltaVariant) -> Result<SingularValueEnclosure, VerifyError> {
        let (a, b) = self.real_pair();
        let enc = method_d(a, b, variant)?;
        Ok(if self.is_complex() { fold_doubled(&enc) } else { enc })
    }

    /// Bounds on `sigma_min` by the requested method.
    pub fn sigma_min(&self, method: Method, opts: &MethodOptions) -> Result<SigmaMinBound, VerifyError> {
        let (a, b) = self.real_pair();
        match method {
            Method::P => method_p(a, b),
            Method::D => Ok(SigmaMinBound::from_enclosure(&self.all_singular_values(opts.delta_variant)?)),
            Method::S1 => method_s1(a, b, opts.epsilon_s1.unwrap_or(opts.epsilon)),
            Method::S2 => method_s2(a, b, opts.epsilon),
        }
    }
}

/// Enclosures of a doubled spectrum `s1, s1, s2, s2, ...` folded to one
/// enclosure per distinct value by intersecting each pair.
pub fn fold_doubled(enc: &SingularValueEnclosure) -> SingularValueEnclosure {
    let n = enc.len() / 2;
    let pick = |k: usize| -> (f64, f64, f64) {
        let (i, j) = (2 * k, 2 * k + 1);
        let lo = enc.lower[i].max(enc.lower[j]);
        let hi = enc.upper[i].min(enc.upper[j]);
        // the intersection is never empty for a true doubled spectrum
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (enc.lower[j], enc.upper[i]) };
        (lo, hi, 0.5 * (enc.sigma_hat[i] + enc.sigma_hat[j]))
    };
    let folded: Vec<_> = (0..n).map(pick).collect();
    SingularValueEnclosure {
        lower: folded.iter().map(|t| t.0).collect(),
        upper: folded.iter().map(|t| t.1).collect(),
        alpha: enc.alpha,
        beta: enc.beta,
        delta: enc.delta,
        delta_variant: enc.delta_variant,
        sigma_hat: folded.iter().map(|t| t.2).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    #[test]
    fn parse_names() {
        assert_eq!("s2".parse::<Method>().unwrap(), Method::S2);
        assert_eq!("D3".parse::<DeltaVariant>().unwrap(), DeltaVariant::D3);
        assert!("x".parse::<Method>().is_err());
    }

    #[test]
    fn complex_diagonal_pencil_folds() {
        // A = diag(3i, 1 + i), B = I: sigma = 3, sqrt 2
        let re = DenseMatrix::diag(&[0.0, 1.0]);
        let im = DenseMatrix::diag(&[3.0, 1.0]);
        let a = ComplexIntervalMatrix::new(IntervalMatrix::from_point(re), IntervalMatrix::from_point(im)).unwrap();
        let b = ComplexIntervalMatrix::from_point(DenseMatrix::identity(2), DenseMatrix::zeros(2, 2))
            .unwrap()
            .with_hermitian()
            .unwrap();
        let p = Pencil::complex(a, b).unwrap();
        let e = p.all_singular_values(DeltaVariant::D1).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.contains(0, 3.0));
        assert!(e.lower[1] <= 2f64.sqrt() && 2f64.sqrt() <= e.upper[1]);
        for m in Method::ALL {
            let r = p.sigma_min(m, &MethodOptions::default()).unwrap();
            assert!(r.is_verified(), "{m}");
            assert!(r.lower <= 2f64.sqrt());
            if let Some(u) = r.upper {
                assert!(u >= 2f64.sqrt());
            }
        }
    }

    #[test]
    fn unflagged_weight_is_rejected() {
        let a = IntervalMatrix::from_point(DenseMatrix::identity(2));
        let b = a.clone().with_structure(crate::ivlinalg::Structure::General).unwrap();
        assert!(matches!(Pencil::real(a, b), Err(VerifyError::NotHermitian)));
    }
}
