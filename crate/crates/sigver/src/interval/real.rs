use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use super::rounding::{DefaultRounding, RoundingBackend};
use super::IntervalError;

/// A closed real interval `[lo, hi]` with binary64 endpoints.
///
/// Endpoints may be infinite; NaN endpoints and `lo > hi` are rejected at
/// construction.
#[derive(Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NanEndpoint);
        }
        if lo > hi {
            return Err(IntervalError::InvertedEndpoints { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// # Panics
    /// Panics if `x` is NaN.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "point interval from NaN");
        Self { lo: x, hi: x }
    }

    /// Interval `[m - r, m + r]` rounded outward; `r` must be nonnegative.
    pub fn from_mid_rad(m: f64, r: f64) -> Result<Self, IntervalError> {
        if m.is_nan() || r.is_nan() {
            return Err(IntervalError::NanEndpoint);
        }
        if r < 0.0 {
            return Err(IntervalError::NegativeRadius(r));
        }
        Ok(Self {
            lo: DefaultRounding::sub_down(m, r),
            hi: DefaultRounding::add_up(m, r),
        })
    }

    pub(crate) fn from_sorted(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "unsorted endpoints {lo} {hi}");
        Self { lo, hi }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `true` if `other` is a subset of `self`.
    pub fn encloses(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        DefaultRounding::sub_up(self.hi, self.lo)
    }

    /// Midpoint and a radius such that `[mid - rad, mid + rad]` encloses `self`.
    pub fn mid_rad(&self) -> (f64, f64) {
        if self.lo == self.hi {
            return (self.lo, 0.0);
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            let mid = if self.lo.is_finite() {
                self.lo
            } else if self.hi.is_finite() {
                self.hi
            } else {
                0.0
            };
            return (mid, f64::INFINITY);
        }
        let mid = 0.5 * self.lo + 0.5 * self.hi;
        let rad = DefaultRounding::sub_up(self.hi, mid).max(DefaultRounding::sub_up(mid, self.lo));
        (mid, rad)
    }

    /// `max |x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `min |x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn add_with<R: RoundingBackend>(self, o: Self) -> Self {
        Self::from_sorted(R::add_down(self.lo, o.lo), R::add_up(self.hi, o.hi))
    }

    pub fn sub_with<R: RoundingBackend>(self, o: Self) -> Self {
        Self::from_sorted(R::sub_down(self.lo, o.hi), R::sub_up(self.hi, o.lo))
    }

    pub fn mul_with<R: RoundingBackend>(self, o: Self) -> Self {
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        if a >= 0.0 && c >= 0.0 {
            return Self::from_sorted(R::mul_down(a, c), R::mul_up(b, d));
        }
        let lo = R::mul_down(a, c)
            .min(R::mul_down(a, d))
            .min(R::mul_down(b, c))
            .min(R::mul_down(b, d));
        let hi = R::mul_up(a, c)
            .max(R::mul_up(a, d))
            .max(R::mul_up(b, c))
            .max(R::mul_up(b, d));
        Self::from_sorted(lo, hi)
    }

    /// Product with a point value.
    pub fn scale_with<R: RoundingBackend>(self, s: f64) -> Self {
        if s >= 0.0 {
            Self::from_sorted(R::mul_down(self.lo, s), R::mul_up(self.hi, s))
        } else {
            Self::from_sorted(R::mul_down(self.hi, s), R::mul_up(self.lo, s))
        }
    }

    pub fn div_with<R: RoundingBackend>(self, o: Self) -> Result<Self, IntervalError> {
        if o.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        let lo = R::div_down(a, c)
            .min(R::div_down(a, d))
            .min(R::div_down(b, c))
            .min(R::div_down(b, d));
        let hi = R::div_up(a, c)
            .max(R::div_up(a, d))
            .max(R::div_up(b, c))
            .max(R::div_up(b, d));
        Ok(Self::from_sorted(lo, hi))
    }

    pub fn sqrt_with<R: RoundingBackend>(self) -> Result<Self, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeSqrt(self.lo));
        }
        Ok(Self::from_sorted(R::sqrt_down(self.lo), R::sqrt_up(self.hi)))
    }

    /// Square, tighter than `x * x` when the interval straddles zero.
    pub fn sqr_with<R: RoundingBackend>(self) -> Self {
        if self.lo >= 0.0 {
            Self::from_sorted(R::mul_down(self.lo, self.lo), R::mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Self::from_sorted(R::mul_down(self.hi, self.hi), R::mul_up(self.lo, self.lo))
        } else {
            let m = self.mag();
            Self::from_sorted(0.0, R::mul_up(m, m))
        }
    }

    pub fn div(self, o: Self) -> Result<Self, IntervalError> {
        self.div_with::<DefaultRounding>(o)
    }

    pub fn sqrt(self) -> Result<Self, IntervalError> {
        self.sqrt_with::<DefaultRounding>()
    }

    pub fn sqr(self) -> Self {
        self.sqr_with::<DefaultRounding>()
    }

    pub fn scale(self, s: f64) -> Self {
        self.scale_with::<DefaultRounding>(s)
    }

    pub fn recip(self) -> Result<Self, IntervalError> {
        Self::point(1.0).div(self)
    }

    /// Interval arithmetic with an explicit backend, for comparisons.
    pub fn with_backend<R: RoundingBackend>(self) -> WithBackend<R> {
        WithBackend {
            iv: self,
            _backend: PhantomData,
        }
    }
}

/// Thin wrapper selecting a rounding backend for operator syntax.
#[derive(Clone, Copy, Debug)]
pub struct WithBackend<R> {
    pub iv: RealInterval,
    _backend: PhantomData<R>,
}

impl<R: RoundingBackend> Add for WithBackend<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.iv.add_with::<R>(o.iv).with_backend()
    }
}

impl<R: RoundingBackend> Sub for WithBackend<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.iv.sub_with::<R>(o.iv).with_backend()
    }
}

impl<R: RoundingBackend> Mul for WithBackend<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.iv.mul_with::<R>(o.iv).with_backend()
    }
}

impl Add for RealInterval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_with::<DefaultRounding>(o)
    }
}

impl Sub for RealInterval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_with::<DefaultRounding>(o)
    }
}

impl Mul for RealInterval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_with::<DefaultRounding>(o)
    }
}

impl Neg for RealInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// Tight bounds `(lo, hi)` on `sqrt(x)` for a nonnegative binary64 `x`.
pub fn sqrt_bounds(x: f64) -> Result<(f64, f64), IntervalError> {
    if x.is_nan() {
        return Err(IntervalError::NanEndpoint);
    }
    if x < 0.0 {
        return Err(IntervalError::NegativeSqrt(x));
    }
    Ok((DefaultRounding::sqrt_down(x), DefaultRounding::sqrt_up(x)))
}
