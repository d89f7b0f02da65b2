//! Directed rounding of the basic operations.
//!
//! Neither backend touches the floating-point control word. The compiler is
//! free to reorder or constant-fold arithmetic across a mode switch, so the
//! switched-mode approach is not reliable from Rust. Instead:
//!
//! * [`ErrorFree`] computes the round-to-nearest result together with the
//!   sign of its exact error (TwoSum, FMA residuals) and steps one ulp only
//!   when the exact result lies on the wrong side. Results are the correctly
//!   rounded directed values except deep in the subnormal range, where it
//!   falls back to unconditional stepping.
//! * [`UlpStep`] always steps one ulp away from the nearest result. It is
//!   simpler and slightly wider.

/// Below this magnitude error-free transformations may lose exactness
/// through underflow, so both backends step unconditionally.
const TINY: f64 = 1.0e-280;

/// Directed-rounding primitives over binary64.
pub trait RoundingBackend {
    /// Short identifier used in reports.
    const NAME: &'static str;

    fn add_down(a: f64, b: f64) -> f64;
    fn add_up(a: f64, b: f64) -> f64;
    fn mul_down(a: f64, b: f64) -> f64;
    fn mul_up(a: f64, b: f64) -> f64;
    /// Caller guarantees `b != 0`.
    fn div_down(a: f64, b: f64) -> f64;
    /// Caller guarantees `b != 0`.
    fn div_up(a: f64, b: f64) -> f64;
    /// Caller guarantees `a >= 0`.
    fn sqrt_down(a: f64) -> f64;
    /// Caller guarantees `a >= 0`.
    fn sqrt_up(a: f64) -> f64;

    fn sub_down(a: f64, b: f64) -> f64 {
        Self::add_down(a, -b)
    }
    fn sub_up(a: f64, b: f64) -> f64 {
        Self::add_up(a, -b)
    }
}

/// Error-free transformation backend (the default).
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorFree;

/// Unconditional one-ulp widening backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct UlpStep;

/// Backend used by all interval types unless stated otherwise.
pub type DefaultRounding = ErrorFree;

// A rounded-to-nearest result `r` that overflowed to infinity while the
// operands were finite has an exact value of the same sign beyond MAX.
#[inline]
fn overflow_down(r: f64) -> f64 {
    if r == f64::INFINITY {
        f64::MAX
    } else {
        r
    }
}

#[inline]
fn finite2(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite()
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

impl RoundingBackend for ErrorFree {
    const NAME: &'static str = "error-free";

    #[inline]
    fn add_down(a: f64, b: f64) -> f64 {
        let s = a + b;
        if s.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !s.is_finite() {
            return if finite2(a, b) { overflow_down(s) } else { s };
        }
        let e = two_sum_err(a, b, s);
        if e.is_nan() || e < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    fn add_up(a: f64, b: f64) -> f64 {
        -Self::add_down(-a, -b)
    }

    #[inline]
    fn mul_down(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if p.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !p.is_finite() {
            return if finite2(a, b) { overflow_down(p) } else { p };
        }
        if p.abs() < TINY {
            return p.next_down();
        }
        let e = a.mul_add(b, -p);
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    }

    #[inline]
    fn mul_up(a: f64, b: f64) -> f64 {
        -Self::mul_down(-a, b)
    }

    #[inline]
    fn div_down(a: f64, b: f64) -> f64 {
        if a == 0.0 && b != 0.0 {
            return 0.0;
        }
        let q = a / b;
        if q.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !q.is_finite() {
            return if finite2(a, b) { overflow_down(q) } else { q };
        }
        if !b.is_finite() {
            // finite / inf: exact zero with a sign, widen toward -inf
            return if q == 0.0 { (-0.0f64).next_down().min(0.0) } else { q };
        }
        if q.abs() < TINY || a.abs() < TINY {
            return q.next_down();
        }
        // a - q*b is exact; the true quotient exceeds q iff r/b > 0.
        let r = (-q).mul_add(b, a);
        if (r < 0.0 && b > 0.0) || (r > 0.0 && b < 0.0) {
            q.next_down()
        } else {
            q
        }
    }

    #[inline]
    fn div_up(a: f64, b: f64) -> f64 {
        -Self::div_down(-a, b)
    }

    #[inline]
    fn sqrt_down(a: f64) -> f64 {
        let r = a.sqrt();
        if !r.is_finite() || r == 0.0 {
            return r;
        }
        if a < TINY {
            return r.next_down().max(0.0);
        }
        let e = (-r).mul_add(r, a);
        if e < 0.0 {
            r.next_down()
        } else {
            r
        }
    }

    #[inline]
    fn sqrt_up(a: f64) -> f64 {
        let r = a.sqrt();
        if !r.is_finite() {
            return r;
        }
        if r == 0.0 {
            return 0.0;
        }
        if a < TINY {
            return r.next_up();
        }
        let e = (-r).mul_add(r, a);
        if e > 0.0 {
            r.next_up()
        } else {
            r
        }
    }
}

impl RoundingBackend for UlpStep {
    const NAME: &'static str = "ulp-step";

    #[inline]
    fn add_down(a: f64, b: f64) -> f64 {
        let s = a + b;
        if s.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !s.is_finite() {
            return if finite2(a, b) { overflow_down(s) } else { s };
        }
        if a == 0.0 || b == 0.0 {
            return s;
        }
        s.next_down()
    }

    #[inline]
    fn add_up(a: f64, b: f64) -> f64 {
        -Self::add_down(-a, -b)
    }

    #[inline]
    fn mul_down(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if p.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !p.is_finite() {
            return if finite2(a, b) { overflow_down(p) } else { p };
        }
        p.next_down()
    }

    #[inline]
    fn mul_up(a: f64, b: f64) -> f64 {
        -Self::mul_down(-a, b)
    }

    #[inline]
    fn div_down(a: f64, b: f64) -> f64 {
        if a == 0.0 && b != 0.0 {
            return 0.0;
        }
        let q = a / b;
        if q.is_nan() {
            return f64::NEG_INFINITY;
        }
        if !q.is_finite() {
            return if finite2(a, b) { overflow_down(q) } else { q };
        }
        q.next_down()
    }

    #[inline]
    fn div_up(a: f64, b: f64) -> f64 {
        -Self::div_down(-a, b)
    }

    #[inline]
    fn sqrt_down(a: f64) -> f64 {
        let r = a.sqrt();
        if !r.is_finite() || r == 0.0 {
            return r;
        }
        r.next_down().max(0.0)
    }

    #[inline]
    fn sqrt_up(a: f64) -> f64 {
        let r = a.sqrt();
        if !r.is_finite() || r == 0.0 {
            return r;
        }
        r.next_up()
    }
}

/// Free functions using [`DefaultRounding`], convenient inside kernels.
pub mod dr {
    use super::{DefaultRounding as R, RoundingBackend};

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        R::add_down(a, b)
    }
    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        R::add_up(a, b)
    }
    #[inline]
    pub fn sub_down(a: f64, b: f64) -> f64 {
        R::sub_down(a, b)
    }
    #[inline]
    pub fn sub_up(a: f64, b: f64) -> f64 {
        R::sub_up(a, b)
    }
    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        R::mul_down(a, b)
    }
    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        R::mul_up(a, b)
    }
    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        R::div_down(a, b)
    }
    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        R::div_up(a, b)
    }
    #[inline]
    pub fn sqrt_down(a: f64) -> f64 {
        R::sqrt_down(a)
    }
    #[inline]
    pub fn sqrt_up(a: f64) -> f64 {
        R::sqrt_up(a)
    }

    /// Upper bound of `sum(xs)` for nonnegative or mixed-sign terms.
    pub fn sum_up(xs: impl IntoIterator<Item = f64>) -> f64 {
        xs.into_iter().fold(0.0, add_up)
    }

    /// Upper bound of the Euclidean norm of `xs`.
    pub fn norm2_up(xs: impl IntoIterator<Item = f64>) -> f64 {
        sqrt_up(xs.into_iter().fold(0.0, |acc, x| add_up(acc, mul_up(x.abs(), x.abs()))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_backend<R: RoundingBackend>() {
        let cases = [
            (1.0, 1e-17),
            (0.1, 0.2),
            (-0.1, 0.3),
            (1e300, 1e300),
            (3.0, 7.0),
            (-2.5, 1e-30),
        ];
        for &(a, b) in &cases {
            let lo = R::add_down(a, b);
            let hi = R::add_up(a, b);
            assert!(lo <= a + b && a + b <= hi);
            assert!(hi.is_finite() || (a + b).is_infinite());
        }
        assert!(R::div_down(1.0, 3.0) < R::div_up(1.0, 3.0));
        assert!(R::sqrt_down(2.0) < R::sqrt_up(2.0));
        assert!(R::mul_down(0.1, 0.1) < R::mul_up(0.1, 0.1));
    }

    #[test]
    fn both_backends_bracket_nearest() {
        check_backend::<ErrorFree>();
        check_backend::<UlpStep>();
    }

    #[test]
    fn exact_operations_stay_exact() {
        assert_eq!(ErrorFree::add_down(1.0, 2.0), 3.0);
        assert_eq!(ErrorFree::add_up(1.0, 2.0), 3.0);
        assert_eq!(ErrorFree::mul_up(3.0, 4.0), 12.0);
        assert_eq!(ErrorFree::div_down(1.0, 4.0), 0.25);
        assert_eq!(ErrorFree::sqrt_down(4.0), 2.0);
        assert_eq!(ErrorFree::sqrt_up(4.0), 2.0);
    }

    #[test]
    fn inexact_sum_has_one_ulp_gap() {
        let lo = ErrorFree::add_down(1.0, 1e-17);
        let hi = ErrorFree::add_up(1.0, 1e-17);
        assert_eq!(lo, 1.0);
        assert_eq!(hi, 1.0f64.next_up());
    }

    #[test]
    fn overflow_is_handled() {
        assert_eq!(ErrorFree::add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(ErrorFree::add_up(f64::MAX, f64::MAX), f64::INFINITY);
        assert_eq!(ErrorFree::mul_up(-1e200, 1e200), f64::MIN);
        assert_eq!(ErrorFree::mul_down(-1e200, 1e200), f64::NEG_INFINITY);
    }

    #[test]
    fn tiny_products_are_widened() {
        let a = 1e-200;
        let lo = ErrorFree::mul_down(a, a);
        let hi = ErrorFree::mul_up(a, a);
        assert!(lo <= 0.0 && hi > 0.0);
    }
}
