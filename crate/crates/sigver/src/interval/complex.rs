use std::ops::{Add, Mul, Neg, Sub};

use super::real::RealInterval;
use super::rounding::dr;

/// Rectangular complex interval `re + i im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        Self { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        Self::new(RealInterval::point(re), RealInterval::point(im))
    }

    pub fn from_real(re: RealInterval) -> Self {
        Self::new(re, RealInterval::zero())
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    /// Midpoint `(re, im)` and per-component radii.
    pub fn mid_rad(&self) -> ((f64, f64), (f64, f64)) {
        let (mr, rr) = self.re.mid_rad();
        let (mi, ri) = self.im.mid_rad();
        ((mr, mi), (rr, ri))
    }

    /// Upper bound on `max |z|` over the rectangle.
    pub fn mag(&self) -> f64 {
        let a = self.re.mag();
        let b = self.im.mag();
        dr::sqrt_up(dr::add_up(dr::mul_up(a, a), dr::mul_up(b, b)))
    }

    /// Enclosure of `|z|^2` over the rectangle.
    pub fn abs_sqr(&self) -> RealInterval {
        self.re.sqr() + self.im.sqr()
    }
}

impl Add for ComplexInterval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexInterval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for ComplexInterval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for ComplexInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_points_contains_exact() {
        let a = ComplexInterval::point(1.0, 2.0);
        let b = ComplexInterval::point(3.0, -1.0);
        let p = a * b;
        assert!(p.contains(5.0, 5.0));
    }

    #[test]
    fn mag_of_three_four() {
        assert_eq!(ComplexInterval::point(3.0, 4.0).mag(), 5.0);
    }

    #[test]
    fn conj_flips_imaginary() {
        let z = ComplexInterval::point(1.0, 2.0).conj();
        assert!(z.contains(1.0, -2.0));
    }
}
