use proptest::prelude::*;
use rug::Float;

use sigver::interval::{sqrt_bounds, ComplexInterval, ErrorFree, RealInterval, UlpStep};

const BITS: u32 = 2200;

fn ex(x: f64) -> Float {
    Float::with_val(BITS, x)
}

fn holds(iv: RealInterval, v: &Float) -> bool {
    *v >= iv.lo() && *v <= iv.hi()
}

fn value() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0, -40i32..40).prop_map(|(m, e)| m * 2f64.powi(e))
}

/// An interval together with a point inside it.
fn interval_with_point() -> impl Strategy<Value = (RealInterval, f64)> {
    (value(), 0.0f64..1e-3, 0.0f64..=1.0).prop_map(|(x, w, t)| {
        let r = x.abs() * w;
        let iv = RealInterval::new(x - r, x + r).unwrap();
        let p = (iv.lo() + t * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi());
        (iv, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arithmetic_contains_point_results((x, a) in interval_with_point(), (y, b) in interval_with_point()) {
        let (ea, eb) = (ex(a), ex(b));
        prop_assert!(holds(x + y, &Float::with_val(BITS, &ea + &eb)));
        prop_assert!(holds(x - y, &Float::with_val(BITS, &ea - &eb)));
        prop_assert!(holds(x * y, &Float::with_val(BITS, &ea * &eb)));
        prop_assert!(holds(x.sqr(), &Float::with_val(BITS, ea.square_ref())));
        prop_assert!(holds(x.scale(b), &Float::with_val(BITS, &ea * &eb)));
    }

    #[test]
    fn both_backends_contain((x, a) in interval_with_point(), (y, b) in interval_with_point()) {
        let (ea, eb) = (ex(a), ex(b));
        let sum = Float::with_val(BITS, &ea + &eb);
        let prod = Float::with_val(BITS, &ea * &eb);
        prop_assert!(holds(x.add_with::<ErrorFree>(y), &sum));
        prop_assert!(holds(x.add_with::<UlpStep>(y), &sum));
        prop_assert!(holds(x.mul_with::<ErrorFree>(y), &prod));
        prop_assert!(holds(x.mul_with::<UlpStep>(y), &prod));
    }

    #[test]
    fn quotient_contains_point_quotient((x, a) in interval_with_point(), (y, b) in interval_with_point()) {
        prop_assume!(!y.contains_zero());
        let q = x.div(y).unwrap();
        // a / b in [lo, hi] iff lo b <= a <= hi b (b > 0), reversed for b < 0
        let (ea, eb) = (ex(a), ex(b));
        let lo = Float::with_val(BITS, &ex(q.lo()) * &eb);
        let hi = Float::with_val(BITS, &ex(q.hi()) * &eb);
        if b > 0.0 {
            prop_assert!(lo <= ea && ea <= hi);
        } else {
            prop_assert!(hi <= ea && ea <= lo);
        }
    }

    #[test]
    fn sqrt_contains_point_root((x, a) in interval_with_point()) {
        let x = RealInterval::new(x.lo().abs().min(x.hi().abs()), x.lo().abs().max(x.hi().abs())).unwrap();
        let a = a.abs().clamp(x.lo(), x.hi());
        let r = x.sqrt().unwrap();
        let ea = ex(a);
        prop_assert!(ex(r.lo()).square() <= ea);
        prop_assert!(ex(r.hi()).square() >= ea);
    }

    #[test]
    fn sqrt_bounds_are_adjacent(x in value()) {
        let (lo, hi) = sqrt_bounds(x.abs()).unwrap();
        prop_assert!(hi == lo || hi == lo.next_up());
        let e = ex(x.abs());
        prop_assert!(ex(lo).square() <= e && ex(hi).square() >= e);
    }

    #[test]
    fn widening_is_monotone((x, _a) in interval_with_point(), (y, _b) in interval_with_point(), grow in 0.0f64..1.0) {
        let wide = |iv: RealInterval| RealInterval::new(iv.lo() - grow * iv.lo().abs(), iv.hi() + grow * iv.hi().abs()).unwrap();
        let (xw, yw) = (wide(x), wide(y));
        prop_assert!((xw + yw).encloses(&(x + y)));
        prop_assert!((xw - yw).encloses(&(x - y)));
        prop_assert!((xw * yw).encloses(&(x * y)));
    }

    #[test]
    fn operations_are_deterministic((x, _a) in interval_with_point(), (y, _b) in interval_with_point()) {
        prop_assert_eq!(x * y, x * y);
        prop_assert_eq!((x + y).lo().to_bits(), (x + y).lo().to_bits());
    }

    #[test]
    fn complex_product_contains(
        (xr, ar) in interval_with_point(), (xi, ai) in interval_with_point(),
        (yr, br) in interval_with_point(), (yi, bi) in interval_with_point(),
    ) {
        let z = ComplexInterval::new(xr, xi) * ComplexInterval::new(yr, yi);
        let (ar, ai, br, bi) = (ex(ar), ex(ai), ex(br), ex(bi));
        let re = Float::with_val(BITS, &ar * &br) - Float::with_val(BITS, &ai * &bi);
        let im = Float::with_val(BITS, &ar * &bi) + Float::with_val(BITS, &ai * &br);
        prop_assert!(holds(z.re, &re));
        prop_assert!(holds(z.im, &im));
    }
}

#[test]
fn zero_divisor_is_rejected() {
    let z = RealInterval::new(-1.0, 1.0).unwrap();
    assert!(RealInterval::point(1.0).div(z).is_err());
}

#[test]
fn nan_is_rejected() {
    assert!(RealInterval::new(f64::NAN, 0.0).is_err());
    assert!(sqrt_bounds(f64::NAN).is_err());
}
