mod common;

use proptest::prelude::*;

use sigver::interval::rounding::dr;
use sigver::ivlinalg::IntervalMatrix;
use sigver::matgen::{gen_randsvd, gen_spd_randsvd};
use sigver::report::{run_method, Status};
use sigver::verify::{invert_enclosure, method_s1, method_s2, DeltaVariant, Method, MethodOptions};

use common::{complex_instance, real_instance, real_pencil};

fn log_kappa(hi: f64) -> impl Strategy<Value = f64> {
    (0.0..hi).prop_map(|t: f64| 10f64.powf(t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_method_contains_oracle(
        n in 2usize..12, ka in log_kappa(6.0), kb in log_kappa(4.0), seed in 0u64..10_000, complex in any::<bool>(),
    ) {
        let inst = if complex { complex_instance(n, ka, kb, seed) } else { real_instance(n, ka, kb, seed) };
        let opts = MethodOptions::default();
        if let Ok(enc) = inst.pencil.all_singular_values(DeltaVariant::D1) {
            for i in 0..enc.len() {
                prop_assert!(inst.oracle.inside(i, enc.lower[i], enc.upper[i]), "{}: sigma_{i}", inst.label);
            }
        }
        let min = inst.oracle.min();
        for m in Method::ALL {
            let Ok(b) = inst.pencil.sigma_min(m, &opts) else { continue };
            prop_assert!(b.lower >= 0.0);
            if b.is_verified() {
                prop_assert!(*min >= b.lower, "{}: {m} lower", inst.label);
            }
            if let Some(u) = b.upper {
                prop_assert!(*min <= u, "{}: {m} upper", inst.label);
                prop_assert!(b.lower <= u);
            }
        }
    }

    #[test]
    fn enclosures_are_ordered_and_variants_nest(n in 2usize..16, ka in log_kappa(6.0), kb in log_kappa(4.0), seed in 0u64..10_000) {
        let inst = real_instance(n, ka, kb, seed);
        let mut deltas = Vec::new();
        for v in DeltaVariant::ALL {
            let enc = inst.pencil.all_singular_values(v).unwrap();
            prop_assert!(enc.alpha < 1.0 && enc.beta < 1.0);
            prop_assert!((0..enc.len()).all(|i| enc.lower[i] <= enc.upper[i]));
            prop_assert!(enc.upper.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(enc.lower.windows(2).all(|w| w[0] >= w[1]));
            deltas.push(enc.delta);
        }
        let slack = 1.0 + 1e-12;
        prop_assert!(deltas[0] <= deltas[1] * slack && deltas[1] <= deltas[2] * slack, "{deltas:?}");
    }

    #[test]
    fn inversion_uses_the_same_defects(n in 2usize..12, ka in log_kappa(4.0), kb in log_kappa(3.0), seed in 0u64..10_000) {
        let inst = real_instance(n, ka, kb, seed);
        let enc = inst.pencil.all_singular_values(DeltaVariant::D1).unwrap();
        let inv = invert_enclosure(&enc).unwrap();
        let (a, b, d) = (enc.alpha, enc.beta, enc.delta);
        let num_lo = dr::sqrt_down(dr::mul_down(dr::sub_down(1.0, a), dr::sub_down(1.0, b)));
        let num_hi = dr::sqrt_up(dr::mul_up(dr::add_up(1.0, a), dr::add_up(1.0, b)));
        for (k, j) in (0..n).rev().enumerate() {
            let s = enc.sigma_hat[j];
            prop_assert_eq!(inv.lower[k], dr::div_down(num_lo, dr::add_up(s, d)));
            prop_assert_eq!(inv.upper[k], dr::div_up(num_hi, dr::sub_down(s, d)));
        }
        // reciprocal enclosures contain the reciprocal oracle values
        for (k, j) in (0..n).rev().enumerate() {
            let r = inst.oracle.values[j].clone().recip();
            prop_assert!(r >= inv.lower[k] && r <= inv.upper[k]);
        }
    }

    #[test]
    fn smaller_theta_never_loses_success(n in 2usize..14, ka in log_kappa(5.0), kb in log_kappa(3.0), seed in 0u64..10_000) {
        let a = IntervalMatrix::from_point(gen_randsvd(n, ka, seed));
        let b = real_pencil(&gen_randsvd(n, 1.0, 0), &gen_spd_randsvd(n, kb, seed + 1)).real_pair().1.clone();
        for method in [method_s1, method_s2] {
            let ok: Vec<bool> = [0.01, 0.1, 0.5]
                .iter()
                .map(|&e| method(&a, &b, e).map(|r| r.is_verified()).unwrap_or(false))
                .collect();
            // success at a larger theta implies success at every smaller one
            prop_assert!(!ok[0] || ok[1]);
            prop_assert!(!ok[1] || ok[2]);
        }
    }
}

#[test]
fn failures_populate_no_bounds() {
    // exactly singular A: nothing can be proven
    let n = 6;
    let mut a = gen_randsvd(n, 10.0, 3);
    for j in 0..n {
        a[(n - 1, j)] = a[(0, j)];
    }
    let b = gen_spd_randsvd(n, 10.0, 4);
    let pencil = real_pencil(&a, &b);
    for m in Method::ALL {
        if let Ok(r) = pencil.sigma_min(m, &MethodOptions::default()) {
            assert!(!r.is_verified(), "{m}");
            assert_eq!(r.lower, 0.0, "{m}");
        }
        let row = run_method(&pencil, m, &MethodOptions::default(), 1);
        assert_ne!(row.status, Status::Ok, "{m}");
        assert!(row.sigma_min_lo.is_none() && row.sigma_min_hi.is_none(), "{m}");
        assert!(row.inv_sigma_min_hi.is_none() && row.rel_err.is_none(), "{m}");
    }
}

#[test]
fn invalid_epsilon_is_an_error() {
    let a = IntervalMatrix::identity(3);
    let b = real_pencil(&gen_randsvd(3, 1.0, 0), &gen_spd_randsvd(3, 2.0, 1)).real_pair().1.clone();
    for e in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(method_s2(&a, &b, e).is_err());
        assert!(method_s1(&a, &b, e).is_err());
    }
}
