#![allow(dead_code)]

use sigver::ivlinalg::{ComplexIntervalMatrix, IntervalMatrix, Structure};
use sigver::matgen::{gen_complex_randsvd, gen_complex_spd_randsvd, gen_randsvd, gen_spd_randsvd, ComplexDense};
use sigver::oracle::{oracle_singular_values, oracle_singular_values_complex, OracleValues};
use sigver::verify::Pencil;
use sigver::DenseMatrix;

/// A test pencil with point data and its reference singular values.
pub struct Instance {
    pub pencil: Pencil,
    pub oracle: OracleValues,
    pub label: String,
}

pub fn real_pencil(a: &DenseMatrix, b: &DenseMatrix) -> Pencil {
    let a = IntervalMatrix::from_point(a.clone());
    let b = IntervalMatrix::from_point(b.clone()).with_structure(Structure::Hermitian).unwrap();
    Pencil::real(a, b).unwrap()
}

pub fn complex_pencil(a: &ComplexDense, b: &ComplexDense) -> Pencil {
    let a = ComplexIntervalMatrix::from_point(a.re.clone(), a.im.clone()).unwrap();
    let b = ComplexIntervalMatrix::from_point(b.re.clone(), b.im.clone())
        .unwrap()
        .with_hermitian()
        .unwrap();
    Pencil::complex(a, b).unwrap()
}

/// Randsvd `A` and SPD randsvd `B`; `B` is seeded with `seed + 1`.
pub fn real_instance(n: usize, kappa_a: f64, kappa_b: f64, seed: u64) -> Instance {
    let a = gen_randsvd(n, kappa_a, seed);
    let b = gen_spd_randsvd(n, kappa_b, seed + 1);
    Instance {
        pencil: real_pencil(&a, &b),
        oracle: oracle_singular_values(&a, &b, 128).unwrap(),
        label: format!("real n={n} kA={kappa_a:.1e} kB={kappa_b:.1e} seed={seed}"),
    }
}

pub fn complex_instance(n: usize, kappa_a: f64, kappa_b: f64, seed: u64) -> Instance {
    let a = gen_complex_randsvd(n, kappa_a, seed);
    let b = gen_complex_spd_randsvd(n, kappa_b, seed + 1);
    Instance {
        pencil: complex_pencil(&a, &b),
        oracle: oracle_singular_values_complex(&a, &b, 128).unwrap(),
        label: format!("complex n={n} kA={kappa_a:.1e} kB={kappa_b:.1e} seed={seed}"),
    }
}

/// `10^t` for `t` uniform in `[lo, hi]`, driven by a unit sample.
pub fn log_uniform(unit: f64, lo: f64, hi: f64) -> f64 {
    10f64.powf(lo + (hi - lo) * unit)
}
