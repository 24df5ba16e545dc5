//! Self-contained numerical kernels: complex dense linear algebra, matrix
//! exponentials, polynomial root finding, quadrature and power series.

pub mod dd;
pub mod expm;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod series;

pub use num_complex::Complex64 as C64;

/// Convenience constructor for complex numbers.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real number as a complex one.
#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// e^{i phi}.
#[inline]
pub fn cis(phi: f64) -> C64 {
    C64::new(phi.cos(), phi.sin())
}

/// Relative difference |a-b| / max(|b|, floor), used throughout the tests.
pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Relative difference of real numbers.
pub fn rel_err_f(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Binomial coefficient as u128; panics on overflow (inputs stay tiny here).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
