//! Phase helpers. Phases are carried in cycles and reduced mod 1 before the
//! final multiplication by 2π, so large arguments such as `c1·n²` at N = 512
//! keep full precision.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// `exp(j2π·cycles)` with the argument reduced to `[-0.5, 0.5)` first.
#[inline]
pub fn cis_cycles(cycles: f64) -> Complex64 {
    let r = cycles - cycles.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// Fractional part of `c2·m²` in cycles.
#[inline]
pub fn c2_phase(c2: f64, m: usize) -> f64 {
    let m2 = (m as f64) * (m as f64);
    let v = c2 * m2;
    v - v.floor()
}

/// `c1·n² = C·n²/(2N)` reduced mod 1 with integer arithmetic.
#[inline]
pub fn c1_phase(c_count: usize, n_sub: usize, n: i64) -> f64 {
    let modulus = 2 * n_sub as i128;
    let num = (c_count as i128 * (n as i128) * (n as i128)).rem_euclid(modulus);
    num as f64 / modulus as f64
}

/// `m·n/N` reduced mod 1.
#[inline]
pub fn mn_phase(m: usize, n: i64, n_sub: usize) -> f64 {
    let num = (m as i128 * n as i128).rem_euclid(n_sub as i128);
    num as f64 / n_sub as f64
}
