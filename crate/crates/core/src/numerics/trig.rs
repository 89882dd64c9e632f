//! sin πx and cos πx with exact argument reduction.
//!
//! Reducing x by half-integers before multiplying by π keeps the zeros at
//! the integers (and half-integers for cosine) exact.

use num_complex::Complex64;
use std::f64::consts::PI;

// x = n/2 + r with |r| ≤ 1/4; returns (r, n mod 4).
fn reduce(x: f64) -> (f64, i64) {
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    (r, (n.rem_euclid(4.0)) as i64)
}

pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let (r, k) = reduce(x);
    let a = PI * r;
    match k {
        0 => a.sin(),
        1 => a.cos(),
        2 => -a.sin(),
        _ => -a.cos(),
    }
}

pub fn cos_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let (r, k) = reduce(x);
    let a = PI * r;
    match k {
        0 => a.cos(),
        1 => -a.sin(),
        2 => -a.cos(),
        _ => a.sin(),
    }
}

/// sin πz = sin πx cosh πy + i cos πx sinh πy.
pub fn sin_pi_c(z: Complex64) -> Complex64 {
    let y = PI * z.im;
    Complex64::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

/// cos πz = cos πx cosh πy − i sin πx sinh πy.
pub fn cos_pi_c(z: Complex64) -> Complex64 {
    let y = PI * z.im;
    Complex64::new(cos_pi(z.re) * y.cosh(), -sin_pi(z.re) * y.sinh())
}
