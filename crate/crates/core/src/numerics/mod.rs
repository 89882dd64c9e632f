//! Complex gamma machinery and the quadrature oracle.

pub mod gamma;
pub mod quadrature;
pub mod trig;

pub use gamma::{beta, gamma, log_gamma, pochhammer, pole_distance, POLE_EPS};
pub use quadrature::{
    beta_integral, gamma_integral, integrate_line, quadrature, quadrature_complex, Domain,
    QuadResult, QuadValue, QuadratureSpec,
};
pub use trig::{cos_pi, cos_pi_c, sin_pi, sin_pi_c};

pub use num_complex::Complex64;

/// Shorthand constructor.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
