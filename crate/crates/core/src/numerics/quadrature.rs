//! Double-exponential quadrature.
//!
//! Every integral is rewritten as ∫_ℝ h(u) du and u = c·sinh t is
//! substituted; the trapezoid rule in t then converges double-exponentially
//! for integrands analytic in a strip. The half-line uses x = e^u with
//! c = π/2, the unit interval uses the logistic map x = 1/(1+e^{−u}) with
//! c = π.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use super::gamma::beta;
use crate::error::{Error, Result};

/// Largest |t| visited by the transformed trapezoid rule.
pub const T_MAX: f64 = 12.0;
const MIN_LEVELS: u32 = 3;
const TAIL_EPS: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    UnitInterval,
    PositiveHalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub max_refinement_levels: u32,
    pub domain: Domain,
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, max_refinement_levels: u32, domain: Domain) -> Result<Self> {
        let s = QuadratureSpec {
            relative_tolerance,
            max_refinement_levels,
            domain,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn half_line(relative_tolerance: f64) -> Self {
        QuadratureSpec {
            relative_tolerance,
            max_refinement_levels: 10,
            domain: Domain::PositiveHalfLine,
        }
    }

    pub fn unit(relative_tolerance: f64) -> Self {
        QuadratureSpec {
            relative_tolerance,
            max_refinement_levels: 10,
            domain: Domain::UnitInterval,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance.is_finite()) {
            return Err(Error::domain("relative_tolerance must be positive"));
        }
        if self.max_refinement_levels < 1 {
            return Err(Error::domain("max_refinement_levels must be at least 1"));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        match self.domain {
            Domain::UnitInterval => PI,
            Domain::PositiveHalfLine => FRAC_PI_2,
        }
    }
}

/// Values the engine can sum: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub levels: u32,
}

/// ∫_ℝ h(u) du under the substitution u = scale·sinh t.
pub fn integrate_line<V, F>(h: F, scale: f64, tol: f64, max_levels: u32) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let mut evaluations = 0usize;
    let node = |t: f64, evals: &mut usize| -> V {
        *evals += 1;
        let u = scale * t.sinh();
        h(u) * (scale * t.cosh())
    };

    // Level 0 (step 1) also fixes the truncation window in each direction.
    let centre = node(0.0, &mut evaluations);
    if !centre.magnitude().is_finite() {
        return Err(Error::Convergence("integrand not finite at the centre".into()));
    }
    let mut sum = centre;
    let mut peak = centre.magnitude();
    let mut limits = [0.0f64; 2];
    for (d, dir) in [1.0f64, -1.0].into_iter().enumerate() {
        let mut quiet = 0;
        let mut k = 1.0;
        loop {
            if k > T_MAX {
                return Err(Error::Convergence(format!(
                    "integrand tail has not decayed at |t| = {T_MAX}"
                )));
            }
            let v = node(dir * k, &mut evaluations);
            let m = v.magnitude();
            if !m.is_finite() {
                return Err(Error::Convergence("integrand not finite before its tail decayed".into()));
            }
            sum = sum + v;
            peak = peak.max(m);
            if m <= TAIL_EPS * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet == 2 {
                limits[d] = k;
                break;
            }
            k += 1.0;
        }
    }

    let mut prev = sum;
    let mut step = 1.0f64;
    let mut err = f64::INFINITY;
    for level in 1..=max_levels {
        step *= 0.5;
        let mut fresh = V::zero();
        for (d, dir) in [1.0f64, -1.0].into_iter().enumerate() {
            let mut j = 1.0;
            while j * step <= limits[d] {
                let v = node(dir * j * step, &mut evaluations);
                if !v.magnitude().is_finite() {
                    return Err(Error::Convergence("integrand not finite at a refinement node".into()));
                }
                fresh = fresh + v;
                j += 2.0;
            }
        }
        let cur_sum = prev + fresh;
        let cur = cur_sum * step;
        let before = prev * (2.0 * step);
        err = (cur + before * -1.0).magnitude();
        prev = cur_sum;
        let mag = cur.magnitude();
        if level >= MIN_LEVELS.min(max_levels) && (err <= tol * mag || err == 0.0) {
            return Ok(QuadResult {
                value: cur,
                error_estimate: err,
                evaluations,
                levels: level,
            });
        }
    }
    Err(Error::Convergence(format!(
        "error estimate {err:e} above tolerance after {max_levels} refinement levels"
    )))
}

fn logistic_pair(u: f64) -> (f64, f64) {
    // (x, 1 − x) for x = 1/(1+e^{−u}), each without cancellation
    if u >= 0.0 {
        let e = (-u).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = u.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

fn integrate_domain<V, F>(f: F, spec: &QuadratureSpec) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    spec.validate()?;
    let tol = spec.relative_tolerance;
    let levels = spec.max_refinement_levels;
    match spec.domain {
        Domain::PositiveHalfLine => integrate_line(
            |u| {
                let x = u.exp();
                if x == 0.0 {
                    return V::zero();
                }
                f(x) * x
            },
            spec.scale(),
            tol,
            levels,
        ),
        Domain::UnitInterval => integrate_line(
            |u| {
                let (x, y) = logistic_pair(u);
                let w = x * y;
                if w == 0.0 {
                    return V::zero();
                }
                f(x) * w
            },
            spec.scale(),
            tol,
            levels,
        ),
    }
}

/// ∫ f over the domain of `spec`; returns (value, error estimate).
pub fn quadrature<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    integrate_domain(f, spec).map(|r| (r.value, r.error_estimate))
}

/// Complex-valued counterpart of [`quadrature`].
pub fn quadrature_complex<F: Fn(f64) -> Complex64>(
    f: F,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    integrate_domain(f, spec).map(|r| (r.value, r.error_estimate))
}

/// Γ(z) = ∫₀^∞ t^{z−1} e^{−t} dt by quadrature, for Re z > 0.
///
/// Integrated in log space, t = e^u, as exp(z·u − e^u).
pub fn gamma_integral(z: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    if z.re <= 0.0 {
        return Err(Error::domain("gamma integral needs Re z > 0"));
    }
    let r = integrate_line(
        |u| (z * u - u.exp()).exp(),
        FRAC_PI_2,
        spec.relative_tolerance,
        spec.max_refinement_levels,
    )?;
    Ok(r.value)
}

pub(crate) fn softplus(u: f64) -> f64 {
    // ln(1 + e^u)
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// B(z, w) from its integral representations.
///
/// On the half-line the integrand is s^{z−1}(1+s)^{−z−w}; on the unit
/// interval it is t^{z−1}(1−t)^{w−1}. Both are evaluated in log space.
pub fn beta_integral(z: Complex64, w: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    if z.re <= 0.0 || w.re <= 0.0 {
        return Err(Error::domain("beta integral needs Re z > 0 and Re w > 0"));
    }
    let r = match spec.domain {
        // s = e^u: s^z (1+s)^{−z−w} = exp(z u − (z+w) softplus(u))
        Domain::PositiveHalfLine => integrate_line(
            |u| (z * u - (z + w) * softplus(u)).exp(),
            spec.scale(),
            spec.relative_tolerance,
            spec.max_refinement_levels,
        )?,
        // t = σ(u): t^z (1−t)^w = exp(−z softplus(−u) − w softplus(u))
        Domain::UnitInterval => integrate_line(
            |u| (-(z * softplus(-u)) - w * softplus(u)).exp(),
            spec.scale(),
            spec.relative_tolerance,
            spec.max_refinement_levels,
        )?,
    };
    Ok(r.value)
}

/// Cross-check used by tests and the acceptance suite.
pub fn beta_oracle_gap(z: Complex64, w: Complex64, spec: &QuadratureSpec) -> Result<f64> {
    let q = beta_integral(z, w, spec)?;
    let b = beta(z, w)?;
    Ok((q - b).norm() / b.norm())
}
