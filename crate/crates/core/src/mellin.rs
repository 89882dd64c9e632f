//! Ramanujan's master theorem on a small catalog of coefficient functions φ.
//!
//! For ψ(x) = Σ (−x)ⁿ φ(n), the Mellin transform ∫₀^∞ x^{s−1} ψ(x) dx equals
//! (π / sin πs) φ(−s) on the strip 0 < s < η.

use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fundamental_sets::parse_rational;
use crate::identities::relative_residual;
use crate::numerics::quadrature::softplus;
use crate::numerics::{c64, gamma, integrate_line, sin_pi, QuadratureSpec};

/// Series terms beyond this are not summed.
const SERIES_MAX_TERMS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiKind {
    /// φ ≡ 1
    One,
    /// φ(n) = aⁿ, a > 0
    Geometric(f64),
    /// φ(n) = 1/n!
    Exp,
    /// φ(n) = 1/(n + 1)
    Log1p,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiSpec {
    pub id: String,
    #[serde(skip)]
    pub kind: PhiKind,
    /// Strip half-width; infinite for an entire ψ transform.
    pub eta: f64,
    pub q: f64,
    pub r: f64,
    /// Growth constant C; recorded only.
    pub c: f64,
}

impl PhiSpec {
    pub fn new(kind: PhiKind) -> Result<Self> {
        let (id, eta, q, r) = match kind {
            PhiKind::One => ("one".to_string(), 1.0, 0.0, 0.0),
            PhiKind::Geometric(a) => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::domain(format!("geometric ratio {a} must be positive")));
                }
                (format!("geom:{a}"), 1.0, a.ln(), 0.0)
            }
            PhiKind::Exp => ("exp".to_string(), f64::INFINITY, 0.0, FRAC_PI_2),
            PhiKind::Log1p => ("log1p".to_string(), 1.0, 0.0, 0.0),
        };
        Ok(PhiSpec {
            id,
            kind,
            eta,
            q,
            r,
            c: 1.0,
        })
    }

    /// φ at a real argument (the negative side is used for the right side).
    pub fn phi(&self, x: f64) -> Result<f64> {
        Ok(match self.kind {
            PhiKind::One => 1.0,
            PhiKind::Geometric(a) => a.powf(x),
            PhiKind::Exp => {
                // 1/Γ(x+1) vanishes at the poles
                match gamma(c64(x + 1.0, 0.0)) {
                    Ok(g) => 1.0 / g.re,
                    Err(Error::Pole { .. }) => 0.0,
                    Err(e) => return Err(e),
                }
            }
            PhiKind::Log1p => {
                if x == -1.0 {
                    return Err(Error::Pole { re: -1.0, im: 0.0 });
                }
                1.0 / (x + 1.0)
            }
        })
    }

    pub fn psi_closed_form(&self, x: f64) -> f64 {
        match self.kind {
            PhiKind::One => 1.0 / (1.0 + x),
            PhiKind::Geometric(a) => 1.0 / (1.0 + a * x),
            PhiKind::Exp => (-x).exp(),
            PhiKind::Log1p => {
                if x == 0.0 {
                    1.0
                } else {
                    x.ln_1p() / x
                }
            }
        }
    }

    /// ln ψ(e^u), stable for large |u|.
    pub fn ln_psi_exp(&self, u: f64) -> f64 {
        match self.kind {
            PhiKind::One => -softplus(u),
            PhiKind::Geometric(a) => -softplus(u + a.ln()),
            PhiKind::Exp => -u.exp(),
            PhiKind::Log1p => {
                // ln(ln(1 + x)) − ln x
                let l = if u < -30.0 { u - 0.5 * u.exp() } else { softplus(u).ln() };
                l - u
            }
        }
    }

    /// Σ (−x)ⁿ φ(n), summed until the terms stop mattering.
    pub fn psi_series(&self, x: f64) -> Result<f64> {
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut small = 0;
        let mut sign_pow = 1.0;
        for n in 0..SERIES_MAX_TERMS {
            let t = sign_pow * self.phi(n as f64)?;
            let s = sum + t;
            comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
            sum = s;
            if t.abs() <= 1e-17 * (sum + comp).abs() {
                small += 1;
                if small == 3 {
                    return Ok(sum + comp);
                }
            } else {
                small = 0;
            }
            sign_pow *= -x;
        }
        Err(Error::Convergence(format!("ψ series at x = {x} did not settle in {SERIES_MAX_TERMS} terms")))
    }
}

impl FromStr for PhiSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim() {
            "one" => PhiKind::One,
            "exp" => PhiKind::Exp,
            "log1p" => PhiKind::Log1p,
            other => match other.strip_prefix("geom:") {
                Some(a) => {
                    let a = match a.parse::<f64>() {
                        Ok(v) => v,
                        Err(_) => parse_rational(a)?.to_f64().unwrap_or(f64::NAN),
                    };
                    PhiKind::Geometric(a)
                }
                None => {
                    return Err(Error::domain(format!(
                        "unknown φ '{other}' (expected one, geom:a, exp or log1p)"
                    )))
                }
            },
        };
        PhiSpec::new(kind)
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// ψ(x): the series inside 0.9·e^{−q}, the closed form beyond.
pub fn psi_eval(spec: &PhiSpec, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ψ needs x > 0, got {x}")));
    }
    if x < 0.9 * (-spec.q).exp() {
        spec.psi_series(x)
    } else {
        Ok(spec.psi_closed_form(x))
    }
}

/// ∫₀^∞ x^{s−1} ψ(x) dx with x = e^u.
pub fn mellin_transform(spec: &PhiSpec, s: f64, q_spec: &QuadratureSpec) -> Result<f64> {
    q_spec.validate()?;
    if !s.is_finite() {
        return Err(Error::domain(format!("s = {s} is not finite")));
    }
    let r = integrate_line(
        |u: f64| (s * u + spec.ln_psi_exp(u)).exp(),
        FRAC_PI_2,
        q_spec.relative_tolerance,
        q_spec.max_refinement_levels,
    )?;
    Ok(r.value)
}

/// (π / sin πs) φ(−s)
pub fn rmt_rhs(spec: &PhiSpec, s: f64) -> Result<f64> {
    Ok(PI / sin_pi(s) * spec.phi(-s)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmtReport {
    pub phi: String,
    pub s: f64,
    pub mellin: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn rmt_report(spec: &PhiSpec, s: f64, q_spec: &QuadratureSpec) -> Result<RmtReport> {
    if !(s > 0.0 && s < spec.eta) {
        return Err(Error::domain(format!("s = {s} is outside the strip (0, {})", spec.eta)));
    }
    if s.fract() == 0.0 {
        return Err(Error::domain(format!("s = {s} is an integer")));
    }
    let mellin = mellin_transform(spec, s, q_spec)?;
    let rhs = rmt_rhs(spec, s)?;
    Ok(RmtReport {
        phi: spec.id.clone(),
        s,
        mellin,
        rhs,
        residual: relative_residual(c64(mellin, 0.0), c64(rhs, 0.0)),
    })
}

/// Relative gap between the two sides of the master theorem.
pub fn rmt_residual(spec: &PhiSpec, s: f64) -> Result<f64> {
    Ok(rmt_report(spec, s, &QuadratureSpec::half_line(1e-10))?.residual)
}
