//! Schlömilch's additive duplication formula, its infinite-series
//! generalization, and the ₂F₁(·;·;1/2) tools used to prove it.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::identities::relative_residual;
use crate::numerics::{c64, cos_pi_c, gamma, log_gamma, pochhammer, pole_distance, sin_pi_c, Complex64};

pub const DEFAULT_MAX_TERMS: usize = 1000;
const QUIET_TERMS: usize = 3;
const EXCLUSION: f64 = 1e-8;

/// M₂ₙ = (m−n+1)_{2n} / (2n)! for n = 0..=m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchlomilchCoefficients {
    pub m: u32,
    pub coefficients: Vec<f64>,
}

impl SchlomilchCoefficients {
    pub fn new(m: u32) -> Self {
        let coefficients = Self::exact(m)
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect();
        SchlomilchCoefficients { m, coefficients }
    }

    /// The coefficients as integers; (m−n+1)_{2n}/(2n)! = C(m+n, 2n).
    pub fn exact(m: u32) -> Vec<BigInt> {
        (0..=m)
            .map(|n| binomial(BigInt::from(m + n), BigInt::from(2 * n)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    #[serde(with = "crate::json::complex_pair")]
    pub value: Complex64,
    #[serde(rename = "terms")]
    pub terms_used: usize,
    #[serde(rename = "last_term")]
    pub last_term_magnitude: f64,
    pub converged: bool,
}

/// Neumaier-compensated complex sum with the three-quiet-terms stopping rule.
struct SeriesSum {
    sum: Complex64,
    comp: Complex64,
    quiet: usize,
    terms: usize,
    last: f64,
    tol: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl SeriesSum {
    fn new(tol: f64) -> Self {
        SeriesSum {
            sum: c64(0.0, 0.0),
            comp: c64(0.0, 0.0),
            quiet: 0,
            terms: 0,
            last: f64::INFINITY,
            tol,
        }
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    /// Adds a term; returns true once the stopping rule is met.
    fn push(&mut self, t: Complex64) -> bool {
        neumaier(&mut self.sum.re, &mut self.comp.re, t.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, t.im);
        self.terms += 1;
        self.last = t.norm();
        if self.last <= self.tol * self.value().norm() {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= QUIET_TERMS
    }

    fn result(&self, converged: bool) -> SeriesResult {
        SeriesResult {
            value: self.value(),
            terms_used: self.terms,
            last_term_magnitude: self.last,
            converged,
        }
    }
}

fn check_tolerance(tol: f64, max_terms: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain("series tolerance must be positive"));
    }
    if max_terms == 0 {
        return Err(Error::domain("max_terms must be at least 1"));
    }
    Ok(())
}

fn pow2(z: Complex64) -> Complex64 {
    (z * LN_2).exp()
}

fn require_re_above(m: u32, z: Complex64) -> Result<()> {
    if z.re <= m as f64 {
        return Err(Error::domain(format!("Schlömilch's formula needs Re z > {m}, got {z}")));
    }
    Ok(())
}

/// (2^{z−1}/√π) Γ((z+m+1)/2) Γ((z−m)/2).
pub fn schlomilch_finite_lhs(m: u32, z: Complex64) -> Result<Complex64> {
    require_re_above(m, z)?;
    let mf = m as f64;
    let a = (z + mf + 1.0) * 0.5;
    let b = (z - mf) * 0.5;
    let direct = (|| -> Result<Complex64> {
        Ok(pow2(z - 1.0) / PI.sqrt() * gamma(a)? * gamma(b)?)
    })();
    match direct {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
        Ok(_) | Err(Error::Overflow(_)) => {
            let l = (z - 1.0) * LN_2 - 0.5 * PI.ln() + log_gamma(a)? + log_gamma(b)?;
            let v = l.exp();
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Overflow("schlomilch_finite_lhs"))
            }
        }
        Err(e) => Err(e),
    }
}

/// Σ_{n=0}^{m} Γ(z−n)/(2^n n!) (m−n+1)_{2n}, summed in ascending n.
pub fn schlomilch_finite_rhs(m: u32, z: Complex64) -> Result<Complex64> {
    require_re_above(m, z)?;
    let mut s = SeriesSum::new(0.0);
    let mut scale = 1.0f64; // 2^n n!
    for n in 0..=m {
        if n > 0 {
            scale *= 2.0 * n as f64;
        }
        let p = pochhammer(c64((m - n + 1) as f64, 0.0), 2 * n);
        let g = gamma(z - n as f64)?;
        let t = if n == 0 { g } else { g * (p / scale) };
        s.push(t);
    }
    let v = s.value();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("schlomilch_finite_rhs"))
    }
}

fn near_int(x: Complex64, eps: f64) -> bool {
    (x.re - x.re.round()).hypot(x.im) < eps
}

fn check_general(w: Complex64, z: Complex64) -> Result<()> {
    let s = w + z - 0.5;
    if near_int(s, EXCLUSION) {
        return Err(Error::domain(format!("w + z − 1/2 = {s} is an integer")));
    }
    for (name, v) in [("w", w), ("z", z)] {
        if matches!(pole_distance(v), Some(d) if d < EXCLUSION) {
            return Err(Error::domain(format!("{name} = {v} is a non-positive integer")));
        }
    }
    Ok(())
}

/// Closed form of the generalized theorem in product form,
/// −2^{w+z−1/2} √π Γ(w)Γ(z) sin πw sin πz / (π cos π(w+z)).
///
/// Equals 2^{w+z}Γ(w)Γ(z)/(√(2π)(1 − cot πw cot πz)) where the cotangents
/// exist and continues it by 0 at positive integers.
pub fn generalized_lhs(w: Complex64, z: Complex64) -> Result<Complex64> {
    check_general(w, z)?;
    let num = pow2(w + z - 0.5) * PI.sqrt() * gamma(w)? * gamma(z)? * sin_pi_c(w) * sin_pi_c(z);
    let v = -num / (cos_pi_c(w + z) * PI);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("generalized_lhs"))
    }
}

/// The cotangent form of the closed form, defined only off the integers.
pub fn generalized_lhs_cot(w: Complex64, z: Complex64) -> Result<Complex64> {
    check_general(w, z)?;
    if near_int(w, EXCLUSION) || near_int(z, EXCLUSION) {
        return Err(Error::domain("cotangent undefined at integers"));
    }
    let cot = |x: Complex64| cos_pi_c(x) / sin_pi_c(x);
    let den = (c64(1.0, 0.0) - cot(w) * cot(z)) * (2.0 * PI).sqrt();
    Ok(pow2(w + z) * gamma(w)? * gamma(z)? / den)
}

/// n-th term Γ(α−n)(β−n)_{2n}/(2^n n!), α = w+z−1/2, β = w−z+1/2.
///
/// The Pochhammer factors are multiplied out directly, dividing by the
/// factors of 2^n n! as they go to keep the product in range.
pub fn generalized_term(w: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    let alpha = w + z - 0.5;
    let beta = w - z + 0.5;
    let nf = n as f64;
    let mut p = c64(1.0, 0.0);
    for i in 0..2 * n {
        p *= beta - nf + i as f64;
        if i < n {
            p /= 2.0 * (i + 1) as f64;
        }
    }
    if p == c64(0.0, 0.0) {
        return Ok(p);
    }
    Ok(gamma(alpha - nf)? * p)
}

/// Σ_{n≥0} Γ(w+z−n−1/2)/(2^n n!) (w−z−n+1/2)_{2n}.
pub fn generalized_series(
    w: Complex64,
    z: Complex64,
    tolerance: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    check_tolerance(tolerance, max_terms)?;
    check_general(w, z)?;
    let mut s = SeriesSum::new(tolerance);
    for n in 0..max_terms {
        let t = generalized_term(w, z, n)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Ok(s.result(false));
        }
        if s.push(t) {
            return Ok(s.result(true));
        }
    }
    Ok(s.result(false))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    #[serde(with = "crate::json::complex_pair")]
    pub a: Complex64,
    #[serde(with = "crate::json::complex_pair")]
    pub b: Complex64,
    #[serde(with = "crate::json::complex_pair")]
    pub c: Complex64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        let p = Hyp2F1Params { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(c64(a, 0.0), c64(b, 0.0), c64(c, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(pole_distance(self.c), Some(d) if d < 1e-10) {
            return Err(Error::domain(format!("c = {} is a non-positive integer", self.c)));
        }
        Ok(())
    }
}

/// ₂F₁(a, b; c; 1/2) by direct summation.
pub fn hyp2f1_half(p: &Hyp2F1Params, tolerance: f64, max_terms: usize) -> Result<SeriesResult> {
    check_tolerance(tolerance, max_terms)?;
    p.validate()?;
    let mut s = SeriesSum::new(tolerance);
    let mut t = c64(1.0, 0.0);
    for n in 0..max_terms {
        if n > 0 {
            let k = (n - 1) as f64;
            t = t * (p.a + k) * (p.b + k) / ((p.c + k) * (2.0 * n as f64));
        }
        if !(t.re.is_finite() && t.im.is_finite()) {
            break;
        }
        if s.push(t) {
            return Ok(s.result(true));
        }
    }
    Err(Error::Convergence(format!(
        "2F1 series at 1/2 not converged after {} terms (last |term| {:e})",
        s.terms, s.last
    )))
}

/// Γ(1/2)Γ((a+b+1)/2) / (Γ((a+1)/2)Γ((b+1)/2)), the value of
/// ₂F₁(a, b; (a+b+1)/2; 1/2).
pub fn gauss_second_summation(a: Complex64, b: Complex64) -> Result<Complex64> {
    let pa = (a + 1.0) * 0.5;
    let pb = (b + 1.0) * 0.5;
    let pc = (a + b + 1.0) * 0.5;
    for v in [pa, pb, pc] {
        if matches!(pole_distance(v), Some(d) if d < EXCLUSION) {
            return Err(Error::Pole { re: v.re, im: v.im });
        }
    }
    Ok(gamma(c64(0.5, 0.0))? * gamma(pc)? / (gamma(pa)? * gamma(pb)?))
}

/// Relative gap between the closed form and the series for c = (a+b+1)/2.
pub fn gauss_second_summation_residual(a: Complex64, b: Complex64, tolerance: f64) -> Result<f64> {
    let closed = gauss_second_summation(a, b)?;
    let p = Hyp2F1Params::new(a, b, (a + b + 1.0) * 0.5)?;
    let series = hyp2f1_half(&p, tolerance, DEFAULT_MAX_TERMS)?;
    Ok(relative_residual(closed, series.value))
}

/// ₂F₁(a,b;c;1/2) against 2^{a+b−c} ₂F₁(c−a, c−b; c; 1/2).
pub fn euler_transform_residual(p: &Hyp2F1Params) -> Result<f64> {
    let tol = 1e-16;
    let l = hyp2f1_half(p, tol, DEFAULT_MAX_TERMS)?;
    let q = Hyp2F1Params::new(p.c - p.a, p.c - p.b, p.c)?;
    let r = hyp2f1_half(&q, tol, DEFAULT_MAX_TERMS)?;
    let factor = pow2(p.a + p.b - p.c);
    Ok(relative_residual(l.value, factor * r.value))
}

/// Exact check of C(m+l, m) = Σ_{n=0}^{m} 2^{−(m+n)} C(m+n, m) C(2l+m−n, 2l).
pub fn binomial_identity_check(m: u32, l: u32) -> (BigRational, BigRational, bool) {
    let bi = |n: u32, k: u32| binomial(BigInt::from(n), BigInt::from(k));
    let lhs = BigRational::from_integer(bi(m + l, m));
    let mut rhs = BigRational::zero();
    for n in 0..=m {
        let num = bi(m + n, m) * bi(2 * l + m - n, 2 * l);
        let den = BigInt::one() << (m + n) as usize;
        rhs += BigRational::new(num, den);
    }
    let equal = lhs == rhs;
    (lhs, rhs, equal)
}
