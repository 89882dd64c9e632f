//! Residuals of the closed-form gamma identities and seeded grid checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{c64, gamma, pole_distance, sin_pi_c, Complex64};

/// Pole-exclusion radius for random sampling.
pub const SAMPLE_EXCLUSION: f64 = 0.1;
/// Pole-exclusion radius for the non-vanishing scan.
pub const SCAN_EXCLUSION: f64 = 0.05;
const NEAR_POLE: f64 = 1e-6;

/// |l − r| / max(|l|, |r|), absolute when both sides are below 1e−3.
pub fn relative_residual(l: Complex64, r: Complex64) -> f64 {
    let scale = l.norm().max(r.norm());
    let d = (l - r).norm();
    if scale < 1e-3 {
        d
    } else {
        d / scale
    }
}

fn away_from_poles(zs: &[Complex64], radius: f64) -> Result<()> {
    for z in zs {
        if let Some(d) = pole_distance(*z) {
            if d <= radius {
                return Err(Error::Pole { re: z.re, im: z.im });
            }
        }
    }
    Ok(())
}

fn pow2(z: Complex64) -> Complex64 {
    (z * LN_2).exp()
}

/// Γ(z+1) = zΓ(z).
pub fn residual_functional(z: Complex64) -> Result<f64> {
    away_from_poles(&[z, z + 1.0], NEAR_POLE)?;
    let g1 = gamma(z + 1.0)?;
    let g = gamma(z)?;
    Ok((g1 - z * g).norm() / g1.norm())
}

/// Γ(z)Γ(1−z) = π / sin πz.
pub fn residual_reflection(z: Complex64) -> Result<f64> {
    let n = z.re.round();
    if (z.re - n).hypot(z.im) <= NEAR_POLE {
        return Err(Error::domain(format!("reflection undefined at integer {n}")));
    }
    let one = c64(1.0, 0.0);
    let l = gamma(z)? * gamma(one - z)?;
    let r = PI / sin_pi_c(z);
    Ok(relative_residual(l, r))
}

/// √π Γ(z) = 2^{z−1} Γ(z/2) Γ(z/2 + 1/2).
pub fn residual_duplication(z: Complex64) -> Result<f64> {
    let h = z * 0.5;
    away_from_poles(&[z, h, h + 0.5], NEAR_POLE)?;
    let l = gamma(z)? * PI.sqrt();
    let r = pow2(z - 1.0) * gamma(h)? * gamma(h + 0.5)?;
    Ok(relative_residual(l, r))
}

/// (2π)^{(n−1)/2} n^{1/2−z} Γ(z) = ∏_{j<n} Γ((z+j)/n).
pub fn residual_multiplication(n: u32, z: Complex64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("multiplication needs n ≥ 1"));
    }
    let nf = n as f64;
    let args: Vec<Complex64> = (0..n).map(|j| (z + j as f64) / nf).collect();
    away_from_poles(&[z], NEAR_POLE)?;
    away_from_poles(&args, NEAR_POLE)?;
    let scale = ((nf - 1.0) * 0.5 * (2.0 * PI).ln() + (c64(0.5, 0.0) - z) * nf.ln()).exp();
    let l = scale * gamma(z)?;
    let mut r = c64(1.0, 0.0);
    for a in &args {
        r *= gamma(*a)?;
    }
    Ok(relative_residual(l, r))
}

/// sin πz = 2^{k−1} ∏_{j<k} sin π((z+j)/k).
pub fn residual_sine_factorization(k: u32, z: Complex64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("sine factorization needs k ≥ 1"));
    }
    let kf = k as f64;
    let l = sin_pi_c(z);
    let mut r = c64(2f64.powi(k as i32 - 1), 0.0);
    for j in 0..k {
        r *= sin_pi_c((z + j as f64) / kf);
    }
    Ok(relative_residual(l, r))
}

/// Γ(4α)Γ(1/4−α) = 2^{6α−3/2} Γ(2α)Γ(α+1/4) / sin π(α+3/4).
pub fn residual_comb(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.25) {
        return Err(Error::domain(format!("comb needs α in (0, 1/4), got {alpha}")));
    }
    let a = c64(alpha, 0.0);
    let l = gamma(a * 4.0)? * gamma(c64(0.25 - alpha, 0.0))?;
    let r = pow2(a * 6.0 - 1.5) * gamma(a * 2.0)? * gamma(a + 0.25)? / sin_pi_c(a + 0.75);
    Ok(relative_residual(l, r))
}

/// Coefficients c_n = (−1)^n/(2n)! ∏_{j=1}^{n} (k² − (2j−1)²), k = 2m+1.
pub fn cosine_coefficients(m: u32) -> Vec<BigRational> {
    let k = BigInt::from(2 * m as u64 + 1);
    let k2 = &k * &k;
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut c = BigRational::one();
    out.push(c.clone());
    for n in 1..=m as u64 {
        let odd = BigInt::from(2 * n - 1);
        let factor = &k2 - &odd * &odd;
        let fact = BigInt::from((2 * n - 1) * (2 * n));
        c = -c * BigRational::new(factor, fact);
        out.push(c.clone());
    }
    out
}

/// cos ku = cos u Σ c_n sin^{2n} u with k = 2m+1.
///
/// Relative where |cos ku| > 1e−3, absolute otherwise.
pub fn residual_cosine_identity(m: u32, u: Complex64) -> Result<f64> {
    let k = (2 * m + 1) as f64;
    let l = (u * k).cos();
    let s2 = u.sin() * u.sin();
    let coeffs = cosine_coefficients(m);
    // Horner in sin² u
    let mut acc = c64(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * s2 + c.to_f64().unwrap_or(f64::NAN);
    }
    let r = u.cos() * acc;
    let d = (l - r).norm();
    let mag = l.norm();
    Ok(if mag > 1e-3 { d / mag } else { d })
}

/// Minimum of |Γ| over a rectangular grid, skipping points near poles.
pub fn nonvanishing_scan(
    re_range: (f64, f64),
    im_range: (f64, f64),
    step: f64,
) -> Result<(f64, Complex64)> {
    nonvanishing_scan_with(re_range, im_range, step, SCAN_EXCLUSION)
}

pub fn nonvanishing_scan_with(
    re_range: (f64, f64),
    im_range: (f64, f64),
    step: f64,
    exclusion: f64,
) -> Result<(f64, Complex64)> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain("scan step must be positive"));
    }
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        if !(lo <= hi) {
            return Vec::new();
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| lo + i as f64 * step).collect()
    };
    let xs = axis(re_range);
    let ys = axis(im_range);
    let mut best: Option<(f64, Complex64)> = None;
    for &y in &ys {
        for &x in &xs {
            let z = c64(x, y);
            if matches!(pole_distance(z), Some(d) if d < exclusion) {
                continue;
            }
            let Ok(g) = gamma(z) else { continue };
            let m = g.norm();
            if best.map_or(true, |(b, _)| m < b) {
                best = Some((m, z));
            }
        }
    }
    best.ok_or(Error::EmptyGrid)
}

/// Identity selector used by grid verification and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityId {
    Functional,
    Reflection,
    Duplication,
    Multiplication(u32),
    Sine(u32),
    Comb,
    Cosine(u32),
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::Functional => write!(f, "functional"),
            IdentityId::Reflection => write!(f, "reflection"),
            IdentityId::Duplication => write!(f, "duplication"),
            IdentityId::Multiplication(n) => write!(f, "mult:{n}"),
            IdentityId::Sine(k) => write!(f, "sine:{k}"),
            IdentityId::Comb => write!(f, "comb"),
            IdentityId::Cosine(m) => write!(f, "cosine:{m}"),
        }
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("unknown identity '{s}'"));
        let param = |p: &str, min: u32| -> Result<u32> {
            let v: u32 = p.parse().map_err(|_| bad())?;
            if v < min {
                return Err(bad());
            }
            Ok(v)
        };
        match s.split_once(':') {
            None => match s {
                "functional" => Ok(IdentityId::Functional),
                "reflection" => Ok(IdentityId::Reflection),
                "duplication" => Ok(IdentityId::Duplication),
                "comb" => Ok(IdentityId::Comb),
                _ => Err(bad()),
            },
            Some(("mult", p)) => Ok(IdentityId::Multiplication(param(p, 1)?)),
            Some(("sine", p)) => Ok(IdentityId::Sine(param(p, 1)?)),
            Some(("cosine", p)) => Ok(IdentityId::Cosine(param(p, 0)?)),
            Some(_) => Err(bad()),
        }
    }
}

impl IdentityId {
    pub fn residual(&self, z: Complex64) -> Result<f64> {
        match *self {
            IdentityId::Functional => residual_functional(z),
            IdentityId::Reflection => residual_reflection(z),
            IdentityId::Duplication => residual_duplication(z),
            IdentityId::Multiplication(n) => residual_multiplication(n, z),
            IdentityId::Sine(k) => residual_sine_factorization(k, z),
            IdentityId::Comb => residual_comb(z.re),
            IdentityId::Cosine(m) => residual_cosine_identity(m, z),
        }
    }

    /// Every argument at which the identity evaluates Γ.
    pub fn gamma_arguments(&self, z: Complex64) -> Vec<Complex64> {
        let one = c64(1.0, 0.0);
        match *self {
            IdentityId::Functional => vec![z, z + 1.0],
            IdentityId::Reflection => vec![z, one - z],
            IdentityId::Duplication => vec![z, z * 0.5, z * 0.5 + 0.5],
            IdentityId::Multiplication(n) => {
                let mut v = vec![z];
                v.extend((0..n).map(|j| (z + j as f64) / n as f64));
                v
            }
            IdentityId::Comb => {
                let a = z.re;
                [4.0 * a, 0.25 - a, 2.0 * a, a + 0.25]
                    .iter()
                    .map(|&x| c64(x, 0.0))
                    .collect()
            }
            IdentityId::Sine(_) | IdentityId::Cosine(_) => Vec::new(),
        }
    }

    /// Default sampling rectangle.
    pub fn default_region(&self) -> Region {
        match self {
            IdentityId::Comb => Region {
                re: (0.0, 0.25),
                im: (0.0, 0.0),
            },
            IdentityId::Cosine(_) => Region {
                re: (-PI, PI),
                im: (-1.0, 1.0),
            },
            _ => Region {
                re: (-5.0, 5.0),
                im: (-3.0, 3.0),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub count: usize,
    pub region: Region,
    pub pole_exclusion: f64,
    pub seed: u64,
    /// Explicit points replace random sampling when present.
    pub points: Option<Vec<Complex64>>,
}

impl SampleSpec {
    pub fn random(count: usize, region: Region, seed: u64) -> Self {
        SampleSpec {
            count,
            region,
            pole_exclusion: SAMPLE_EXCLUSION,
            seed,
            points: None,
        }
    }

    pub fn explicit(points: Vec<Complex64>) -> Self {
        SampleSpec {
            count: points.len(),
            region: Region {
                re: (0.0, 0.0),
                im: (0.0, 0.0),
            },
            pole_exclusion: SAMPLE_EXCLUSION,
            seed: 0,
            points: Some(points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(rename = "identity")]
    pub identity_id: String,
    pub seed: u64,
    #[serde(rename = "samples")]
    pub sample_count: usize,
    pub skipped: usize,
    #[serde(rename = "max_rel_residual")]
    pub max_relative_residual: f64,
    #[serde(rename = "mean_rel_residual")]
    pub mean_relative_residual: f64,
    #[serde(with = "crate::json::complex_pair")]
    pub worst_point: Complex64,
    pub tolerance: f64,
    pub pass: bool,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Draws up to `spec.count` points whose Γ arguments all clear the
/// exclusion radius.
pub fn sample_points(id: IdentityId, spec: &SampleSpec) -> Vec<Complex64> {
    if let Some(p) = &spec.points {
        return p.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let budget = spec.count.saturating_mul(1000).max(1000);
    let mut tries = 0;
    while out.len() < spec.count && tries < budget {
        tries += 1;
        let z = c64(uniform(&mut rng, spec.region.re), uniform(&mut rng, spec.region.im));
        let clear = id
            .gamma_arguments(z)
            .iter()
            .all(|a| pole_distance(*a).map_or(true, |d| d > spec.pole_exclusion));
        let clear = clear
            && match id {
                IdentityId::Comb => z.re > 0.0 && z.re < 0.25,
                IdentityId::Reflection => {
                    (z.re - z.re.round()).hypot(z.im) > spec.pole_exclusion
                }
                _ => true,
            };
        if clear {
            out.push(z);
        }
    }
    out
}

/// Evaluates `id` on the sample grid; per-point failures count as skipped.
pub fn verify_grid(id: IdentityId, spec: &SampleSpec, tolerance: f64) -> Result<IdentityReport> {
    let pts = sample_points(id, spec);
    let mut skipped = spec.count.saturating_sub(pts.len());
    let mut n = 0usize;
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    let mut worst = c64(0.0, 0.0);
    for z in pts {
        match id.residual(z) {
            Ok(r) if r.is_finite() => {
                n += 1;
                sum += r;
                if r > max || n == 1 {
                    max = r;
                    worst = z;
                }
            }
            _ => skipped += 1,
        }
    }
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(IdentityReport {
        identity_id: id.to_string(),
        seed: spec.seed,
        sample_count: n,
        skipped,
        max_relative_residual: max,
        mean_relative_residual: sum / n as f64,
        worst_point: worst,
        tolerance,
        pass: max <= tolerance,
    })
}
