//! Exact measure of the Landau set without building the forest.
//!
//! After the first round the J-union U_r lies in (1/2 + δ/4, 1], and the
//! next union is the disjoint image of U_r under the maps
//! φ_i(y) = y/2^i + 1/2 restricted to y > a_i. Hence
//! g_r(θ) = λ(U_r ∩ (θ, 1]) obeys
//!
//!   g_1(θ)     = 1 − max(θ, 1/2 + δ/4)
//!   g_{r+1}(θ) = Σ_i 2^{−i} g_r(clip(max(a_i, 2^i(θ − 1/2))))
//!
//! with clip to [1/2, 1]. Starting from θ = 1/2 the arguments stay in a
//! finite set, so g_t(1/2) is computed exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use super::landau::{band_thresholds, landau_rounds};
use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;

const THETA_BUDGET: usize = 100_000;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn pow2(i: usize) -> Rational {
    Rational::from_integer(BigInt::one() << i)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandauMeasure {
    #[serde(with = "crate::json::rational_str")]
    pub delta: Rational,
    pub t: u32,
    /// λ of the I-leaves, always δ/2.
    #[serde(with = "crate::json::rational_str")]
    pub i_measure: Rational,
    /// λ of the J-union after t rounds.
    #[serde(with = "crate::json::rational_str")]
    pub j_measure: Rational,
    #[serde(with = "crate::json::rational_str")]
    pub measure: Rational,
    pub thresholds: usize,
}

impl LandauMeasure {
    pub fn measure_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.measure).unwrap_or(f64::NAN)
    }

    pub fn describe(&self) -> String {
        format!(
            "delta={} t={} measure≈{:.6e}",
            rational_to_string(&self.delta),
            self.t,
            self.measure_f64()
        )
    }
}

fn successors(theta: &Rational, bands: &[Rational]) -> Vec<Rational> {
    let lo = r(1, 2);
    let hi = Rational::one();
    bands
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let y = pow2(k + 1) * (theta - &lo);
            let y = if &y > a { y } else { a.clone() };
            y.clamp(lo.clone(), hi.clone())
        })
        .collect()
}

/// Exact λ(U_t) and the total measure δ/2 + λ(U_t).
pub fn landau_exact_measure(delta: &Rational) -> Result<LandauMeasure> {
    let t = landau_rounds(delta)?;
    let bands = band_thresholds(delta);
    let start = r(1, 2);
    let mut thetas = BTreeSet::new();
    let mut todo = vec![start.clone()];
    while let Some(th) = todo.pop() {
        if !thetas.insert(th.clone()) {
            continue;
        }
        if thetas.len() > THETA_BUDGET {
            return Err(Error::Resource {
                what: "threshold closure",
                limit: THETA_BUDGET,
            });
        }
        for s in successors(&th, &bands) {
            if !thetas.contains(&s) {
                todo.push(s);
            }
        }
    }
    let edges: BTreeMap<Rational, Vec<Rational>> =
        thetas.iter().map(|th| (th.clone(), successors(th, &bands))).collect();
    let floor = r(1, 2) + delta / r(4, 1);
    let g1: BTreeMap<Rational, Rational> = thetas
        .iter()
        .map(|th| {
            let m = if th > &floor { th.clone() } else { floor.clone() };
            (th.clone(), Rational::one() - m)
        })
        .collect();
    // Integer recursion: g_r = G_r / (D·2^{M(r−1)}) with D the common
    // denominator of g_1, so each round is shifts and additions.
    let d = g1.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let big_m = bands.len();
    let mut g: BTreeMap<&Rational, BigInt> = g1
        .iter()
        .map(|(th, v)| (th, v.numer() * (&d / v.denom())))
        .collect();
    for _ in 1..t {
        g = edges
            .iter()
            .map(|(th, succ)| {
                let v = succ.iter().enumerate().fold(BigInt::zero(), |acc, (k, s)| {
                    acc + (&g[s] << (big_m - (k + 1)))
                });
                (th, v)
            })
            .collect();
    }
    let scale = d << (big_m * (t as usize - 1));
    let j_measure = Rational::new(g[&start].clone(), scale);
    let i_measure = delta / r(2, 1);
    Ok(LandauMeasure {
        delta: delta.clone(),
        t,
        measure: &i_measure + &j_measure,
        i_measure,
        j_measure,
        thresholds: thetas.len(),
    })
}

/// Membership in (0, δ/2] ∪ U_t, following the maps backwards.
pub fn landau_contains(delta: &Rational, x: &Rational) -> Result<bool> {
    let t = landau_rounds(delta)?;
    let bands = band_thresholds(delta);
    if x <= &Rational::zero() || x > &Rational::one() {
        return Ok(false);
    }
    if x <= &(delta / r(2, 1)) {
        return Ok(true);
    }
    Ok(in_union(t, x, &bands))
}

fn in_union(rounds: u32, x: &Rational, bands: &[Rational]) -> bool {
    if rounds == 0 {
        return x > &Rational::zero() && x <= &Rational::one();
    }
    let h = r(1, 2);
    if x <= &h {
        return false;
    }
    bands.iter().enumerate().any(|(k, a)| {
        let y = pow2(k + 1) * (x - &h);
        &y > a && y <= Rational::one() && in_union(rounds - 1, &y, bands)
    })
}
