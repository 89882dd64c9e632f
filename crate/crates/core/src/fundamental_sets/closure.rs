//! Finite-depth closure of a point set under the affine argument maps of the
//! functional, reflection and multiplication identities.

use num_traits::Signed;
use std::collections::BTreeSet;

use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;

pub const DEFAULT_CLOSURE_BUDGET: usize = 1_000_000;

/// x ↦ s·x + c
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineArgMap {
    pub s: Rational,
    pub c: Rational,
}

impl AffineArgMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.s * x + &self.c
    }
}

/// All maps used by [`affine_closure`] for a given `max_n`.
///
/// The multiplication identity of order n links the n + 1 arguments nz and
/// z + j/n; each ordered pair of distinct arguments gives one map.
pub fn argument_maps(max_n: u32) -> Vec<AffineArgMap> {
    let int = |v: i64| Rational::from_integer(v.into());
    let mut maps = vec![
        AffineArgMap { s: int(1), c: int(1) },
        AffineArgMap { s: int(1), c: int(-1) },
        AffineArgMap { s: int(-1), c: int(1) },
    ];
    for n in 2..=max_n as i64 {
        // argument p as s_p·z + c_p
        let args: Vec<(Rational, Rational)> = std::iter::once((int(n), int(0)))
            .chain((0..n).map(|j| (int(1), Rational::new(j.into(), n.into()))))
            .collect();
        for (p, (sp, cp)) in args.iter().enumerate() {
            for (q, (sq, cq)) in args.iter().enumerate() {
                if p != q {
                    // z = (x − c_p)/s_p, then s_q·z + c_q
                    let s = sq / sp;
                    let c = cq - &s * cp;
                    maps.push(AffineArgMap { s, c });
                }
            }
        }
    }
    maps
}

/// 1 + the number of maps: the growth factor per closure step.
pub fn closure_growth_bound(max_n: u32) -> u64 {
    1 + 3 + (2..=max_n as u64).map(|n| (n + 1) * n).sum::<u64>()
}

pub fn affine_closure(
    points: &BTreeSet<Rational>,
    depth: u32,
    max_n: u32,
    budget: usize,
) -> Result<BTreeSet<Rational>> {
    if max_n < 1 {
        return Err(Error::domain("max_n must be at least 1"));
    }
    if let Some(p) = points.iter().find(|p| !p.is_positive()) {
        return Err(Error::domain(format!("point {} is not positive", rational_to_string(p))));
    }
    let maps = argument_maps(max_n);
    let mut all = points.clone();
    let mut frontier: Vec<Rational> = points.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for t in &maps {
                let y = t.apply(x);
                if y.is_positive() && !all.contains(&y) {
                    all.insert(y.clone());
                    next.push(y);
                    if all.len() > budget {
                        return Err(Error::Resource {
                            what: "closure points",
                            limit: budget,
                        });
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(all)
}
