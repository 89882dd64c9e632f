//! Finite unions of half-open intervals (a, b] with rational endpoints.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;

/// (lo, hi] with lo < hi.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfOpen {
    #[serde(with = "crate::json::rational_str")]
    pub lo: Rational,
    #[serde(with = "crate::json::rational_str")]
    pub hi: Rational,
}

impl HalfOpen {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::domain(format!(
                "empty interval ({}, {}]",
                rational_to_string(&lo),
                rational_to_string(&hi)
            )));
        }
        Ok(HalfOpen { lo, hi })
    }

    pub(crate) fn raw(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        HalfOpen { lo, hi }
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &HalfOpen) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Image under x ↦ s·x + c for s > 0.
    pub fn affine(&self, s: &Rational, c: &Rational) -> HalfOpen {
        HalfOpen::raw(&self.lo * s + c, &self.hi * s + c)
    }

    pub fn intersect(&self, other: &HalfOpen) -> Option<HalfOpen> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo < hi).then(|| HalfOpen::raw(lo, hi))
    }
}

impl fmt::Display for HalfOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint, non-adjacent intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<HalfOpen>,
}

impl IntervalSet {
    pub fn new() -> Self {
        IntervalSet::default()
    }

    pub fn from_intervals<I: IntoIterator<Item = HalfOpen>>(it: I) -> Self {
        let mut v: Vec<HalfOpen> = it.into_iter().collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<HalfOpen> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                // (a, b] ∪ (c, d] with c ≤ b is a single interval
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[HalfOpen] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.intervals.iter().chain(other.intervals.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Binary search over the sorted components.
    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|iv| &iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    pub fn contains_interval(&self, x: &HalfOpen) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x.hi);
        self.intervals.get(idx).is_some_and(|iv| x.is_subset_of(iv))
    }

    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.len())
    }
}
