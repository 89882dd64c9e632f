//! Landau's lemma and the iterated construction of fundamental sets of
//! small measure.
//!
//! Halving maps come from duplication: Γ at x is recovered from Γ at x/2
//! and x/2 + 1/2. The lemma pushes an interval (α, β] down until its
//! leftmost image lies in (0, δ/2], collecting the images that land in
//! (1/2, 1] along the way. The construction repeats the lemma on every
//! collected interval for t rounds.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::interval_set::{HalfOpen, IntervalSet};
use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;

pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "I")]
    ILeaf,
    #[serde(rename = "J")]
    JLeaf,
    #[serde(rename = "split")]
    Split,
    /// Children cut the interval at the band thresholds.
    #[serde(rename = "partition")]
    Partition,
}

/// The halving map that produced a node from its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineMap {
    /// x ↦ x/2
    Half,
    /// x ↦ x/2 + 1/2
    HalfPlusHalf,
}

impl AffineMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        match self {
            AffineMap::Half => x / Rational::from_integer(2.into()),
            AffineMap::HalfPlusHalf => x / Rational::from_integer(2.into()) + half(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionNode {
    pub interval: HalfOpen,
    pub kind: NodeKind,
    /// Split: `[Half image, HalfPlusHalf image]`; Partition: pieces in order.
    pub children: Vec<usize>,
    pub map: Option<AffineMap>,
    pub round: u32,
}

/// Arena of decomposition nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Forest {
    pub nodes: Vec<DecompositionNode>,
}

impl Forest {
    fn push(&mut self, interval: HalfOpen, kind: NodeKind, map: Option<AffineMap>, round: u32) -> usize {
        self.nodes.push(DecompositionNode {
            interval,
            kind,
            children: Vec::new(),
            map,
            round,
        });
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &DecompositionNode {
        &self.nodes[id]
    }
}

/// One application of the lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRecord {
    pub input: HalfOpen,
    pub m: u32,
    pub i: HalfOpen,
    pub js: Vec<HalfOpen>,
}

impl LemmaRecord {
    /// |I| + Σ|Jᵢ| = β − α.
    pub fn conserves_measure(&self) -> bool {
        let total = self.js.iter().fold(self.i.len(), |acc, j| acc + j.len());
        total == self.input.len()
    }

    /// |I| > (δ/4)(β − α).
    pub fn i_is_large(&self, delta: &Rational) -> bool {
        self.i.len() > delta / Rational::from_integer(4.into()) * self.input.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaDecomposition {
    pub m: u32,
    pub i: HalfOpen,
    pub js: Vec<HalfOpen>,
    pub forest: Forest,
    pub root: usize,
}

fn check_delta(delta: &Rational) -> Result<()> {
    if !(delta > &Rational::zero() && delta <= &Rational::one()) {
        return Err(Error::domain(format!(
            "δ must lie in (0, 1], got {}",
            rational_to_string(delta)
        )));
    }
    Ok(())
}

/// Least m ≥ 0 with β/2^m ≤ δ/2.
pub fn lemma_m(beta: &Rational, delta: &Rational) -> u32 {
    let target = delta * half();
    let mut m = 0;
    let mut b = beta.clone();
    while b > target {
        b = b * half();
        m += 1;
    }
    m
}

// Expands the lemma chain below node `id`; returns the J node ids.
fn lemma_into(forest: &mut Forest, id: usize, delta: &Rational, round: u32) -> (LemmaRecord, Vec<usize>) {
    let input = forest.nodes[id].interval.clone();
    let m = lemma_m(&input.hi, delta);
    let mut js = Vec::with_capacity(m as usize);
    let mut j_ids = Vec::with_capacity(m as usize);
    let mut cur = id;
    for _ in 0..m {
        let iv = forest.nodes[cur].interval.clone();
        let h = half();
        let lower = iv.affine(&h, &Rational::zero());
        let upper = iv.affine(&h, &h);
        let a = forest.push(lower, NodeKind::Split, Some(AffineMap::Half), round);
        let b = forest.push(upper.clone(), NodeKind::JLeaf, Some(AffineMap::HalfPlusHalf), round);
        let node = &mut forest.nodes[cur];
        node.kind = NodeKind::Split;
        node.children = vec![a, b];
        js.push(upper);
        j_ids.push(b);
        cur = a;
    }
    forest.nodes[cur].kind = NodeKind::ILeaf;
    let i = forest.nodes[cur].interval.clone();
    (LemmaRecord { input, m, i, js }, j_ids)
}

/// The lemma applied verbatim to (α, β].
pub fn landau_lemma_decompose(alpha: &Rational, beta: &Rational, delta: &Rational) -> Result<LemmaDecomposition> {
    check_delta(delta)?;
    if !(alpha >= &Rational::zero() && alpha < beta && beta <= &Rational::one()) {
        return Err(Error::domain(format!(
            "lemma needs 0 ≤ α < β ≤ 1, got ({}, {}]",
            rational_to_string(alpha),
            rational_to_string(beta)
        )));
    }
    let mut forest = Forest::default();
    let root = forest.push(HalfOpen::raw(alpha.clone(), beta.clone()), NodeKind::ILeaf, None, 1);
    let (rec, _) = lemma_into(&mut forest, root, delta, 1);
    Ok(LemmaDecomposition {
        m: rec.m,
        i: rec.i,
        js: rec.js,
        forest,
        root,
    })
}

/// Band thresholds a_i = δ·2^{i−2} for i ≥ 1 while a_i < 1.
///
/// The lemma's m equals k on (a_k, a_{k+1}] and 0 on (0, a_1].
pub fn band_thresholds(delta: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut a = delta / Rational::from_integer(2.into());
    while a < Rational::one() {
        out.push(a.clone());
        a = a * Rational::from_integer(2.into());
    }
    out
}

/// Least t with (1 − δ/4)^t < δ/2, by exact powering.
pub fn landau_rounds(delta: &Rational) -> Result<u32> {
    check_delta(delta)?;
    let q = Rational::one() - delta / Rational::from_integer(4.into());
    let target = delta * half();
    let mut p = Rational::one();
    let mut t = 0;
    while p >= target {
        p = p * &q;
        t += 1;
    }
    Ok(t)
}

/// Output of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSet {
    pub delta: Rational,
    pub t: u32,
    pub forest: Forest,
    pub root: usize,
    pub lemmas: Vec<LemmaRecord>,
    pub i_union: IntervalSet,
    pub j_union: IntervalSet,
    pub leaf_union: IntervalSet,
    pub measure: Rational,
    /// Σ of final-round J lengths counted with multiplicity.
    pub j_multiset_length: Rational,
}

/// Builds the decomposition forest for t rounds.
///
/// Every interval is cut at the band thresholds before the lemma is applied,
/// so each lemma instance has a single m.
pub fn landau_construct(delta: &Rational, node_budget: usize) -> Result<FundamentalSet> {
    let t = landau_rounds(delta)?;
    let bands = band_thresholds(delta);
    let mut forest = Forest::default();
    let root = forest.push(HalfOpen::raw(Rational::zero(), Rational::one()), NodeKind::JLeaf, None, 0);
    let mut frontier = vec![root];
    let mut lemmas = Vec::new();
    let mut i_leaves = Vec::new();
    let over = |n: usize| -> Result<()> {
        if n > node_budget {
            Err(Error::Resource {
                what: "decomposition nodes",
                limit: node_budget,
            })
        } else {
            Ok(())
        }
    };
    for round in 1..=t {
        let mut next = Vec::new();
        for id in frontier {
            let iv = forest.nodes[id].interval.clone();
            let mut cuts: Vec<Rational> = bands.iter().filter(|a| iv.lo < **a && **a < iv.hi).cloned().collect();
            let pieces: Vec<usize> = if cuts.is_empty() {
                vec![id]
            } else {
                cuts.push(iv.hi.clone());
                let mut lo = iv.lo.clone();
                let mut kids = Vec::with_capacity(cuts.len());
                for c in cuts {
                    kids.push(forest.push(HalfOpen::raw(lo, c.clone()), NodeKind::JLeaf, None, round));
                    lo = c;
                }
                let node = &mut forest.nodes[id];
                node.kind = NodeKind::Partition;
                node.children = kids.clone();
                kids
            };
            for p in pieces {
                let (rec, js) = lemma_into(&mut forest, p, delta, round);
                let i_id = {
                    let mut cur = p;
                    while forest.nodes[cur].kind == NodeKind::Split {
                        cur = forest.nodes[cur].children[0];
                    }
                    cur
                };
                i_leaves.push(i_id);
                lemmas.push(rec);
                next.extend(js);
            }
            over(forest.len())?;
        }
        frontier = next;
    }
    let i_union = IntervalSet::from_intervals(i_leaves.iter().map(|&i| forest.nodes[i].interval.clone()));
    let j_union = IntervalSet::from_intervals(frontier.iter().map(|&j| forest.nodes[j].interval.clone()));
    let j_multiset_length = frontier
        .iter()
        .fold(Rational::zero(), |acc, &j| acc + forest.nodes[j].interval.len());
    let leaf_union = i_union.union(&j_union);
    let measure = leaf_union.measure();
    Ok(FundamentalSet {
        delta: delta.clone(),
        t,
        forest,
        root,
        lemmas,
        i_union,
        j_union,
        leaf_union,
        measure,
        j_multiset_length,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafReport {
    pub lo: String,
    pub hi: String,
    pub kind: NodeKind,
}

/// JSON view: the leaf union split into its I and J components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalSetReport {
    pub delta: String,
    pub t: u32,
    pub leaves: Vec<LeafReport>,
    pub measure: String,
}

impl FundamentalSet {
    pub fn report(&self) -> FundamentalSetReport {
        let mut leaves = Vec::new();
        for (set, kind) in [(&self.i_union, NodeKind::ILeaf), (&self.j_union, NodeKind::JLeaf)] {
            for iv in set.intervals() {
                leaves.push(LeafReport {
                    lo: rational_to_string(&iv.lo),
                    hi: rational_to_string(&iv.hi),
                    kind,
                });
            }
        }
        FundamentalSetReport {
            delta: rational_to_string(&self.delta),
            t: self.t,
            leaves,
            measure: rational_to_string(&self.measure),
        }
    }

    /// (1 − δ/4)^t.
    pub fn shrink_bound(&self) -> Rational {
        let q = Rational::one() - &self.delta / Rational::from_integer(4.into());
        (0..self.t).fold(Rational::one(), |p, _| p * &q)
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::ratio;
    use super::*;

    fn iv(a: Rational, b: Rational) -> HalfOpen {
        HalfOpen::new(a, b).unwrap()
    }

    #[test]
    fn lemma_examples() {
        let d = landau_lemma_decompose(&ratio(0, 1), &ratio(3, 10), &ratio(1, 1)).unwrap();
        assert_eq!((d.m, d.i.clone(), d.js.len()), (0, iv(ratio(0, 1), ratio(3, 10)), 0));

        let d = landau_lemma_decompose(&ratio(0, 1), &ratio(1, 1), &ratio(1, 1)).unwrap();
        assert_eq!(d.m, 1);
        assert_eq!(d.i, iv(ratio(0, 1), ratio(1, 2)));
        assert_eq!(d.js, vec![iv(ratio(1, 2), ratio(1, 1))]);

        let d = landau_lemma_decompose(&ratio(0, 1), &ratio(1, 1), &ratio(1, 2)).unwrap();
        assert_eq!(d.m, 2);
        assert_eq!(d.i, iv(ratio(0, 1), ratio(1, 4)));
        assert_eq!(d.js, vec![iv(ratio(1, 2), ratio(1, 1)), iv(ratio(1, 2), ratio(3, 4))]);
        assert_eq!(d.forest.len(), 5);
    }

    #[test]
    fn lemma_rejects_bad_input() {
        assert!(landau_lemma_decompose(&ratio(1, 2), &ratio(1, 2), &ratio(1, 1)).is_err());
        assert!(landau_lemma_decompose(&ratio(0, 1), &ratio(3, 2), &ratio(1, 1)).is_err());
        assert!(landau_lemma_decompose(&ratio(0, 1), &ratio(1, 2), &ratio(0, 1)).is_err());
        assert!(landau_lemma_decompose(&ratio(0, 1), &ratio(1, 2), &ratio(3, 2)).is_err());
    }

    #[test]
    fn rounds() {
        assert_eq!(landau_rounds(&ratio(1, 2)).unwrap(), 11);
        assert_eq!(landau_rounds(&ratio(1, 1)).unwrap(), 3);
        assert_eq!(landau_rounds(&ratio(1, 10)).unwrap(), 119);
        assert_eq!(landau_rounds(&ratio(1, 50)).unwrap(), 919);
    }

    #[test]
    fn construction_at_one_and_half() {
        let fs = landau_construct(&ratio(1, 1), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(fs.t, 3);
        assert_eq!(fs.measure, ratio(9, 16));
        let fs = landau_construct(&ratio(1, 2), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(fs.t, 11);
        assert!(fs.measure < ratio(1, 2));
        assert_eq!(fs.i_union.intervals(), &[iv(ratio(0, 1), ratio(1, 4))]);
        assert!(fs.j_multiset_length < fs.shrink_bound());
        for rec in &fs.lemmas {
            assert!(rec.conserves_measure() && rec.i_is_large(&fs.delta));
        }
    }

    #[test]
    fn leaves_sit_in_their_halves() {
        let d = ratio(3, 4);
        let fs = landau_construct(&d, DEFAULT_NODE_BUDGET).unwrap();
        let lower = iv(ratio(0, 1), &d / ratio(2, 1));
        let upper = iv(&d / ratio(2, 1), ratio(1, 1));
        for n in &fs.forest.nodes {
            match n.kind {
                NodeKind::ILeaf => assert!(n.interval.is_subset_of(&lower)),
                NodeKind::JLeaf => assert!(n.interval.is_subset_of(&upper)),
                NodeKind::Split => {
                    let a = &fs.forest.nodes[n.children[0]].interval;
                    let b = &fs.forest.nodes[n.children[1]].interval;
                    assert_eq!(a, &n.interval.affine(&ratio(1, 2), &ratio(0, 1)));
                    assert_eq!(b, &n.interval.affine(&ratio(1, 2), &ratio(1, 2)));
                }
                NodeKind::Partition => {
                    let total = n
                        .children
                        .iter()
                        .fold(Rational::zero(), |a, &c| a + fs.forest.nodes[c].interval.len());
                    assert_eq!(total, n.interval.len());
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            landau_construct(&ratio(1, 2), 100),
            Err(Error::Resource { .. })
        ));
    }
}
