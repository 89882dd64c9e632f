//! Tracers that rebuild Γ values from a restricted set of direct evaluations.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::landau::{FundamentalSet, NodeKind};
use super::trace::{DerivationTrace, Rule, TraceArg, TraceNode};
use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;
use crate::numerics::pole_distance;

pub const DEFAULT_DEPTH_CAP: u32 = 64;
pub const DEFAULT_TRACE_BUDGET: usize = 1_000_000;
/// Distance from 1/3 below which the comb escape is refused.
pub const THIRD_EXCLUSION: f64 = 1e-9;
/// Largest imaginary part accepted by the complex tracer.
pub const MAX_IMAG: f64 = 65536.0;
/// Longest chain of unit shifts the complex tracer will record.
pub const MAX_SHIFTS: usize = 4096;

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn make_arg(x: &Rational, im: Option<f64>) -> TraceArg {
    match im {
        None => TraceArg::Rational(x.clone()),
        Some(im) => TraceArg::Complex { re: x.clone(), im },
    }
}

// Follows the decomposition forest from node `id`: direct evaluation at I and
// J leaves, a forward duplication at every split. A complex argument x + i·im
// follows the pattern of its real part.
fn follow(fs: &FundamentalSet, id: usize, x: &Rational, im: Option<f64>, budget: &mut usize) -> Result<TraceNode> {
    let node = fs.forest.node(id);
    if !node.interval.contains(x) {
        return Err(Error::TraceDepth(format!(
            "{} is not covered by node {} ({})",
            rational_to_string(x),
            id,
            node.interval
        )));
    }
    if *budget == 0 {
        return Err(Error::Depth("trace node budget exhausted".into()));
    }
    *budget -= 1;
    match node.kind {
        NodeKind::ILeaf | NodeKind::JLeaf => TraceNode::direct(make_arg(x, im)),
        NodeKind::Partition => {
            let next = node
                .children
                .iter()
                .copied()
                .find(|&c| fs.forest.node(c).interval.contains(x))
                .ok_or_else(|| {
                    Error::TraceDepth(format!("no piece of {} contains {}", node.interval, rational_to_string(x)))
                })?;
            follow(fs, next, x, im, budget)
        }
        NodeKind::Split => {
            let lo = x / Rational::from_integer(2.into());
            let hi = &lo + half();
            let half_im = im.map(|v| v / 2.0);
            let a = follow(fs, node.children[0], &lo, half_im, budget)?;
            let b = follow(fs, node.children[1], &hi, half_im, budget)?;
            TraceNode::derived(make_arg(x, im), Rule::Duplication, vec![a, b])
        }
    }
}

/// Γ(x) for x ∈ (0, 1], evaluated directly only on `fs.leaf_union`.
pub fn trace_evaluate(x: &Rational, fs: &FundamentalSet) -> Result<(f64, DerivationTrace)> {
    if !x.is_positive() || x > &Rational::one() {
        return Err(Error::domain(format!("x = {} is outside (0, 1]", rational_to_string(x))));
    }
    let mut budget = DEFAULT_TRACE_BUDGET;
    let t = follow(fs, fs.root, x, None, &mut budget)?;
    Ok((t.value.re, t))
}

/// Membership in the restricted set used by [`trace_evaluate`].
pub fn in_leaf_union(fs: &FundamentalSet) -> impl Fn(&TraceArg) -> bool + '_ {
    move |a| matches!(a, TraceArg::Rational(q) if fs.leaf_union.contains(q))
}

/// Membership in (0, 1/4] ∪ {1/3, 1}.
pub fn in_quarter_set(a: &TraceArg) -> bool {
    match a {
        TraceArg::Real(v) => (*v > 0.0 && *v <= 0.25) || *v == 1.0 / 3.0 || *v == 1.0,
        _ => false,
    }
}

/// Membership in {x + iy : x ∈ leaf_union, |y| < 1}.
pub fn in_complex_strip(fs: &FundamentalSet) -> impl Fn(&TraceArg) -> bool + '_ {
    move |a| matches!(a, TraceArg::Complex { re, im } if im.abs() < 1.0 && fs.leaf_union.contains(re))
}

fn quarter(x: f64, depth: u32, cap: u32) -> Result<TraceNode> {
    if depth > cap {
        return Err(Error::Depth(format!("comb escape exceeded depth {cap} at x = {x}")));
    }
    if in_quarter_set(&TraceArg::Real(x)) {
        return TraceNode::direct(TraceArg::Real(x));
    }
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::domain(format!("x = {x} is outside (0, 1/2)")));
    }
    if (x - 1.0 / 3.0).abs() <= THIRD_EXCLUSION {
        return Err(Error::domain(format!("x = {x} is within {THIRD_EXCLUSION} of 1/3")));
    }
    if x < 1.0 / 3.0 {
        let alpha = x - 0.25;
        let kids = vec![
            quarter(4.0 * alpha, depth + 1, cap)?,
            quarter(2.0 * alpha, depth + 1, cap)?,
            quarter(0.25 - alpha, depth + 1, cap)?,
        ];
        return TraceNode::derived(TraceArg::Real(x), Rule::Comb, kids);
    }
    // Γ(x) = π / (sin πx · Γ(1 − x)), with Γ(1 − x) from Γ(1 − 2x) and Γ(1/2 − x)
    let y = 1.0 - x;
    let z = 1.0 - 2.0 * x;
    let inner = TraceNode::derived(
        TraceArg::Real(y),
        Rule::Duplication,
        vec![quarter(z, depth + 1, cap)?, quarter(0.5 - x, depth + 1, cap)?],
    )?;
    TraceNode::derived(TraceArg::Real(x), Rule::Reflection, vec![inner])
}

/// Γ(x) for x ∈ (0, 1/2) from direct values on (0, 1/4] ∪ {1/3, 1}.
pub fn quarter_set_trace(x: f64, depth_cap: u32) -> Result<(f64, DerivationTrace)> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::domain(format!("x = {x} is outside (0, 1/2)")));
    }
    let t = quarter(x, 0, depth_cap)?;
    Ok((t.value.re, t))
}

fn halvings(fs: &FundamentalSet, re: &Rational, im: f64, budget: &mut usize) -> Result<TraceNode> {
    if im.abs() < 1.0 {
        return follow(fs, fs.root, re, Some(im), budget);
    }
    if *budget == 0 {
        return Err(Error::Depth("trace node budget exhausted".into()));
    }
    *budget -= 1;
    let lo = re / Rational::from_integer(2.into());
    let hi = &lo + half();
    let a = halvings(fs, &lo, im / 2.0, budget)?;
    let b = halvings(fs, &hi, im / 2.0, budget)?;
    TraceNode::derived(make_arg(re, Some(im)), Rule::Duplication, vec![a, b])
}

/// Γ(z) from direct values on the strip over `fs.leaf_union`.
pub fn complex_reduce_trace(z: Complex64, fs: &FundamentalSet, budget: usize) -> Result<(Complex64, DerivationTrace)> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {z}")));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::domain(format!("|Im z| = {} exceeds {MAX_IMAG}", z.im.abs())));
    }
    if pole_distance(z).is_some_and(|d| d <= 1e-6) {
        return Err(Error::domain(format!("{z} is within 1e-6 of a pole")));
    }
    let re = Rational::from_float(z.re).ok_or_else(|| Error::domain("real part is not representable"))?;
    let one = Rational::one();
    // number of unit shifts into (0, 1]
    let shifts = if re > one {
        (&re - &one).ceil()
    } else if !re.is_positive() {
        (-&re).floor() + &one
    } else {
        Rational::zero()
    };
    let n = shifts.to_integer().to_usize().unwrap_or(usize::MAX);
    if n > MAX_SHIFTS || n >= budget {
        return Err(Error::Depth(format!("{n} unit shifts exceed the trace budget")));
    }
    let step = Rational::from_integer(n.into());
    let base = if re > one { &re - &step } else { &re + &step };
    let mut left = budget - n;
    let mut node = halvings(fs, &base, z.im, &mut left)?;
    for k in 1..=n {
        let k = Rational::from_integer(k.into());
        let at = if re > one { &base + &k } else { &base - &k };
        node = TraceNode::derived(TraceArg::Complex { re: at, im: z.im }, Rule::Functional, vec![node])?;
    }
    Ok((node.value, node))
}

#[cfg(test)]
mod tests {
    use super::super::landau::landau_construct;
    use super::super::rational::ratio;
    use super::*;
    use crate::numerics::{c64, gamma};

    fn fs_half() -> FundamentalSet {
        landau_construct(&ratio(1, 2), super::super::landau::DEFAULT_NODE_BUDGET).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn landau_trace_examples() {
        let fs = fs_half();
        let (v, t) = trace_evaluate(&ratio(9, 10), &fs).unwrap();
        assert!((v - 1.068628702119319).abs() < 1e-9);
        assert!(t.validate(&in_leaf_union(&fs)).is_ok());
        assert!(rel(t.replay().unwrap(), t.value) < 1e-12);
        let (one, t1) = trace_evaluate(&ratio(1, 1), &fs).unwrap();
        assert!((one - 1.0).abs() < 1e-9);
        assert!(t1.node_count() > 1);
        // inside the I part: a single direct node
        let (_, t2) = trace_evaluate(&ratio(1, 5), &fs).unwrap();
        assert_eq!(t2.node_count(), 1);
        assert!(trace_evaluate(&ratio(0, 1), &fs).is_err());
    }

    #[test]
    fn quarter_examples() {
        let (_, t) = quarter_set_trace(0.2, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(t.rule, Rule::Direct);
        let (v, t) = quarter_set_trace(0.3, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(t.rule, Rule::Comb);
        assert!(t.children.iter().all(|c| c.rule == Rule::Direct));
        assert!((v - gamma(c64(0.3, 0.0)).unwrap().re).abs() / v < 1e-12);
        let (v, t) = quarter_set_trace(0.45, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(t.rule, Rule::Reflection);
        let leaves: Vec<f64> = t.direct_leaves().iter().map(|a| a.to_complex().re).collect();
        assert_eq!(leaves.len(), 2);
        assert!((leaves[0] - 0.1).abs() < 1e-15 && (leaves[1] - 0.05).abs() < 1e-15);
        assert!((v - gamma(c64(0.45, 0.0)).unwrap().re).abs() / v < 1e-12);
        assert!(t.validate(&in_quarter_set).is_ok());
        assert!(matches!(quarter_set_trace(1.0 / 3.0 + 1e-10, 64), Err(Error::Domain(_))));
        assert!(quarter_set_trace(1.0 / 3.0, 64).unwrap().1.rule == Rule::Direct);
        assert!(matches!(quarter_set_trace(1.0 / 3.0 - 1e-6, 3), Err(Error::Depth(_))));
    }

    #[test]
    fn complex_examples() {
        let fs = fs_half();
        let z = c64(0.9, 3.5);
        let (v, t) = complex_reduce_trace(z, &fs, DEFAULT_TRACE_BUDGET).unwrap();
        assert!(rel(v, gamma(z).unwrap()) < 1e-8);
        assert!(t.validate(&in_complex_strip(&fs)).is_ok());
        assert_eq!(t.rule, Rule::Duplication);
        assert_eq!(t.children[0].children[0].arg.to_complex().im, 0.875);
        let z = c64(3.2, 0.5);
        let (v, t) = complex_reduce_trace(z, &fs, DEFAULT_TRACE_BUDGET).unwrap();
        assert!(rel(v, gamma(z).unwrap()) < 1e-8);
        let mut cur = &t;
        for _ in 0..3 {
            assert_eq!(cur.rule, Rule::Functional);
            cur = &cur.children[0];
        }
        assert!((cur.arg.to_complex() - c64(0.2, 0.5)).norm() < 1e-15);
        let z = c64(-1.7, -2.25);
        let (v, _) = complex_reduce_trace(z, &fs, DEFAULT_TRACE_BUDGET).unwrap();
        assert!(rel(v, gamma(z).unwrap()) < 1e-8);
        assert!(matches!(complex_reduce_trace(c64(0.5, 3.0), &fs, 10), Err(Error::Depth(_))));
        assert!(complex_reduce_trace(c64(-2.0, 0.0), &fs, 10).is_err());
    }
}
