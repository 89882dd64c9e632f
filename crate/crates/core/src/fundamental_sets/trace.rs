//! Derivation traces: trees recording how a Γ value was assembled from
//! direct evaluations on a restricted set.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use std::f64::consts::{LN_2, PI};

use super::Rational;
use crate::error::{Error, Result};
use crate::json::rational_to_string;
use crate::numerics::{c64, gamma, sin_pi_c};

/// Relative tolerance for argument relations and recomputed values.
pub const REPLAY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum TraceArg {
    Rational(Rational),
    Real(f64),
    /// Exact real part, floating imaginary part.
    Complex { re: Rational, im: f64 },
}

impl TraceArg {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            TraceArg::Rational(q) => c64(q.to_f64().unwrap_or(f64::NAN), 0.0),
            TraceArg::Real(x) => c64(*x, 0.0),
            TraceArg::Complex { re, im } => c64(re.to_f64().unwrap_or(f64::NAN), *im),
        }
    }

    /// Exact real part where the variant carries one.
    pub fn exact_re(&self) -> Option<&Rational> {
        match self {
            TraceArg::Rational(q) | TraceArg::Complex { re: q, .. } => Some(q),
            TraceArg::Real(_) => None,
        }
    }
}

impl Serialize for TraceArg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TraceArg::Rational(q) => s.serialize_str(&rational_to_string(q)),
            TraceArg::Real(x) => s.serialize_f64(*x),
            TraceArg::Complex { re, im } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("re", &rational_to_string(re))?;
                m.serialize_entry("im", im)?;
                m.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Direct,
    Functional,
    Reflection,
    Duplication,
    Comb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceNode {
    pub arg: TraceArg,
    pub rule: Rule,
    pub value: Complex64,
    pub children: Vec<TraceNode>,
}

impl Serialize for TraceNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TraceNode", 3)?;
        st.serialize_field("rule", &self.rule)?;
        st.serialize_field("arg", &self.arg)?;
        st.serialize_field("children", &self.children)?;
        st.end()
    }
}

fn pow2(z: Complex64) -> Complex64 {
    (z * LN_2).exp()
}

fn rel_gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

// s·p + c == q, cross-multiplied to skip the gcd work of rational addition.
fn affine_eq(p: &Rational, s: i64, c: &Rational, q: &Rational) -> bool {
    let lhs = (p.numer() * s * c.denom() + c.numer() * p.denom()) * q.denom();
    lhs == q.numer() * p.denom() * c.denom()
}

// Whether `child` equals s·x + c with (s, c) applied to the parent argument.
fn related(parent: &TraceArg, child: &TraceArg, s: i64, c: Rational) -> bool {
    match (parent, child) {
        (TraceArg::Rational(p), TraceArg::Rational(q)) => affine_eq(p, s, &c, q),
        (TraceArg::Complex { re: pr, im: pi }, TraceArg::Complex { re: qr, im: qi }) => {
            affine_eq(pr, s, &c, qr) && (pi * s as f64 - qi).abs() <= REPLAY_TOL * pi.abs().max(1.0)
        }
        _ => {
            let want = parent.to_complex() * s as f64 + c.to_f64().unwrap_or(f64::NAN);
            let got = child.to_complex();
            (want - got).norm() <= REPLAY_TOL * want.norm().max(1.0)
        }
    }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

// Argument relation of a half map, a → a/2 + c, checked as 2·child − 2c = a.
fn halves(parent: &TraceArg, child: &TraceArg, c: Rational) -> bool {
    related(child, parent, 2, -(c * q(2, 1)))
}

impl TraceNode {
    pub fn direct(arg: TraceArg) -> Result<TraceNode> {
        let value = gamma(arg.to_complex())?;
        Ok(TraceNode {
            arg,
            rule: Rule::Direct,
            value,
            children: Vec::new(),
        })
    }

    /// Builds an internal node and computes its value from the children.
    pub fn derived(arg: TraceArg, rule: Rule, children: Vec<TraceNode>) -> Result<TraceNode> {
        let mut n = TraceNode {
            arg,
            rule,
            value: c64(0.0, 0.0),
            children,
        };
        let vals: Vec<Complex64> = n.children.iter().map(|c| c.value).collect();
        n.value = n.combine(&vals)?;
        Ok(n)
    }

    /// Checks that the children's arguments stand in the relation the rule
    /// requires.
    pub fn relation_holds(&self) -> bool {
        let ch = &self.children;
        let a = &self.arg;
        match self.rule {
            Rule::Direct => ch.is_empty(),
            Rule::Functional => {
                ch.len() == 1 && (related(a, &ch[0].arg, 1, q(-1, 1)) || related(a, &ch[0].arg, 1, q(1, 1)))
            }
            Rule::Reflection => ch.len() == 1 && related(a, &ch[0].arg, -1, q(1, 1)),
            Rule::Duplication => {
                ch.len() == 2
                    && ((halves(a, &ch[0].arg, q(0, 1)) && halves(a, &ch[1].arg, q(1, 2)))
                        || (related(a, &ch[0].arg, 2, q(-1, 1)) && related(a, &ch[1].arg, 1, q(-1, 2))))
            }
            Rule::Comb => {
                // x = α + 1/4; children 4α, 2α, 1/4 − α
                ch.len() == 3
                    && related(a, &ch[0].arg, 4, q(-1, 1))
                    && related(a, &ch[1].arg, 2, q(-1, 2))
                    && related(a, &ch[2].arg, -1, q(1, 2))
            }
        }
    }

    /// Value of this node recomputed from child values by its rule.
    pub fn combine(&self, vals: &[Complex64]) -> Result<Complex64> {
        let x = self.arg.to_complex();
        let sqrt_pi = PI.sqrt();
        let bad = || Error::TraceDepth(format!("{:?} node at {x} has malformed children", self.rule));
        let v = match self.rule {
            Rule::Direct => gamma(x)?,
            Rule::Functional => {
                let c = self.children.first().ok_or_else(bad)?;
                if (c.arg.to_complex() - (x - 1.0)).norm() < 0.5 {
                    (x - 1.0) * vals[0]
                } else {
                    vals[0] / x
                }
            }
            Rule::Reflection => PI / (sin_pi_c(x) * vals[0]),
            Rule::Duplication => {
                if vals.len() != 2 {
                    return Err(bad());
                }
                let second = self.children[1].arg.to_complex();
                if (second - (x * 0.5 + 0.5)).norm() < (second - (x - 0.5)).norm() {
                    pow2(x - 1.0) * vals[0] * vals[1] / sqrt_pi
                } else {
                    // x = z/2 + 1/2 recovered from Γ(z) and Γ(z/2)
                    let z = self.children[0].arg.to_complex();
                    sqrt_pi * vals[0] / (pow2(z - 1.0) * vals[1])
                }
            }
            Rule::Comb => {
                if vals.len() != 3 {
                    return Err(bad());
                }
                let alpha = x - 0.25;
                vals[0] * vals[2] * sin_pi_c(alpha + 0.75) / (pow2(alpha * 6.0 - 1.5) * vals[1])
            }
        };
        Ok(v)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn direct_leaves(&self) -> Vec<&TraceArg> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a TraceArg>) {
        if self.rule == Rule::Direct {
            out.push(&self.arg);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    /// Recomputes the tree bottom-up, taking Γ only at direct leaves.
    pub fn replay(&self) -> Result<Complex64> {
        let vals = self
            .children
            .iter()
            .map(|c| c.replay())
            .collect::<Result<Vec<_>>>()?;
        self.combine(&vals)
    }

    /// Checks leaf membership, argument relations and stored values.
    pub fn validate(&self, allowed: &dyn Fn(&TraceArg) -> bool) -> std::result::Result<(), String> {
        if self.rule == Rule::Direct {
            if !allowed(&self.arg) {
                return Err(format!("direct leaf at {} lies outside the restricted set", self.arg.to_complex()));
            }
        } else if !self.relation_holds() {
            return Err(format!("{:?} node at {} has unrelated children", self.rule, self.arg.to_complex()));
        }
        for c in &self.children {
            c.validate(allowed)?;
        }
        let vals: Vec<Complex64> = self.children.iter().map(|c| c.value).collect();
        let v = self.combine(&vals).map_err(|e| e.to_string())?;
        if rel_gap(v, self.value) > REPLAY_TOL {
            return Err(format!(
                "{:?} node at {}: stored {} but children give {}",
                self.rule,
                self.arg.to_complex(),
                self.value,
                v
            ));
        }
        Ok(())
    }
}

/// Root of a derivation.
pub type DerivationTrace = TraceNode;
