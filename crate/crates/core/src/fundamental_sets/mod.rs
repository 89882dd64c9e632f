//! Exact interval sets and fundamental sets for Γ.

pub mod closure;
pub mod interval_set;
pub mod landau;
pub mod rational;
pub mod self_similar;
pub mod stern;
pub mod trace;
pub mod tracers;

pub use interval_set::{HalfOpen, IntervalSet};
pub use landau::{
    band_thresholds, landau_construct, landau_lemma_decompose, landau_rounds, AffineMap,
    DecompositionNode, Forest, FundamentalSet, FundamentalSetReport, LemmaDecomposition,
    LemmaRecord, NodeKind, DEFAULT_NODE_BUDGET,
};
pub use rational::{parse_rational, ratio, Rational};
pub use self_similar::{landau_contains, landau_exact_measure, LandauMeasure};
pub use closure::{affine_closure, argument_maps, closure_growth_bound, AffineArgMap, DEFAULT_CLOSURE_BUDGET};
pub use stern::{bareiss_rank, stern_independent_count, stern_relation_matrix, totient, SternProblem};
pub use trace::{DerivationTrace, Rule, TraceArg, TraceNode, REPLAY_TOL};
pub use tracers::{
    complex_reduce_trace, in_complex_strip, in_leaf_union, in_quarter_set, quarter_set_trace, trace_evaluate,
    DEFAULT_DEPTH_CAP, DEFAULT_TRACE_BUDGET,
};
