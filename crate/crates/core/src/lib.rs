//! Numerical and exact verification of gamma-function identities.
//!
//! The crate evaluates classical identities for Γ (functional relation,
//! reflection, duplication, Gauss multiplication), Schlömilch's finite and
//! generalized series, Ramanujan's Master Theorem, and reconstructs Γ from
//! small fundamental sets through replayable derivation traces.

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::{c64, Complex64};
pub mod identities;
pub mod json;
pub mod schlomilch;
pub mod fundamental_sets;
pub mod mellin;
