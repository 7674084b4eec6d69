//! Smooth minimal-degree space-filling curves on `P^1 x P^1` over `F_q`.
//!
//! Layers, bottom up: [`field`] (prime fields and extension towers),
//! [`unipoly`] (univariate polynomials and factorization), [`binform`]
//! (binary forms and the `SL_2(F_q)` action), [`curve`] (the curves `C_{f,g}`
//! and their smoothness test), [`orbits`] (orbit tables and censuses) and
//! [`construct`] (explicit smooth partners and symmetric curves). [`cli`]
//! backs the `fillcurve` binary.

pub mod binform;
pub mod cli;
pub mod construct;
pub mod curve;
pub mod error;
pub mod field;
pub mod orbits;
pub mod rng;
pub mod unipoly;

pub use binform::{enumerate_gq, enumerate_sl2, random_gq, BinForm, Guards, ProjPoint, SL2Mat};
pub use curve::{
    build_curve, homma_bound, scan_oracle, singular_witness, verify_space_filling, Curve,
    SingularWitness, SmoothnessChecker, SmoothnessReport,
};
pub use error::{Error, Result, Side};
pub use field::{canonical_field, Fel, FieldCtx};
pub use unipoly::{Factorization, UPoly};
