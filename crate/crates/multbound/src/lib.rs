//! Exact arithmetic for finite p-groups given by power-commutator
//! presentations, with a brute-force Schur multiplier oracle and checkers
//! for a family of multiplier order bounds.
//!
//! The crate is organised bottom-up:
//!
//! * [`pc`] — power-commutator presentations, collection, consistency
//!   checks, multiplication-table materialisation.
//! * [`group`] — subgroup/series/quotient algorithms on materialised
//!   tables and the [`group::GroupProfile`] invariants `(n, k, d, c, δ, γ, t)`.
//! * [`linalg`] — exact linear algebra over ℤ and ℤ/pᵉ plus closed forms
//!   for tensor, hom, ext and the multiplier of abelian p-groups.
//! * [`cohomology`] — `|H²(G, ℤ/pʲ)|` by normalized 2-cocycle elimination
//!   and recovery of the abelian type of `M(G)`.
//! * [`ew`] — the maps Ψᵢ on tensor powers of abelian sections, their
//!   image sizes, and the master inequality they enter.
//! * [`bounds`] — every bound formula with its applicability predicate.
//! * [`corpus`] — built-in group families and entry parsing.
//! * [`sweep`] — the verification sweep and machine-readable reports.
//!
//! Every runnable capability has a matching example under `examples/`;
//! the `multbound` binary is a thin wrapper over [`sweep`] and [`corpus`].

pub mod bounds;
pub mod cohomology;
pub mod corpus;
pub mod ew;
pub mod group;
pub mod linalg;
pub mod pc;
pub mod sweep;

pub use group::{GroupProfile, Subgroup, TableGroup};
pub use linalg::AbelianType;
pub use pc::{NormalWord, PcPresentation};
