//! Exact decision procedures for the realisability of unit covariances of
//! binary random fields on a finite index set.
//!
//! The set `U_N*` of realisable supra-diagonal arrays is a full-dimensional
//! polytope with the `2^(N-1)` vertices `u ⊘ u`. This crate decides membership
//! with certificates in both directions, screens with integer quadratic
//! inequalities, enumerates facets, and analyses singular boundary points.
//! All decisions use exact rational arithmetic.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod boundary;
pub mod error;
pub mod facets;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod rat;
pub mod realisability;
pub mod screen;
pub mod vertices;

pub use error::{Error, Result};
pub use model::{
    complete, embed, outer_tri, pair_count, pair_index, pairs, permute, phi, phi_inv, switch,
    Facet, FullMatrix, IntVector, Mixture, SignVector, TriArray,
};
pub use rat::Rat;
