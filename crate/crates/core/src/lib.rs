//! Explicit constants and finite-dimensional checks for semiclassical
//! eigenvalue inequalities of magnetic Laplacians.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! * [`specfun`]: Gamma, real-order Bessel `J`, Bessel zeros, the sine
//!   integral and the quadrature rules built on them.
//! * [`constants`]: every closed-form constant (semiclassical constants,
//!   excess factors, lifting factors, sharp constants).
//! * [`landau`]: exact Landau-level Riesz sums and their supremum ratio.
//! * [`abflux`]: the sharp Aharonov-Bohm constant `R_γ(α)` from Bessel series.
//! * [`lattice`]: gauge-covariant (Peierls) discretization of `(D - A)^2` on
//!   planar grid domains with Dirichlet or Neumann conditions.
//! * [`eig`]: a dense Hermitian eigensolver and spectral matrix functions.
//! * [`bounds`]: Riesz means of spectra and verdicts for the inequalities.
//! * [`bschwinger`]: Birman-Schwinger thresholds, the coupling-average
//!   lemma and semigroup domination on random finite models.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod abflux;
pub mod bounds;
pub mod bschwinger;
pub mod constants;
pub mod eig;
mod error;
pub mod landau;
pub mod lattice;
pub mod search;
pub mod specfun;

pub use error::{Error, Result};
