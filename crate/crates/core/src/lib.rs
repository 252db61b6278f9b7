//! Free-particle s-wave dynamics in N dimensions.
//!
//! A ring-shaped packet with zero angular momentum first contracts and then
//! expands under free evolution in two dimensions, while a spherical shell in
//! three dimensions only expands. This crate provides the pieces needed to
//! reproduce and cross-check that behaviour:
//!
//! - [`specialfn`]: gamma, confluent hypergeometric ₁F₁, Bessel J₀ and
//!   semi-infinite adaptive quadrature.
//! - [`packets`]: the initial packet families, their normalization and
//!   reduced radial wavefunctions.
//! - [`analytic`]: closed-form moment evolution and the general-exponent
//!   two-dimensional mean radius.
//! - [`evolve`]: Crank–Nicolson propagation of the reduced radial equation
//!   with the dimension-dependent effective potential, plus an exact spectral
//!   free propagator used as an oracle.
//! - [`wigner`]: Wigner function of isotropic packets and negative
//!   phase-space volumes.
//!
//! Units are ħ = M = 1 throughout. The dimensionless time is τ = t/δr².
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping))]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
mod error;
pub mod evolve;
pub mod packets;
pub mod specialfn;
pub mod wigner;

pub use error::{Error, Result, SolverFault};
