//! Special functions and quadrature used by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod dd;
mod gamma;
mod hyp1f1;
mod quad;

pub use bessel::bessel_j0;
pub(crate) use bessel::{bessel_j0_unchecked, bessel_j0_zero, bessel_j1};
pub use gamma::gamma_fn;
pub(crate) use gamma::gamma_real;
pub use hyp1f1::hyp1f1;
pub(crate) use hyp1f1::hyp1f1_scaled;
pub use quad::{
    gauss_legendre, integrate, integrate_semi_infinite, integrate_semi_infinite_with, QuadValue, QuadratureResult,
};
