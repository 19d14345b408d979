//! Layer potentials for Laplace and Helmholtz problems in two and three
//! dimensions, with density-subtraction representations that stay accurate
//! when the evaluation point approaches the boundary.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: parameterised curves and surfaces, offsets along the
//!   normal and closest-point projection.
//! - [`specfun`]: Gauss–Legendre rules, Bessel/Hankel functions of order 0
//!   and 1, orthonormal spherical harmonics.
//! - [`kernels`]: fundamental solutions and their normal derivatives.
//! - [`quadrature`]: periodic trapezoid rule, Kress logarithmic quadrature,
//!   product Gaussian rules on the sphere and the rotated three-step rule.
//! - [`bie`]: Nyström and Galerkin solvers for the boundary densities.
//! - [`potentials`]: standard and subtracted layer-potential evaluation.
//! - [`identities`]: numerical checks of the layer potential identity.
//! - [`experiments`]: error fields, normal scans, wavenumber sweeps and
//!   identity tables written as CSV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bie;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod identities;
pub mod kernels;
pub mod linalg;
pub mod potentials;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::Point;
pub use num_complex::Complex64;
