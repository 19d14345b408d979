//! Special functions used by the kernels and the spherical quadratures.

mod bessel;
mod gauss;
mod harmonics;

pub use bessel::{bessel_jy01, hankel1, BesselJY};
pub use gauss::{gauss_legendre, GLRule};
pub use harmonics::{sh_index, sph_harm, sph_harm_all};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
