//! Fundamental solutions of the Laplace and Helmholtz equations and their
//! normal derivatives.
//!
//! Conventions: `G^L = -log|x-y| / 2π` (2D), `1 / (4π|x-y|)` (3D);
//! `G^H = (i/4) H0(k|x-y|)` (2D), `e^{ik|x-y|} / (4π|x-y|)` (3D).
//! The `Dlp` part is `n_y · ∇_y G(x, y)`, the `AdjointDlp` part is
//! `n_x · ∇_x G(x, y)`.

use crate::error::{Error, Result};
use crate::geometry::{Dim, Point};
use crate::specfun::bessel_jy01;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Laplace,
    Helmholtz { k: f64 },
}

impl Family {
    pub fn helmholtz(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::domain(format!(
                "wavenumber must be positive, got {k}"
            )));
        }
        Ok(Family::Helmholtz { k })
    }

    pub fn wavenumber(&self) -> Option<f64> {
        match self {
            Family::Laplace => None,
            Family::Helmholtz { k } => Some(*k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Single,
    Dlp,
    AdjointDlp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub family: Family,
    pub dim: Dim,
    pub part: Part,
}

impl KernelSpec {
    pub fn new(family: Family, dim: Dim, part: Part) -> Self {
        KernelSpec { family, dim, part }
    }
}

/// Kernel value for the selected part. `normal` is `n_y` for `Dlp` and
/// `n_x` for `AdjointDlp`; it is ignored for `Single`.
pub fn kernel_eval(
    spec: &KernelSpec,
    x: &Point,
    y: &Point,
    normal: Option<&Point>,
) -> Result<Complex64> {
    let d = x - y;
    let r = d.norm();
    if r == 0.0 {
        return Err(Error::SingularEvaluation);
    }
    let n = match (spec.part, normal) {
        (Part::Single, _) => return Ok(single(spec.family, spec.dim, r)),
        (_, Some(n)) => n,
        (_, None) => {
            return Err(Error::usage("normal required for derivative kernels"));
        }
    };
    Ok(match spec.part {
        Part::Dlp => radial_derivative(spec.family, spec.dim, r) * (d.dot(n) / r),
        Part::AdjointDlp => -radial_derivative(spec.family, spec.dim, r) * (d.dot(n) / r),
        Part::Single => unreachable!(),
    })
}

/// `G(r)`.
#[inline]
pub fn single(family: Family, dim: Dim, r: f64) -> Complex64 {
    match (family, dim) {
        (Family::Laplace, Dim::Two) => Complex64::new(-r.ln() / (2.0 * PI), 0.0),
        (Family::Laplace, Dim::Three) => Complex64::new(1.0 / (4.0 * PI * r), 0.0),
        (Family::Helmholtz { k }, Dim::Two) => {
            let b = bessel_jy01(k * r).expect("positive argument");
            Complex64::new(0.0, 0.25) * b.h0()
        }
        (Family::Helmholtz { k }, Dim::Three) => Complex64::from_polar(1.0 / (4.0 * PI * r), k * r),
    }
}

/// `-dG/dr`, so that `n_y·∇_y G = -dG/dr · (y-x)·n/r = radial_derivative · (x-y)·n / r`.
#[inline]
pub fn radial_derivative(family: Family, dim: Dim, r: f64) -> Complex64 {
    match (family, dim) {
        (Family::Laplace, Dim::Two) => Complex64::new(1.0 / (2.0 * PI * r), 0.0),
        (Family::Laplace, Dim::Three) => Complex64::new(1.0 / (4.0 * PI * r * r), 0.0),
        (Family::Helmholtz { k }, Dim::Two) => {
            // d/dr (i/4) H0(kr) = -(ik/4) H1(kr)
            let b = bessel_jy01(k * r).expect("positive argument");
            Complex64::new(0.0, 0.25 * k) * b.h1()
        }
        (Family::Helmholtz { k }, Dim::Three) => {
            // -(d/dr) e^{ikr}/(4πr) = e^{ikr} (1 - ikr) / (4πr²)
            Complex64::from_polar(1.0 / (4.0 * PI * r * r), k * r) * Complex64::new(1.0, -k * r)
        }
    }
}

/// `G(x, y)` and `∂_{n_y} G(x, y)` together, sharing one Bessel evaluation.
#[inline]
pub fn single_and_dlp(
    family: Family,
    dim: Dim,
    x: &Point,
    y: &Point,
    ny: &Point,
) -> (Complex64, Complex64) {
    let d = x - y;
    let r = d.norm();
    let proj = d.dot(ny) / r;
    match (family, dim) {
        (Family::Helmholtz { k }, Dim::Two) => {
            let b = bessel_jy01(k * r).expect("positive argument");
            let g = Complex64::new(0.0, 0.25) * b.h0();
            let dg = Complex64::new(0.0, 0.25 * k) * b.h1() * proj;
            (g, dg)
        }
        _ => (
            single(family, dim, r),
            radial_derivative(family, dim, r) * proj,
        ),
    }
}

/// Limit of the 2D Laplace double-layer kernel `∂_{n_y} G^L(y(s), y(t))` as
/// `t → s` on a curve with signed curvature `κ`: `-κ / (4π)`.
///
/// The Helmholtz kernels share this limit since `G^H - G^L` is smooth
/// enough that its normal derivative vanishes on the diagonal.
pub fn dlp_diagonal_2d(curvature: f64) -> f64 {
    -curvature / (4.0 * PI)
}
