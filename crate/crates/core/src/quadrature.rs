//! Quadrature rules on closed curves and on the sphere.
//!
//! - [`PtrGrid`]: periodic trapezoid rule with nodes `t_j = 2πj/N`.
//! - [`KressWeights`] and [`LogKernel::split`]: product quadrature for
//!   kernels with a `log(4 sin²((t* - t)/2))` singularity.
//! - [`SphereGrid`]: Gauss–Legendre in the polar angle mapped to `(0, π)`
//!   times a `2N`-point trapezoid rule in azimuth, or the classic product
//!   Gaussian rule with Gauss–Legendre in `cos s`.
//! - [`three_step_eval`]: the sphere rule applied in a frame where the
//!   target's nearest boundary point is the north pole.

use crate::error::{Error, Result};
use crate::geometry::{rotate_to_pole, BoundarySample, Curve2D, Param, Point, Surface3D};
use crate::kernels::dlp_diagonal_2d;
use crate::specfun::{bessel_jy01, gauss_legendre, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// One quadrature node on a boundary. `weight` already contains the
/// Jacobian, so `Σ weight · f(point)` approximates `∫ f dσ`.
#[derive(Clone, Debug)]
pub struct QuadNode {
    pub param: Param,
    pub point: Point,
    pub normal: Point,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PtrGrid {
    pub n: usize,
}

impl PtrGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage(format!("PTR needs at least 2 nodes, got {n}")));
        }
        Ok(PtrGrid { n })
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    pub fn weight(&self) -> f64 {
        TAU / self.n as f64
    }
}

/// `(2π/N) Σ f(t_j)` for values sampled at the PTR nodes.
pub fn ptr_integrate(values: &[Complex64]) -> Result<Complex64> {
    if values.len() < 2 {
        return Err(Error::usage("PTR integration needs at least 2 samples"));
    }
    let sum: Complex64 = values.iter().sum();
    Ok(sum * (TAU / values.len() as f64))
}

/// Quadrature nodes of a curve with arc-length weights `2π/N |y'(t_j)|`.
pub fn curve_nodes(curve: &Curve2D, n: usize) -> Vec<QuadNode> {
    let grid = PtrGrid { n };
    (0..n)
        .map(|j| {
            let s = curve.sample(grid.node(j));
            QuadNode {
                param: s.param,
                point: s.point,
                normal: s.normal,
                weight: grid.weight() * s.jacobian,
            }
        })
        .collect()
}

/// Kress weights `R_k(t*)` for `∫₀^{2π} log(4 sin²((t*-t)/2)) f(t) dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct KressWeights {
    pub tstar: f64,
    pub weights: Vec<f64>,
}

/// `R(Δ)` evaluated at `Δ = t* - t_k`.
fn kress_weight(n: usize, delta: f64) -> f64 {
    let half = n / 2;
    let nf = n as f64;
    let mut s = 0.0;
    for j in 1..half {
        s += (j as f64 * delta).cos() / j as f64;
    }
    -4.0 * PI / nf * s - 4.0 * PI / (nf * nf) * (half as f64 * delta).cos()
}

impl KressWeights {
    pub fn new(n: usize, tstar: f64) -> Result<Self> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::usage(format!(
                "Kress weights need an even N >= 4, got {n}"
            )));
        }
        let grid = PtrGrid { n };
        let weights = (0..n)
            .map(|k| kress_weight(n, tstar - grid.node(k)))
            .collect();
        Ok(KressWeights { tstar, weights })
    }

    /// Weights for a target on node `i`, which only depend on `(i - k) mod N`;
    /// entry `d` holds `R` for offset `d`.
    pub fn offsets(n: usize) -> Result<Vec<f64>> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::usage(format!(
                "Kress weights need an even N >= 4, got {n}"
            )));
        }
        let grid = PtrGrid { n };
        Ok((0..n).map(|d| kress_weight(n, grid.node(d))).collect())
    }
}

/// Local geometry of a curve point as needed by the split kernels.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub t: f64,
    pub point: Point,
    pub normal: Point,
    pub speed: f64,
    pub curvature: f64,
}

impl CurvePoint {
    pub fn from_sample(s: &BoundarySample) -> Self {
        CurvePoint {
            t: s.t().expect("curve sample"),
            point: s.point,
            normal: s.normal,
            speed: s.jacobian,
            curvature: s.curvature.unwrap_or(0.0),
        }
    }

    pub fn at(curve: &Curve2D, t: f64) -> Self {
        Self::from_sample(&curve.sample(t))
    }
}

/// Kernels with a logarithmic diagonal singularity on a curve, written as
/// `K(t*, t) = K1 log(4 sin²((t* - t)/2)) + K2` where `K` includes `|y'(t)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogKernel {
    LaplaceSingle,
    LaplaceDlp,
    HelmholtzSingle {
        k: f64,
    },
    HelmholtzDlp {
        k: f64,
    },
    /// `∂_{n_y} G^H - ik G^H`.
    HelmholtzCombined {
        k: f64,
    },
}

/// Below this parameter separation the diagonal limits are used.
const DIAGONAL_GUARD: f64 = 1e-9;

impl LogKernel {
    /// `(K1, K2)` for target `x* = y(t*)` and source `y(t)`.
    pub fn split(&self, target: &CurvePoint, source: &CurvePoint) -> (Complex64, Complex64) {
        let delta = (target.t - source.t).rem_euclid(TAU);
        let on_diagonal = delta < DIAGONAL_GUARD || TAU - delta < DIAGONAL_GUARD;
        let c = |re: f64| Complex64::new(re, 0.0);
        let jac = source.speed;
        if on_diagonal {
            return match *self {
                LogKernel::LaplaceSingle => (c(-jac / (4.0 * PI)), c(-jac.ln() * jac / (2.0 * PI))),
                LogKernel::LaplaceDlp | LogKernel::HelmholtzDlp { .. } => {
                    (c(0.0), c(dlp_diagonal_2d(source.curvature) * jac))
                }
                LogKernel::HelmholtzSingle { k } => {
                    (c(-jac / (4.0 * PI)), helmholtz_single_diag(k, jac))
                }
                LogKernel::HelmholtzCombined { k } => {
                    let s1 = c(-jac / (4.0 * PI));
                    let s2 = helmholtz_single_diag(k, jac);
                    let ik = Complex64::new(0.0, k);
                    (
                        -ik * s1,
                        c(dlp_diagonal_2d(source.curvature) * jac) - ik * s2,
                    )
                }
            };
        }
        let d = target.point - source.point;
        let r = d.norm();
        let proj = d.dot(&source.normal) / r;
        let logsin = (4.0 * (0.5 * delta).sin().powi(2)).ln();
        match *self {
            LogKernel::LaplaceSingle => {
                let k1 = -jac / (4.0 * PI);
                let full = -r.ln() / (2.0 * PI) * jac;
                (c(k1), c(full - k1 * logsin))
            }
            LogKernel::LaplaceDlp => (c(0.0), c(proj / (2.0 * PI * r) * jac)),
            LogKernel::HelmholtzSingle { k }
            | LogKernel::HelmholtzDlp { k }
            | LogKernel::HelmholtzCombined { k } => {
                let b = bessel_jy01(k * r).expect("positive argument");
                let s_full = Complex64::new(0.0, 0.25) * b.h0() * jac;
                let s1 = c(-b.j0 * jac / (4.0 * PI));
                let d_full = Complex64::new(0.0, 0.25 * k) * b.h1() * proj * jac;
                let d1 = c(-k * b.j1 * proj * jac / (4.0 * PI));
                let (k1, full) = match *self {
                    LogKernel::HelmholtzSingle { .. } => (s1, s_full),
                    LogKernel::HelmholtzDlp { .. } => (d1, d_full),
                    _ => {
                        let ik = Complex64::new(0.0, k);
                        (d1 - ik * s1, d_full - ik * s_full)
                    }
                };
                (k1, full - k1 * logsin)
            }
        }
    }

    /// Full kernel value (off the diagonal).
    pub fn value(&self, target: &CurvePoint, source: &CurvePoint) -> Complex64 {
        let delta = target.t - source.t;
        let (k1, k2) = self.split(target, source);
        k1 * (4.0 * (0.5 * delta).sin().powi(2)).ln() + k2
    }
}

fn helmholtz_single_diag(k: f64, jac: f64) -> Complex64 {
    Complex64::new(-((0.5 * k * jac).ln() + EULER_GAMMA) / (2.0 * PI), 0.25) * jac
}

/// `(K1, K2)` of the combined-field kernel `(∂_{n_y} G^H - ik G^H)|y'(t)|`
/// at `(t, t*)`.
pub fn kress_split_helmholtz(
    curve: &Curve2D,
    k: f64,
    t: f64,
    tstar: f64,
) -> Result<(Complex64, Complex64)> {
    if !(k > 0.0) {
        return Err(Error::domain(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let target = CurvePoint::at(curve, tstar);
    let source = CurvePoint::at(curve, t);
    Ok(LogKernel::HelmholtzCombined { k }.split(&target, &source))
}

/// Kress product quadrature of `∫₀^{2π} K(t*, t) f(t) dt` where `f` is
/// sampled on the `N` PTR nodes.
pub fn kress_integrate(
    curve: &Curve2D,
    kernel: LogKernel,
    tstar: f64,
    values: &[Complex64],
) -> Result<Complex64> {
    let n = values.len();
    let weights = KressWeights::new(n, tstar)?;
    let grid = PtrGrid { n };
    let target = CurvePoint::at(curve, tstar);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, f) in values.iter().enumerate() {
        let source = CurvePoint::at(curve, grid.node(k));
        let (k1, k2) = kernel.split(&target, &source);
        acc += (weights.weights[k] * k1 + grid.weight() * k2) * f;
    }
    Ok(acc)
}

/// How the Gauss–Legendre nodes are placed in the polar direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarRule {
    /// `s_i = π(z_i + 1)/2`: the `sin s` factor is sampled, which damps a
    /// kernel peak at the pole.
    Angle,
    /// `s_i = arccos z_i`: exact for products of spherical harmonics of
    /// total degree `< 2N`.
    Cosine,
}

/// Product rule on the sphere parameter domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub n: usize,
    pub rule: PolarRule,
    pub polar: Vec<f64>,
    /// Polar weight times the azimuthal weight `π/N`, including `sin s`:
    /// `π²/(2N) w_i sin(s_i)` for [`PolarRule::Angle`], `π/N w_i` for
    /// [`PolarRule::Cosine`].
    pub polar_weights: Vec<f64>,
    /// Azimuthal nodes `t_j = -π + πj/N`, `j = 0..2N`.
    pub azimuth: Vec<f64>,
}

impl SphereGrid {
    /// Angle-mapped rule used by the three-step method.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_rule(n, PolarRule::Angle)
    }

    /// Classic product Gaussian rule.
    pub fn product_gauss(n: usize) -> Result<Self> {
        Self::with_rule(n, PolarRule::Cosine)
    }

    pub fn with_rule(n: usize, rule: PolarRule) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage(format!("sphere grid needs N >= 2, got {n}")));
        }
        let gl = gauss_legendre(n)?;
        let nf = n as f64;
        let (polar, polar_weights): (Vec<f64>, Vec<f64>) = match rule {
            PolarRule::Angle => gl
                .nodes
                .iter()
                .zip(&gl.weights)
                .map(|(z, w)| {
                    let s = PI * (z + 1.0) / 2.0;
                    (s, PI * PI / (2.0 * nf) * w * s.sin())
                })
                .unzip(),
            PolarRule::Cosine => gl
                .nodes
                .iter()
                .zip(&gl.weights)
                .rev()
                .map(|(z, w)| (z.acos(), PI / nf * w))
                .unzip(),
        };
        let azimuth = (0..2 * n).map(|j| -PI + PI * j as f64 / nf).collect();
        Ok(SphereGrid {
            n,
            rule,
            polar,
            polar_weights,
            azimuth,
        })
    }

    pub fn len(&self) -> usize {
        2 * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes on `surface` in its own parameterisation, row-major in `(s, t)`.
    pub fn nodes(&self, surface: &Surface3D) -> Vec<QuadNode> {
        let mut out = Vec::with_capacity(self.len());
        for (s, pw) in self.polar.iter().zip(&self.polar_weights) {
            for t in &self.azimuth {
                let smp = surface.sample(*s, *t);
                out.push(QuadNode {
                    param: smp.param,
                    point: smp.point,
                    normal: smp.normal,
                    weight: pw * smp.jacobian,
                });
            }
        }
        out
    }
}

/// `Σ_i Σ_j π²/(2N) w_i sin(s_i) J(s_i, t_j) f(s_i, t_j)`, values row-major.
pub fn sphere_integrate(
    grid: &SphereGrid,
    surface: &Surface3D,
    values: &[Complex64],
) -> Result<Complex64> {
    if values.len() != grid.len() {
        return Err(Error::usage(format!(
            "expected {} values on the sphere grid, got {}",
            grid.len(),
            values.len()
        )));
    }
    Ok(grid
        .nodes(surface)
        .iter()
        .zip(values)
        .map(|(q, v)| q.weight * v)
        .sum())
}

/// Sphere nodes in the frame where `xstar` is the north pole.
pub fn rotated_nodes(
    surface: &Surface3D,
    grid: &SphereGrid,
    xstar: &BoundarySample,
) -> Result<Vec<QuadNode>> {
    if !surface.is_sphere() {
        return Err(Error::UnsupportedSurface(
            "the rotated rule needs a sphere".into(),
        ));
    }
    let frame = rotate_to_pole(surface, xstar)?;
    let jac = frame.radius * frame.radius;
    let mut out = Vec::with_capacity(grid.len());
    for (s, pw) in grid.polar.iter().zip(&grid.polar_weights) {
        for t in &grid.azimuth {
            let normal = frame.unit(*s, *t);
            out.push(QuadNode {
                param: Param::Surface(*s, *t),
                point: frame.center + frame.radius * normal,
                normal,
                weight: pw * jac,
            });
        }
    }
    Ok(out)
}

/// Integrates `integrand` over the sphere with the rotated rule: `x*` at the
/// pole, trapezoid in azimuth, mapped Gauss–Legendre in the polar angle.
pub fn three_step_eval<F>(
    surface: &Surface3D,
    grid: &SphereGrid,
    xstar: &BoundarySample,
    integrand: F,
) -> Result<Complex64>
where
    F: Fn(&QuadNode) -> Complex64,
{
    Ok(rotated_nodes(surface, grid, xstar)?
        .iter()
        .map(|q| q.weight * integrand(q))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sh_index, sph_harm_all};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ptr_basics() {
        let g = PtrGrid::new(8).unwrap();
        let ones = vec![c(1.0); 8];
        assert_abs_diff_eq!(ptr_integrate(&ones).unwrap().re, TAU, epsilon = 1e-15);
        let cos: Vec<_> = g.nodes().iter().map(|t| c(t.cos())).collect();
        assert!(ptr_integrate(&cos).unwrap().norm() < 1e-15);
        assert!(ptr_integrate(&[]).is_err());
        assert!(PtrGrid::new(1).is_err());
    }

    #[test]
    fn ptr_exact_on_modes() {
        let n = 16;
        let g = PtrGrid::new(n).unwrap();
        for m in 1..n as i32 {
            let v: Vec<_> = g
                .nodes()
                .iter()
                .map(|t| Complex64::from_polar(1.0, m as f64 * t))
                .collect();
            assert!(ptr_integrate(&v).unwrap().norm() < 1e-13, "m={m}");
        }
    }

    #[test]
    fn kress_weights_shape() {
        assert!(KressWeights::new(7, 0.0).is_err());
        assert!(KressWeights::new(2, 0.0).is_err());
        let n = 32;
        let g = PtrGrid { n };
        let w = KressWeights::new(n, 0.37).unwrap();
        assert_abs_diff_eq!(w.weights.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        // identical weight on the node coinciding with the target, any k
        let diag: Vec<f64> = (0..n)
            .map(|k| KressWeights::new(n, g.node(k)).unwrap().weights[k])
            .collect();
        for d in &diag {
            assert_abs_diff_eq!(*d, diag[0], epsilon = 1e-13);
        }
    }

    #[test]
    fn kress_offsets_match_direct() {
        let n = 16;
        let g = PtrGrid { n };
        let off = KressWeights::offsets(n).unwrap();
        for i in 0..n {
            let w = KressWeights::new(n, g.node(i)).unwrap();
            for k in 0..n {
                let d = (i + n - k) % n;
                assert_abs_diff_eq!(off[d], w.weights[k], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn kress_exact_for_trig_modes() {
        // ∫ log(4 sin²((t*-t)/2)) cos(mt) dt = -(2π/m) cos(m t*)
        let n = 16;
        let g = PtrGrid { n };
        let tstar = 0.81;
        let w = KressWeights::new(n, tstar).unwrap();
        for m in 1..=n / 2 {
            let v: f64 = (0..n)
                .map(|k| w.weights[k] * (m as f64 * g.node(k)).cos())
                .sum();
            let exact = -TAU / m as f64 * (m as f64 * tstar).cos();
            assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn split_reconstruction_off_diagonal() {
        let star = Curve2D::star();
        let k = 15.0;
        let tstar = 1.3;
        let target = CurvePoint::at(&star, tstar);
        for dt in [1e-3, 1e-2, 0.3, 1.0, 2.5, PI] {
            for sign in [-1.0, 1.0] {
                let t = tstar + sign * dt;
                let source = CurvePoint::at(&star, t);
                let (k1, k2) = kress_split_helmholtz(&star, k, t, tstar).unwrap();
                let recon = k1 * (4.0 * (0.5 * (tstar - t)).sin().powi(2)).ln() + k2;
                let y = source.point;
                let (g, dg) = crate::kernels::single_and_dlp(
                    crate::kernels::Family::Helmholtz { k },
                    crate::geometry::Dim::Two,
                    &target.point,
                    &y,
                    &source.normal,
                );
                let full = (dg - Complex64::new(0.0, k) * g) * source.speed;
                assert!((recon - full).norm() <= 1e-12 * full.norm(), "dt={dt}");
            }
        }
    }

    #[test]
    fn split_continuous_at_diagonal() {
        let kite = Curve2D::kite();
        for kernel in [
            LogKernel::LaplaceSingle,
            LogKernel::LaplaceDlp,
            LogKernel::HelmholtzSingle { k: 3.0 },
            LogKernel::HelmholtzDlp { k: 3.0 },
            LogKernel::HelmholtzCombined { k: 1.0 },
        ] {
            let tstar = 2.2;
            let target = CurvePoint::at(&kite, tstar);
            let (a1, a2) = kernel.split(&target, &target);
            for h in [-1e-4, 1e-4] {
                let (b1, b2) = kernel.split(&target, &CurvePoint::at(&kite, tstar + h));
                assert!((a1 - b1).norm() < 1e-3, "{kernel:?} K1");
                assert!((a2 - b2).norm() < 1e-3, "{kernel:?} K2");
            }
        }
    }

    #[test]
    fn split_is_lipschitz_at_diagonal_for_large_k() {
        let star = Curve2D::star();
        let kernel = LogKernel::HelmholtzCombined { k: 15.0 };
        let target = CurvePoint::at(&star, 0.4);
        let (_, a2) = kernel.split(&target, &target);
        let jump = |h: f64| (kernel.split(&target, &CurvePoint::at(&star, 0.4 + h)).1 - a2).norm();
        let ratio = jump(1e-4) / jump(1e-5);
        assert!(ratio > 8.0 && ratio < 12.0, "ratio {ratio}");
    }

    #[test]
    fn sphere_grid_integrals() {
        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let g = SphereGrid::new(16).unwrap();
        let ones = vec![c(1.0); g.len()];
        assert_abs_diff_eq!(
            sphere_integrate(&g, &sph, &ones).unwrap().re,
            16.0 * PI,
            epsilon = 1e-12
        );

        let unit = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        let nodes = g.nodes(&unit);
        let y10: Vec<_> = nodes
            .iter()
            .map(|q| match q.param {
                Param::Surface(s, t) => sph_harm_all(2, s, t)[sh_index(1, 0)].norm_sqr().into(),
                _ => unreachable!(),
            })
            .collect();
        assert_abs_diff_eq!(
            sphere_integrate(&g, &unit, &y10).unwrap().re,
            1.0,
            epsilon = 1e-12
        );

        let z2: Vec<_> = nodes.iter().map(|q| c(q.point.z * q.point.z)).collect();
        assert_abs_diff_eq!(
            sphere_integrate(&g, &unit, &z2).unwrap().re,
            4.0 * PI / 3.0,
            epsilon = 1e-12
        );
        assert!(sphere_integrate(&g, &unit, &z2[1..]).is_err());
    }

    #[test]
    fn product_gauss_gram_identity() {
        let unit = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        let order = 16;
        let g = SphereGrid::product_gauss(order).unwrap();
        let nodes = g.nodes(&unit);
        let ys: Vec<Vec<Complex64>> = nodes
            .iter()
            .map(|q| match q.param {
                Param::Surface(s, t) => sph_harm_all(order, s, t),
                _ => unreachable!(),
            })
            .collect();
        let nb = order * order;
        for a in 0..nb {
            for b in a..nb {
                let v: Complex64 = nodes
                    .iter()
                    .zip(&ys)
                    .map(|(q, y)| q.weight * y[a].conj() * y[b])
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((v - expect).norm() < 1e-12, "({a},{b}) {v}");
            }
        }
        let ones = vec![c(1.0); g.len()];
        assert_abs_diff_eq!(
            sphere_integrate(&g, &unit, &ones).unwrap().re,
            4.0 * PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn three_step_rejects_ellipsoid() {
        let e = Surface3D::ellipsoid(Point::zeros(), [1.0, 2.0, 3.0]).unwrap();
        let g = SphereGrid::new(4).unwrap();
        let s = e.sample(0.3, 0.2);
        assert!(matches!(
            three_step_eval(&e, &g, &s, |_| c(1.0)),
            Err(Error::UnsupportedSurface(_))
        ));
    }
}
