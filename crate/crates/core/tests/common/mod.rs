//! Independent reference values for the integration tests.
//!
//! Nothing here calls into the crate's quadrature or special functions;
//! integrals use a self-contained double-exponential rule.

#![allow(dead_code)]

use lpsub::experiments::{ExperimentConfig, ProblemKind};
use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature of `f` over `[a, b]`. Endpoint singularities of
/// logarithmic or algebraic type are handled by the variable change.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    // x = tanh(π/2 sinh u); at |u| = 6 the endpoint gap has underflowed
    let eval = |u: f64| -> f64 {
        let s = FRAC_PI_2 * u.sinh();
        let c = FRAC_PI_2 * u.cosh();
        let ch = s.cosh();
        let w = c / (ch * ch);
        let x = s.tanh();
        // distance to the nearer endpoint, computed without cancellation
        let gap = 1.0 / (s.abs().exp() * ch);
        if gap * half == 0.0 {
            return 0.0;
        }
        let t = if x > 0.0 {
            b - half * gap
        } else {
            a + half * gap
        };
        let v = f(t) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let umax = 6.0;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= umax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= umax {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-15 * cur.abs().max(1e-300) {
            return half * cur;
        }
        prev = cur;
    }
    half * prev
}

/// `tanh_sinh` on `panels` equal subintervals, for oscillatory integrands.
pub fn tanh_sinh_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| tanh_sinh(&f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// `J_n(x) = (1/π) ∫₀^π cos(nτ - x sin τ) dτ`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let panels = 2 + x.abs().ceil() as usize;
    tanh_sinh_panels(|t| (nf * t - x * t.sin()).cos(), 0.0, PI, panels) / PI
}

/// `Y_n(x) = (1/π) ∫₀^π sin(x sin τ - nτ) dτ
///          - (1/π) ∫₀^∞ (e^{nt} + (-1)^n e^{-nt}) e^{-x sinh t} dt`.
pub fn bessel_y(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let panels = 2 + x.abs().ceil() as usize;
    let a = tanh_sinh_panels(|t| (x * t.sin() - nf * t).sin(), 0.0, PI, panels);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    // beyond T the integrand is below e^{-60}
    let mut tmax = 1.0f64;
    while x * tmax.sinh() - nf * tmax < 60.0 {
        tmax += 0.5;
    }
    let b = tanh_sinh_panels(
        |t| ((nf * t).exp() + sign * (-nf * t).exp()) * (-x * t.sinh()).exp(),
        0.0,
        tmax,
        8,
    );
    (a - b) / PI
}

/// `(J_n(x), Y_n(x))` from the integral representations.
pub fn hankel1(n: u32, x: f64) -> (f64, f64) {
    (bessel_j(n, x), bessel_y(n, x))
}

/// `∫₀^{2π} log(4 sin²((t* - t)/2)) f(t) dt`, split at the singularity.
pub fn log_kernel_integral<F: Fn(f64) -> f64>(tstar: f64, f: F) -> f64 {
    tanh_sinh_panels(
        |s| (4.0 * (0.5 * s).sin().powi(2)).ln() * f(tstar + s),
        0.0,
        2.0 * PI,
        2,
    )
}

/// Single layer of the unit density on the sphere of radius `a` centred at
/// the origin, at distance `r` from the centre:
/// `(a²/2) ∫₀^π sin θ / sqrt(r² + a² - 2 a r cos θ) dθ`.
pub fn uniform_sphere_slp(a: f64, r: f64) -> f64 {
    0.5 * a
        * a
        * tanh_sinh(
            |th| th.sin() / (r * r + a * a - 2.0 * a * r * th.cos()).sqrt(),
            0.0,
            PI,
        )
}

/// Largest element of an iterator of non-negative values.
pub fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// The kite Neumann example.
pub fn kite_neumann() -> ExperimentConfig {
    ExperimentConfig::new(ProblemKind::LaplaceExtNeumann, "kite", 128)
        .with_x0(&[0.1, 0.4])
        .with_methods(&["standard", "dsl", "dsg"])
}

/// The star scattering example.
pub fn star_helmholtz() -> ExperimentConfig {
    ExperimentConfig::new(ProblemKind::HelmholtzScatter, "star", 256)
        .with_k(15.0)
        .with_x0(&[0.2, 0.8])
        .with_methods(&["standard", "pws"])
}

/// Laplace Neumann on the radius-2 sphere, source at the centre.
pub fn sphere_neumann() -> ExperimentConfig {
    ExperimentConfig::new(ProblemKind::LaplaceExtNeumann, "sphere:2", 16)
        .with_x0(&[0.0, 0.0, 0.0])
        .with_methods(&["standard", "dsl"])
}

/// Helmholtz scattering on the radius-2 sphere.
pub fn sphere_helmholtz(k: f64) -> ExperimentConfig {
    ExperimentConfig::new(ProblemKind::HelmholtzScatter, "sphere:2", 16)
        .with_k(k)
        .with_x0(&[0.1, 0.2, 0.3])
        .with_methods(&["standard", "pws"])
}

/// Eight anchors spread along the curve, offset from every PTR grid.
pub fn curve_anchors() -> Vec<f64> {
    (0..8).map(|j| 0.1 + 2.0 * PI * j as f64 / 8.0).collect()
}

mod selftest {
    use super::*;

    #[test]
    fn oracle_reproduces_closed_forms() {
        assert!((tanh_sinh(|x| x * x, 0.0, 1.0) - 1.0 / 3.0).abs() < 1e-14);
        // ∫₀¹ log x dx = -1
        assert!((tanh_sinh(|x| x.ln(), 0.0, 1.0) + 1.0).abs() < 1e-13);
        // ∫₀¹ x^{-1/2} dx = 2
        assert!((tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0) - 2.0).abs() < 1e-12);
        // tabulated J0(1), Y0(1)
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_y(0, 1.0) - 0.088_256_964_215_676_96).abs() < 1e-13);
        // uniform charge outside the sphere looks like a point charge
        assert!((uniform_sphere_slp(1.0, 3.0) - 1.0 / 3.0).abs() < 1e-14);
        assert!((uniform_sphere_slp(2.0, 1.0) - 2.0).abs() < 1e-13);
    }
}
