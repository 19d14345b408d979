//! Randomised invariants.

use lpsub::experiments::log_space;
use lpsub::geometry::{nearest_boundary_point, offset_point, Boundary, Curve2D, Dim, Point, Side};
use lpsub::kernels::{kernel_eval, single, Family, KernelSpec, Part};
use lpsub::specfun::{bessel_jy01, gauss_legendre, sph_harm_all};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn point(dim: Dim, c: [f64; 3]) -> Point {
    match dim {
        Dim::Two => Point::new(c[0], c[1], 0.0),
        Dim::Three => Point::new(c[0], c[1], c[2]),
    }
}

fn family(helm: bool, k: f64) -> Family {
    if helm {
        Family::Helmholtz { k }
    } else {
        Family::Laplace
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_layer_is_symmetric(
        three in any::<bool>(), helm in any::<bool>(), k in 0.1f64..30.0,
        a in prop::array::uniform3(-2.0f64..2.0), b in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let dim = if three { Dim::Three } else { Dim::Two };
        let (x, y) = (point(dim, a), point(dim, b));
        prop_assume!((x - y).norm() > 1e-3);
        let spec = KernelSpec::new(family(helm, k), dim, Part::Single);
        let g1 = kernel_eval(&spec, &x, &y, None).unwrap();
        let g2 = kernel_eval(&spec, &y, &x, None).unwrap();
        prop_assert!((g1 - g2).norm() <= 1e-14 * g1.norm().max(1.0));
    }

    #[test]
    fn adjoint_kernel_is_the_transpose(
        three in any::<bool>(), helm in any::<bool>(), k in 0.1f64..30.0,
        a in prop::array::uniform3(-2.0f64..2.0), b in prop::array::uniform3(-2.0f64..2.0),
        c in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let dim = if three { Dim::Three } else { Dim::Two };
        let (x, y, n) = (point(dim, a), point(dim, b), point(dim, c));
        prop_assume!((x - y).norm() > 1e-3 && n.norm() > 1e-2);
        let n = n.normalize();
        let f = family(helm, k);
        let d = kernel_eval(&KernelSpec::new(f, dim, Part::Dlp), &x, &y, Some(&n)).unwrap();
        let t = kernel_eval(&KernelSpec::new(f, dim, Part::AdjointDlp), &y, &x, Some(&n)).unwrap();
        prop_assert!((d - t).norm() <= 1e-14 * d.norm().max(1.0));
    }

    #[test]
    fn helmholtz_tends_to_laplace_at_small_k(r in 0.05f64..3.0) {
        // 2D kernels differ by a constant as k → 0; 3D ones converge
        let k = 1e-6;
        let g3 = single(Family::Helmholtz { k }, Dim::Three, r) - single(Family::Laplace, Dim::Three, r);
        prop_assert!(g3.norm() < 1e-6);
        let gamma = 0.577_215_664_901_532_9;
        let shift = Complex::new(-((0.5 * k).ln() + gamma) / TAU, 0.25);
        let g2 = single(Family::Helmholtz { k }, Dim::Two, r) - single(Family::Laplace, Dim::Two, r);
        prop_assert!((g2 - shift).norm() < 1e-9);
    }

    #[test]
    fn wronskian(x in 1e-3f64..300.0) {
        let b = bessel_jy01(x).unwrap();
        let want = 2.0 / (PI * x);
        prop_assert!(((b.j1 * b.y0 - b.j0 * b.y1) - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn gauss_legendre_integrates_random_polynomials(
        n in 1usize..40, coeffs in prop::collection::vec(-1.0f64..1.0, 80),
    ) {
        let deg = 2 * n - 1;
        let c = &coeffs[..=deg.min(79)];
        let rule = gauss_legendre(n).unwrap();
        let p = |x: f64| c.iter().rev().fold(0.0, |acc, a| acc * x + a);
        let exact: f64 = c
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .map(|(i, a)| 2.0 * a / (i as f64 + 1.0))
            .sum();
        prop_assert!((rule.integrate(-1.0, 1.0, p) - exact).abs() < 1e-13);
    }

    #[test]
    fn addition_theorem(theta in 0.0f64..PI, phi in -PI..PI) {
        // Σ_m |Y_nm|² = (2n+1)/(4π)
        let y = sph_harm_all(20, theta, phi);
        let mut i = 0;
        for n in 0..20 {
            let s: f64 = (0..2 * n + 1).map(|j| y[i + j].norm_sqr()).sum();
            prop_assert!((s - (2 * n + 1) as f64 / (4.0 * PI)).abs() < 1e-12);
            i += 2 * n + 1;
        }
    }
}

type Complex = lpsub::Complex64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closest_point_round_trip(
        star in any::<bool>(), t in 0.0f64..TAU, ell in 1e-4f64..0.05, inside in any::<bool>(),
    ) {
        let curve = if star { Curve2D::star() } else { Curve2D::kite() };
        let b = Boundary::Curve(curve.clone());
        let s = curve.sample(t);
        let side = if inside { Side::Interior } else { Side::Exterior };
        let x = offset_point(&s, ell, side).unwrap();
        let p = nearest_boundary_point(&b, &x).unwrap();
        prop_assert_eq!(p.side, side);
        prop_assert!(!p.unconverged);
        prop_assert!((p.distance - ell).abs() < 1e-10, "{} vs {}", p.distance, ell);
        prop_assert!((p.sample.point - s.point).norm() < 1e-8);
        prop_assert_eq!(b.contains(&x), inside);
    }

    #[test]
    fn sphere_projection_round_trip(
        dir in prop::array::uniform3(-1.0f64..1.0), ell in 1e-4f64..0.5, inside in any::<bool>(),
    ) {
        let u = Point::from(dir);
        prop_assume!(u.norm() > 1e-2);
        let u = u.normalize();
        let b = lpsub::geometry::parse_shape("sphere:2").unwrap();
        let r = if inside { 2.0 - ell } else { 2.0 + ell };
        let p = nearest_boundary_point(&b, &(r * u)).unwrap();
        prop_assert!((p.distance - ell).abs() < 1e-12);
        prop_assert!((p.sample.point - 2.0 * u).norm() < 1e-12);
        prop_assert!((p.sample.normal - u).norm() < 1e-12);
        prop_assert_eq!(p.side == Side::Interior, inside);
    }

    #[test]
    fn log_space_is_increasing(lo in 1e-8f64..1.0, span in 1.0f64..1e4, count in 2usize..200) {
        let v = log_space(lo, lo * span, count).unwrap();
        prop_assert_eq!(v.len(), count);
        prop_assert!((v[0] - lo).abs() <= 1e-14 * lo);
        prop_assert!((v[count - 1] - lo * span).abs() <= 1e-12 * lo * span);
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0]));
    }
}
