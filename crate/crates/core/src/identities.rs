//! Numerical checks of the layer-potential identity
//! `∫ ∂_{n_y}G(x,y) u(y) - G(x,y) ∂_{n_y}u(y) dσ_y = -u(x), -u(x)/2, 0`
//! for `x` inside, on, or outside the boundary, where `u` solves the PDE of
//! the kernel in the interior.

use crate::error::{Error, Result};
use crate::geometry::{nearest_boundary_point, Boundary, BoundarySample, Dim, Param, Point, Side};
use crate::kernels::{single_and_dlp, Family};
use crate::potentials::InteriorSolution;
use crate::quadrature::{
    curve_nodes, rotated_nodes, CurvePoint, KressWeights, LogKernel, PtrGrid, SphereGrid,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

impl Region {
    /// The factor `c` in `lhs = c·u(x)`.
    pub fn expected_factor(self) -> f64 {
        match self {
            Region::Interior => -1.0,
            Region::Boundary => -0.5,
            Region::Exterior => 0.0,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Interior => "interior",
            Region::Boundary => "boundary",
            Region::Exterior => "exterior",
        })
    }
}

/// Where the identity is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Point(Point),
    Boundary(Param),
}

#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub label: String,
    pub solution: InteriorSolution,
    pub region: Region,
    pub target: Target,
}

impl IdentityCase {
    /// Checks the case against `boundary`: poles at least 0.1 outside,
    /// unit plane-wave direction, and a target lying in `region`.
    pub fn new(
        label: impl Into<String>,
        solution: InteriorSolution,
        region: Region,
        target: Target,
        boundary: &Boundary,
    ) -> Result<Self> {
        match &solution {
            InteriorSolution::GreenLaplace { pole, .. }
            | InteriorSolution::GreenHelmholtz { pole, .. } => {
                let p = nearest_boundary_point(boundary, pole)?;
                if p.side != Side::Exterior || p.distance <= 0.1 {
                    return Err(Error::domain(
                        "Green pole must lie outside, more than 0.1 from the boundary",
                    ));
                }
            }
            InteriorSolution::PlaneWave { dir, .. } if (dir.norm() - 1.0).abs() > 1e-12 => {
                return Err(Error::domain("plane-wave direction must be a unit vector"));
            }
            _ => {}
        }
        match (region, target) {
            (Region::Boundary, Target::Boundary(_)) => {}
            (Region::Boundary, Target::Point(_)) | (_, Target::Boundary(_)) => {
                return Err(Error::usage("boundary region goes with a boundary target"));
            }
            (r, Target::Point(x)) => {
                let side = nearest_boundary_point(boundary, &x)?.side;
                let want = if r == Region::Interior {
                    Side::Interior
                } else {
                    Side::Exterior
                };
                if side != want {
                    return Err(Error::domain(format!("target is not in the {r} region")));
                }
            }
        }
        Ok(IdentityCase {
            label: label.into(),
            solution,
            region,
            target,
        })
    }
}

/// Left-hand side of the identity with `n` nodes (PTR size in 2D, sphere
/// order in 3D).
pub fn identity_lhs(case: &IdentityCase, boundary: &Boundary, n: usize) -> Result<Complex64> {
    let fam = case.solution.family();
    let dim = boundary.dim();
    let integrand = |x: &Point, y: &Point, ny: &Point| {
        let (g, dg) = single_and_dlp(fam, dim, x, y, ny);
        let (u, grad) = case.solution.eval(dim, y);
        let du = grad[0] * ny.x + grad[1] * ny.y + grad[2] * ny.z;
        dg * u - g * du
    };
    match (boundary, case.target) {
        (Boundary::Curve(c), Target::Point(x)) => {
            PtrGrid::new(n)?;
            Ok(curve_nodes(c, n)
                .iter()
                .map(|q| integrand(&x, &q.point, &q.normal) * q.weight)
                .sum())
        }
        (Boundary::Curve(c), Target::Boundary(p)) => {
            let Param::Curve(tstar) = p else {
                return Err(Error::usage("curve target needs a curve parameter"));
            };
            let (single, dlp) = match fam {
                Family::Laplace => (LogKernel::LaplaceSingle, LogKernel::LaplaceDlp),
                Family::Helmholtz { k } => (
                    LogKernel::HelmholtzSingle { k },
                    LogKernel::HelmholtzDlp { k },
                ),
            };
            let w = KressWeights::new(n, tstar)?;
            let grid = PtrGrid { n };
            let target = CurvePoint::at(c, tstar);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, rj) in w.weights.iter().enumerate() {
                let src = CurvePoint::at(c, grid.node(j));
                let (u, grad) = case.solution.eval(dim, &src.point);
                let du = grad[0] * src.normal.x + grad[1] * src.normal.y;
                let (s1, s2) = single.split(&target, &src);
                let (d1, d2) = dlp.split(&target, &src);
                acc += rj * (d1 * u - s1 * du) + grid.weight() * (d2 * u - s2 * du);
            }
            Ok(acc)
        }
        (Boundary::Surface(s), target) => {
            let (x, xstar) = match target {
                Target::Point(x) => (x, nearest_boundary_point(boundary, &x)?.sample),
                Target::Boundary(p) => {
                    let b = boundary.sample(p)?;
                    (b.point, b)
                }
            };
            let grid = SphereGrid::new(n)?;
            Ok(rotated_nodes(s, &grid, &xstar)?
                .iter()
                .map(|q| integrand(&x, &q.point, &q.normal) * q.weight)
                .sum())
        }
    }
}

fn target_point(case: &IdentityCase, boundary: &Boundary) -> Result<Point> {
    match case.target {
        Target::Point(x) => Ok(x),
        Target::Boundary(p) => Ok(boundary.sample(p)?.point),
    }
}

/// `|lhs - c·u(x)|` for an arbitrary factor `c`.
pub fn identity_residual_with(
    case: &IdentityCase,
    boundary: &Boundary,
    n: usize,
    factor: f64,
) -> Result<f64> {
    let lhs = identity_lhs(case, boundary, n)?;
    let x = target_point(case, boundary)?;
    Ok((lhs - factor * case.solution.value(boundary.dim(), &x)).norm())
}

/// `|lhs - expected|` with the expected factor of the case's region.
pub fn identity_residual(case: &IdentityCase, boundary: &Boundary, n: usize) -> Result<f64> {
    identity_residual_with(case, boundary, n, case.region.expected_factor())
}

/// Names of the built-in cases.
pub const BUILTIN_LABELS: [&str; 5] = [
    "constant",
    "linear",
    "green-laplace",
    "plane-wave",
    "green-helmholtz",
];

/// The built-in interior solutions for `boundary`. Green poles sit at twice
/// the bounding radius, so at least one radius from the boundary; `k` is used by the wave solutions.
pub fn builtin_solutions(boundary: &Boundary, k: f64) -> Result<Vec<(String, InteriorSolution)>> {
    Family::helmholtz(k)?;
    let (center, reach) = match boundary {
        Boundary::Curve(c) => {
            let (lo, hi) = c.bounding_box();
            (0.5 * (lo + hi), 0.5 * (hi - lo).norm())
        }
        Boundary::Surface(s) => (s.center(), s.axes().into_iter().fold(0.0, f64::max)),
    };
    let (a, dir, pole) = match boundary.dim() {
        Dim::Two => (
            Point::new(0.6, -0.8, 0.0),
            Point::new(1.0, 0.0, 0.0),
            center + 2.0 * reach * Point::new(1.0, 1.0, 0.0).normalize(),
        ),
        Dim::Three => (
            Point::new(0.48, -0.6, 0.64),
            Point::new(0.0, 0.0, 1.0),
            center + 2.0 * reach * Point::new(1.0, 1.0, 1.0).normalize(),
        ),
    };
    Ok(vec![
        ("constant".into(), InteriorSolution::Constant),
        ("linear".into(), InteriorSolution::Linear { a }),
        (
            "green-laplace".into(),
            InteriorSolution::GreenLaplace { pole, scale: 1.0 },
        ),
        (
            "plane-wave".into(),
            InteriorSolution::PlaneWave {
                k,
                dir,
                origin: Point::zeros(),
            },
        ),
        (
            "green-helmholtz".into(),
            InteriorSolution::GreenHelmholtz {
                k,
                pole,
                scale: Complex64::new(1.0, 0.0),
            },
        ),
    ])
}

/// `count` seeded random points in `region` (interior or exterior) at
/// distance at least `min_dist` from the boundary and at most `max_dist`.
pub fn random_points(
    boundary: &Boundary,
    region: Region,
    count: usize,
    min_dist: f64,
    max_dist: f64,
    seed: u64,
) -> Result<Vec<Point>> {
    if region == Region::Boundary || min_dist >= max_dist {
        return Err(Error::usage(
            "random points need an off-boundary region and a valid range",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = if region == Region::Interior {
        Side::Interior
    } else {
        Side::Exterior
    };
    let diam = boundary.diameter();
    let (lo, hi) = match boundary {
        Boundary::Curve(c) => {
            let (lo, hi) = c.bounding_box();
            (lo, hi)
        }
        Boundary::Surface(s) => {
            let r = s.axes().into_iter().fold(0.0, f64::max);
            (s.center() - Point::repeat(r), s.center() + Point::repeat(r))
        }
    };
    let pad = Point::repeat(max_dist);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > 1_000_000 {
            return Err(Error::domain(format!(
                "could not place {count} {region} points at distance >= {min_dist}"
            )));
        }
        let mut x = Point::zeros();
        for a in 0..boundary.dim().value() {
            x[a] = rng.gen_range(lo[a]..hi[a]);
        }
        if let Ok(p) = nearest_boundary_point(boundary, &x) {
            if p.side == side && p.distance >= min_dist && p.distance <= max_dist.min(diam) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// The boundary sample used for boundary-region cases.
pub fn default_boundary_param(boundary: &Boundary) -> Param {
    match boundary {
        Boundary::Curve(_) => Param::Curve(0.9),
        Boundary::Surface(_) => Param::Surface(1.1, 0.4),
    }
}

/// Anchor sample for `case`'s target, if it lies on the boundary.
pub fn boundary_sample_of(case: &IdentityCase, boundary: &Boundary) -> Option<BoundarySample> {
    match case.target {
        Target::Boundary(p) => boundary.sample(p).ok(),
        Target::Point(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{p2, Curve2D, Surface3D};

    fn circle() -> Boundary {
        Boundary::Curve(Curve2D::circle(1.0).unwrap())
    }

    #[test]
    fn gauss_law_circle() {
        let b = circle();
        for (x, region, want) in [
            (p2(0.0, 0.0), Region::Interior, -1.0),
            (p2(3.0, 0.0), Region::Exterior, 0.0),
        ] {
            let c = IdentityCase::new(
                "constant",
                InteriorSolution::Constant,
                region,
                Target::Point(x),
                &b,
            )
            .unwrap();
            let v = identity_lhs(&c, &b, 64).unwrap();
            assert!((v - want).norm() < 1e-12, "{v}");
        }
    }

    #[test]
    fn plane_wave_interior() {
        let b = circle();
        let pw = InteriorSolution::PlaneWave {
            k: 5.0,
            dir: p2(1.0, 0.0),
            origin: Point::zeros(),
        };
        let x = p2(0.2, 0.1);
        let c =
            IdentityCase::new("pw", pw.clone(), Region::Interior, Target::Point(x), &b).unwrap();
        let v = identity_lhs(&c, &b, 256).unwrap();
        let want = -Complex64::from_polar(1.0, 5.0 * 0.2);
        assert!((v - want).norm() < 1e-10, "{v} vs {want}");
    }

    #[test]
    fn boundary_half() {
        let b = circle();
        let c = IdentityCase::new(
            "constant",
            InteriorSolution::Constant,
            Region::Boundary,
            Target::Boundary(Param::Curve(0.3)),
            &b,
        )
        .unwrap();
        assert!(identity_residual(&c, &b, 128).unwrap() < 1e-10);
        let kite = Boundary::Curve(Curve2D::kite());
        for (label, sol) in builtin_solutions(&kite, 3.0).unwrap() {
            let c = IdentityCase::new(
                label.clone(),
                sol,
                Region::Boundary,
                Target::Boundary(Param::Curve(1.7)),
                &kite,
            )
            .unwrap();
            let r = identity_residual(&c, &kite, 256).unwrap();
            assert!(r < 1e-9, "{label}: {r:e}");
        }
    }

    #[test]
    fn green_laplace_kite() {
        let b = Boundary::Curve(Curve2D::kite());
        let c = IdentityCase::new(
            "green",
            InteriorSolution::GreenLaplace {
                pole: p2(3.0, 3.0),
                scale: 1.0,
            },
            Region::Interior,
            Target::Point(p2(-0.2, 0.3)),
            &b,
        )
        .unwrap();
        assert!(identity_residual(&c, &b, 256).unwrap() < 1e-10);
    }

    #[test]
    fn sphere_cases() {
        let b = Boundary::Surface(Surface3D::sphere(Point::zeros(), 2.0).unwrap());
        for (label, sol) in builtin_solutions(&b, 2.0).unwrap() {
            for (region, x) in [
                (Region::Interior, Point::new(0.3, -0.5, 0.9)),
                (Region::Exterior, Point::new(1.5, 1.5, 1.5)),
            ] {
                let c = IdentityCase::new(label.clone(), sol.clone(), region, Target::Point(x), &b)
                    .unwrap();
                let r = identity_residual(&c, &b, 16).unwrap();
                assert!(r < 1e-5, "{label} {region}: {r:e}");
            }
        }
    }

    #[test]
    fn rejects_bad_cases() {
        let b = circle();
        let near = InteriorSolution::GreenLaplace {
            pole: p2(1.05, 0.0),
            scale: 1.0,
        };
        assert!(IdentityCase::new(
            "g",
            near,
            Region::Interior,
            Target::Point(Point::zeros()),
            &b
        )
        .is_err());
        assert!(IdentityCase::new(
            "c",
            InteriorSolution::Constant,
            Region::Exterior,
            Target::Point(Point::zeros()),
            &b
        )
        .is_err());
    }
}
