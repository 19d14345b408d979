//! Spherical-harmonic Galerkin discretisation on a sphere.
//!
//! Outer inner products use the product Gaussian rule; the weakly singular
//! inner integral at every outer node is taken with the rule rotated so that
//! the node sits at the north pole.

use super::density::{sphere_angles, DensitySH};
use super::nystrom::BoundaryData;
use crate::error::{Error, Result};
use crate::geometry::{Dim, Param, Surface3D};
use crate::kernels::{single_and_dlp, Family};
use crate::linalg::LinearSystem;
use crate::quadrature::{rotated_nodes, SphereGrid};
use crate::specfun::sph_harm_all;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

/// Largest supported expansion order.
pub const MAX_ORDER: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Problem3D {
    /// `-μ/2 + ∫ ∂_{n_y} G^L μ = f`.
    LaplaceDirichlet,
    /// `-ρ/2 + ∫ ∂_{n_x} G^L ρ = g`, assembled through the adjoint operator.
    LaplaceNeumann,
    /// `μ/2 + ∫ (∂_{n_y} G^H - ik G^H) μ = f`.
    Helmholtz { k: f64 },
    /// Plane-wave subtracted Helmholtz equation.
    HelmholtzPws { k: f64 },
}

fn weighted_conj(v: &[Complex64], w: f64) -> impl Iterator<Item = Complex64> + '_ {
    v.iter().map(move |c| c.conj() * w)
}

fn angles_of(p: &Param) -> (f64, f64) {
    match p {
        Param::Surface(s, t) => (*s, *t),
        Param::Curve(t) => (0.0, *t),
    }
}

/// Galerkin matrix and the outer quadrature data needed for the right-hand side.
pub struct GalerkinSystem {
    pub matrix: DMatrix<Complex64>,
    /// Outer nodes with weights, and `Y_nm` at each of them.
    outer: Vec<(crate::quadrature::QuadNode, Vec<Complex64>)>,
}

/// Galerkin system with the inner rotated rule of the same order as the
/// expansion.
pub fn galerkin_system(
    problem: Problem3D,
    surface: &Surface3D,
    order: usize,
) -> Result<GalerkinSystem> {
    galerkin_system_with(problem, surface, order, order)
}

/// Galerkin system for `Y_nm`, `n < order`. Inner products use the product
/// Gaussian rule of the same order; the operator at each outer node is
/// integrated with the rotated rule of order `inner_order`.
pub fn galerkin_system_with(
    problem: Problem3D,
    surface: &Surface3D,
    order: usize,
    inner_order: usize,
) -> Result<GalerkinSystem> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::usage(format!(
            "Galerkin order must lie in 1..={MAX_ORDER}, got {order}"
        )));
    }
    if !surface.is_sphere() {
        return Err(Error::UnsupportedSurface(
            "Galerkin solver needs a sphere".into(),
        ));
    }
    let family = match problem {
        Problem3D::Helmholtz { k } | Problem3D::HelmholtzPws { k } => Family::helmholtz(k)?,
        _ => Family::Laplace,
    };
    let grid = SphereGrid::new(inner_order)?;
    let center = surface.center();
    // outer products use the parameter measure sin s ds dt, so the matrix is
    // the operator in the orthonormal SH basis
    let outer: Vec<_> = SphereGrid::product_gauss(order.max(2))?
        .nodes(surface)
        .into_iter()
        .map(|mut q| {
            q.weight /= surface.sample(0.0, 0.0).jacobian;
            let (s, t) = angles_of(&q.param);
            let y = sph_harm_all(order, s, t);
            (q, y)
        })
        .collect();
    let nb = order * order;

    // r_o[b] = K[Y_b](x_o)   (or the adjoint operator for Neumann)
    let rows: Vec<Vec<Complex64>> = outer
        .par_iter()
        .map(|(xo, yx)| -> Result<Vec<Complex64>> {
            let xs = surface.sample(angles_of(&xo.param).0, angles_of(&xo.param).1);
            let inner = rotated_nodes(surface, &grid, &xs)?;
            let mut r = vec![Complex64::new(0.0, 0.0); nb];
            let mut diag = Complex64::new(0.0, 0.0);
            for q in &inner {
                let (g, dg) = single_and_dlp(family, Dim::Three, &xo.point, &q.point, &q.normal);
                let kq = match problem {
                    Problem3D::LaplaceDirichlet => dg,
                    Problem3D::LaplaceNeumann => {
                        diag -= q.weight * dg;
                        dg
                    }
                    Problem3D::Helmholtz { k } => dg - Complex64::new(0.0, k) * g,
                    Problem3D::HelmholtzPws { k } => {
                        let ik = Complex64::new(0.0, k);
                        let e =
                            Complex64::from_polar(1.0, k * xo.normal.dot(&(q.point - xo.point)));
                        let nn = q.normal.dot(&xo.normal);
                        let a = dg - ik * nn * e * g;
                        let b = ik * (nn * e - 1.0) * g;
                        let c = dg * (1.0 - e);
                        diag += q.weight * (c - a);
                        a + b
                    }
                } * q.weight;
                let (s, t) = sphere_angles(&(q.point - center));
                for (rb, yb) in r.iter_mut().zip(sph_harm_all(order, s, t)) {
                    *rb += kq * yb;
                }
            }
            diag += match problem {
                Problem3D::LaplaceDirichlet => -0.5,
                Problem3D::LaplaceNeumann => -1.0,
                Problem3D::Helmholtz { .. } => 0.5,
                Problem3D::HelmholtzPws { .. } => 0.0,
            };
            for (rb, yb) in r.iter_mut().zip(yx) {
                *rb += diag * yb;
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;

    let no = outer.len();
    let (left, right) = if problem == Problem3D::LaplaceNeumann {
        (
            DMatrix::from_row_iterator(
                no,
                nb,
                rows.iter()
                    .zip(&outer)
                    .flat_map(|(r, (q, _))| weighted_conj(r, q.weight)),
            ),
            DMatrix::from_row_iterator(no, nb, outer.iter().flat_map(|(_, y)| y.iter().copied())),
        )
    } else {
        (
            DMatrix::from_row_iterator(
                no,
                nb,
                outer.iter().flat_map(|(q, y)| weighted_conj(y, q.weight)),
            ),
            DMatrix::from_row_iterator(no, nb, rows.into_iter().flatten()),
        )
    };
    Ok(GalerkinSystem {
        matrix: left.transpose() * right,
        outer,
    })
}

impl GalerkinSystem {
    /// `⟨Y_a, F⟩` with the outer product rule.
    pub fn rhs(&self, data: BoundaryData, surface: &Surface3D) -> DVector<Complex64> {
        let nb = self.matrix.nrows();
        let mut b = DVector::from_element(nb, Complex64::new(0.0, 0.0));
        for (q, y) in &self.outer {
            let (s, t) = angles_of(&q.param);
            let f = data(&surface.sample(s, t)) * q.weight;
            for (ba, ya) in b.iter_mut().zip(y) {
                *ba += ya.conj() * f;
            }
        }
        b
    }
}

pub fn solve_galerkin_3d(
    surface: &Surface3D,
    problem: Problem3D,
    data: BoundaryData,
    order: usize,
) -> Result<DensitySH> {
    solve_galerkin_3d_with(surface, problem, data, order, order)
}

pub fn solve_galerkin_3d_with(
    surface: &Surface3D,
    problem: Problem3D,
    data: BoundaryData,
    order: usize,
    inner_order: usize,
) -> Result<DensitySH> {
    let sys = galerkin_system_with(problem, surface, order, inner_order)?;
    let rhs = sys.rhs(data, surface);
    let (coeffs, report) = LinearSystem::new(sys.matrix, rhs)?.solve()?;
    DensitySH::new(surface.clone(), order, coeffs, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::specfun::sh_index;

    #[test]
    fn laplace_dirichlet_is_diagonal() {
        let sph = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        let sys = galerkin_system(Problem3D::LaplaceDirichlet, &sph, 12).unwrap();
        let nb = 144;
        for a in 0..nb {
            for b in 0..nb {
                let v = sys.matrix[(a, b)];
                if a != b {
                    assert!(v.norm() < 1e-8, "({a},{b}) = {v}");
                }
            }
        }
        // -1/2 - 1/(2(2n+1)); higher modes carry the inner-rule error
        for n in 0..5 {
            let v = sys.matrix[(sh_index(n, 0), sh_index(n, 0))];
            let expect = -0.5 - 0.5 / (2 * n + 1) as f64;
            assert!((v.re - expect).abs() < 1e-10, "n={n}: {v}");
        }
    }

    #[test]
    fn dirichlet_single_mode() {
        let sph = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        let f = |s: &crate::geometry::BoundarySample| {
            let (a, b) = angles_of(&s.param);
            sph_harm_all(2, a, b)[sh_index(1, 0)]
        };
        let d = solve_galerkin_3d(&sph, Problem3D::LaplaceDirichlet, &f, 12).unwrap();
        for (i, c) in d.coeffs.iter().enumerate() {
            if i != sh_index(1, 0) {
                assert!(c.norm() < 1e-10, "coefficient {i}: {c}");
            }
        }
        assert!((d.coeff(1, 0).re + 1.5).abs() < 1e-10, "{}", d.coeff(1, 0));
    }

    #[test]
    fn neumann_constant_mode() {
        // -ρ/2 + K'ρ on the sphere acts on Y_n by -1/2 - 1/(2(2n+1))
        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let sys = galerkin_system(Problem3D::LaplaceNeumann, &sph, 12).unwrap();
        for n in 0..5 {
            for m in -(n as i64)..=(n as i64) {
                let a = sh_index(n, m);
                let v = sys.matrix[(a, a)];
                let expect = -0.5 - 0.5 / (2 * n + 1) as f64;
                assert!((v - expect).norm() < 1e-10, "n={n} m={m}: {v}");
            }
        }
    }

    #[test]
    fn larger_inner_rule_resolves_all_modes() {
        let sph = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        let sys = galerkin_system_with(Problem3D::LaplaceDirichlet, &sph, 8, 20).unwrap();
        for n in 0..8 {
            let v = sys.matrix[(sh_index(n, 0), sh_index(n, 0))];
            let expect = -0.5 - 0.5 / (2 * n + 1) as f64;
            assert!((v.re - expect).abs() < 1e-12, "n={n}: {v}");
        }
    }

    #[test]
    fn rejects_ellipsoid_and_order() {
        let e = Surface3D::ellipsoid(Point::zeros(), [1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            galerkin_system(Problem3D::LaplaceDirichlet, &e, 4),
            Err(Error::UnsupportedSurface(_))
        ));
        let s = Surface3D::sphere(Point::zeros(), 1.0).unwrap();
        assert!(galerkin_system(Problem3D::LaplaceDirichlet, &s, 25).is_err());
    }
}
