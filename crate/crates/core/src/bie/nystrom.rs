//! Nyström discretisations on the PTR grid of a closed curve.

use super::density::Density2D;
use crate::error::{Error, Result};
use crate::geometry::{BoundarySample, Curve2D, Dim};
use crate::kernels::{dlp_diagonal_2d, radial_derivative, single_and_dlp, Family};
use crate::linalg::LinearSystem;
use crate::quadrature::{CurvePoint, KressWeights, LogKernel, PtrGrid};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Boundary data as a function of the boundary sample.
pub type BoundaryData<'a> = &'a (dyn Fn(&BoundarySample) -> Complex64 + Sync);

/// The four 2D boundary integral equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Problem2D {
    /// `-μ/2 + ∫ ∂_{n_y} G^L μ = f`.
    LaplaceDirichlet,
    /// `-ρ/2 + ∫ ∂_{n_x} G^L ρ = g`.
    LaplaceNeumann,
    /// `μ/2 + ∫ (∂_{n_y} G^H - ik G^H) μ = f` with Kress quadrature.
    HelmholtzKress { k: f64 },
    /// The plane-wave subtracted form of the Helmholtz equation, plain PTR.
    HelmholtzPws { k: f64 },
}

impl Problem2D {
    fn check(&self, n: usize) -> Result<()> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::usage(format!(
                "Nyström needs an even N >= 4, got {n}"
            )));
        }
        match self {
            Problem2D::HelmholtzKress { k } | Problem2D::HelmholtzPws { k } => {
                Family::helmholtz(*k).map(|_| ())
            }
            _ => Ok(()),
        }
    }
}

fn curve_points(curve: &Curve2D, n: usize) -> Vec<CurvePoint> {
    let g = PtrGrid { n };
    (0..n).map(|j| CurvePoint::at(curve, g.node(j))).collect()
}

/// Dense Nyström matrix of `problem` on `n` PTR nodes.
pub fn nystrom_matrix(problem: Problem2D, curve: &Curve2D, n: usize) -> Result<DMatrix<Complex64>> {
    problem.check(n)?;
    let pts = curve_points(curve, n);
    let h = PtrGrid { n }.weight();
    let kress = match problem {
        Problem2D::HelmholtzKress { .. } => Some(KressWeights::offsets(n)?),
        _ => None,
    };
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = &pts[i];
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            match problem {
                Problem2D::LaplaceDirichlet => {
                    for (j, y) in pts.iter().enumerate() {
                        row[j] = if i == j {
                            Complex64::new(dlp_diagonal_2d(y.curvature) * y.speed * h - 0.5, 0.0)
                        } else {
                            let d = x.point - y.point;
                            let r = d.norm();
                            radial_derivative(Family::Laplace, Dim::Two, r)
                                * (d.dot(&y.normal) / r * y.speed * h)
                        };
                    }
                }
                Problem2D::LaplaceNeumann => {
                    for (j, y) in pts.iter().enumerate() {
                        row[j] = if i == j {
                            Complex64::new(dlp_diagonal_2d(x.curvature) * y.speed * h - 0.5, 0.0)
                        } else {
                            let d = x.point - y.point;
                            let r = d.norm();
                            -radial_derivative(Family::Laplace, Dim::Two, r)
                                * (d.dot(&x.normal) / r * y.speed * h)
                        };
                    }
                }
                Problem2D::HelmholtzKress { k } => {
                    let kernel = LogKernel::HelmholtzCombined { k };
                    let r = kress.as_ref().expect("weights");
                    for (j, y) in pts.iter().enumerate() {
                        let (k1, k2) = kernel.split(x, y);
                        row[j] = r[(i + n - j) % n] * k1 + h * k2;
                    }
                    row[i] += 0.5;
                }
                Problem2D::HelmholtzPws { k } => {
                    let fam = Family::Helmholtz { k };
                    let ik = Complex64::new(0.0, k);
                    let mut diag = Complex64::new(0.0, 0.0);
                    for (j, y) in pts.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        let w = y.speed * h;
                        let (g, dg) = single_and_dlp(fam, Dim::Two, &x.point, &y.point, &y.normal);
                        let e = Complex64::from_polar(1.0, k * x.normal.dot(&(y.point - x.point)));
                        let nn = y.normal.dot(&x.normal);
                        let a = dg - ik * nn * e * g;
                        let b = ik * (nn * e - 1.0) * g;
                        let c = dg * (1.0 - e);
                        row[j] = w * (a + b);
                        diag += w * (c - a);
                    }
                    row[i] = diag;
                }
            }
            row
        })
        .collect();
    Ok(DMatrix::from_row_iterator(n, n, rows.into_iter().flatten()))
}

/// Nyström matrix of the double-layer operator alone, without the `-1/2` jump.
pub fn double_layer_matrix(curve: &Curve2D, n: usize) -> Result<DMatrix<Complex64>> {
    let mut m = nystrom_matrix(Problem2D::LaplaceDirichlet, curve, n)?;
    for i in 0..n {
        m[(i, i)] += 0.5;
    }
    Ok(m)
}

/// Solves `problem` on `n` PTR nodes with boundary data `data`.
pub fn solve_2d(
    problem: Problem2D,
    curve: &Curve2D,
    data: BoundaryData,
    n: usize,
) -> Result<Density2D> {
    let matrix = nystrom_matrix(problem, curve, n)?;
    let g = PtrGrid { n };
    let rhs: Vec<Complex64> = (0..n).map(|j| data(&curve.sample(g.node(j)))).collect();
    let system = LinearSystem::new(matrix, nalgebra::DVector::from_vec(rhs))?;
    let (values, report) = system.solve()?;
    Density2D::new(curve.clone(), values, report)
}

pub fn solve_laplace_dirichlet_2d(curve: &Curve2D, f: BoundaryData, n: usize) -> Result<Density2D> {
    solve_2d(Problem2D::LaplaceDirichlet, curve, f, n)
}

pub fn solve_laplace_neumann_2d(curve: &Curve2D, g: BoundaryData, n: usize) -> Result<Density2D> {
    solve_2d(Problem2D::LaplaceNeumann, curve, g, n)
}

pub fn solve_helmholtz_kress_2d(
    curve: &Curve2D,
    k: f64,
    f: BoundaryData,
    n: usize,
) -> Result<Density2D> {
    solve_2d(Problem2D::HelmholtzKress { k }, curve, f, n)
}

pub fn solve_helmholtz_pws_2d(
    curve: &Curve2D,
    k: f64,
    f: BoundaryData,
    n: usize,
) -> Result<Density2D> {
    solve_2d(Problem2D::HelmholtzPws { k }, curve, f, n)
}
