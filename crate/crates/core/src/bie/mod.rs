//! Boundary integral equation solvers.
//!
//! 2D problems use Nyström discretisations on the PTR grid (Kress product
//! quadrature for the combined Helmholtz kernel); 3D problems use a
//! spherical-harmonic Galerkin method on spheres.

mod density;
mod galerkin;
mod nystrom;

pub use density::{
    density_interp, sphere_angles, Density, Density2D, DensitySH, DensitySidecar, Layout,
};
pub use galerkin::{
    galerkin_system, galerkin_system_with, solve_galerkin_3d, solve_galerkin_3d_with,
    GalerkinSystem, Problem3D, MAX_ORDER,
};
pub use nystrom::{
    double_layer_matrix, nystrom_matrix, solve_2d, solve_helmholtz_kress_2d,
    solve_helmholtz_pws_2d, solve_laplace_dirichlet_2d, solve_laplace_neumann_2d, BoundaryData,
    Problem2D,
};
