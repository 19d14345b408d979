//! Off-boundary evaluation of layer potentials and their subtracted forms.
//!
//! Every modified representation is built from an interior solution `u`
//! anchored at the nearest boundary point `x*`. The subtracted brackets all
//! vanish at `y = x*`, which removes the near-singular peak of the kernel.

use crate::bie::{Density, DensitySH};
use crate::error::{Error, Result};
use crate::geometry::{nearest_boundary_point, Boundary, BoundarySample, Dim, Param, Point};
use crate::kernels::{radial_derivative, single, single_and_dlp, Family};
use crate::quadrature::{curve_nodes, rotated_nodes, QuadNode, SphereGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for the anchoring constraints.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Value and gradient of a user-supplied solution.
pub type CustomFn = Arc<dyn Fn(&Point) -> (Complex64, [Complex64; 3]) + Send + Sync>;

/// A solution of the Laplace or Helmholtz equation in the interior.
#[derive(Clone)]
pub enum InteriorSolution {
    Constant,
    /// `a·y`.
    Linear {
        a: Point,
    },
    /// `scale · G^L(y, pole)`.
    GreenLaplace {
        pole: Point,
        scale: f64,
    },
    /// `exp(ik s·(y - origin))` with `|s| = 1`.
    PlaneWave {
        k: f64,
        dir: Point,
        origin: Point,
    },
    /// `scale · G^H(y, pole)`.
    GreenHelmholtz {
        k: f64,
        pole: Point,
        scale: Complex64,
    },
    Custom {
        family: Family,
        f: CustomFn,
    },
}

impl fmt::Debug for InteriorSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InteriorSolution::Custom { family, .. } => write!(f, "Custom({family:?})"),
            InteriorSolution::Constant => write!(f, "Constant"),
            InteriorSolution::Linear { a } => write!(f, "Linear({:?})", a.as_slice()),
            InteriorSolution::GreenLaplace { pole, scale } => {
                write!(f, "GreenLaplace({:?}, {scale})", pole.as_slice())
            }
            InteriorSolution::PlaneWave { k, dir, origin } => write!(
                f,
                "PlaneWave(k={k}, {:?}, {:?})",
                dir.as_slice(),
                origin.as_slice()
            ),
            InteriorSolution::GreenHelmholtz { k, pole, scale } => {
                write!(f, "GreenHelmholtz(k={k}, {:?}, {scale})", pole.as_slice())
            }
        }
    }
}

fn cvec(v: Point) -> [Complex64; 3] {
    [v.x.into(), v.y.into(), v.z.into()]
}

impl InteriorSolution {
    pub fn family(&self) -> Family {
        match self {
            InteriorSolution::Constant
            | InteriorSolution::Linear { .. }
            | InteriorSolution::GreenLaplace { .. } => Family::Laplace,
            InteriorSolution::PlaneWave { k, .. } | InteriorSolution::GreenHelmholtz { k, .. } => {
                Family::Helmholtz { k: *k }
            }
            InteriorSolution::Custom { family, .. } => *family,
        }
    }

    /// Value and gradient at `y` in dimension `dim`.
    pub fn eval(&self, dim: Dim, y: &Point) -> (Complex64, [Complex64; 3]) {
        match self {
            InteriorSolution::Constant => (ONE, [ZERO; 3]),
            InteriorSolution::Linear { a } => (a.dot(y).into(), cvec(*a)),
            InteriorSolution::GreenLaplace { pole, scale } => {
                let d = y - pole;
                let r = d.norm();
                let g = single(Family::Laplace, dim, r) * *scale;
                let dr = -radial_derivative(Family::Laplace, dim, r) * *scale / r;
                (g, [dr * d.x, dr * d.y, dr * d.z])
            }
            InteriorSolution::PlaneWave { k, dir, origin } => {
                let e = Complex64::from_polar(1.0, k * dir.dot(&(y - origin)));
                let ike = Complex64::new(0.0, *k) * e;
                (e, [ike * dir.x, ike * dir.y, ike * dir.z])
            }
            InteriorSolution::GreenHelmholtz { k, pole, scale } => {
                let fam = Family::Helmholtz { k: *k };
                let d = y - pole;
                let r = d.norm();
                let g = single(fam, dim, r) * scale;
                let dr = -radial_derivative(fam, dim, r) * scale / r;
                (g, [dr * d.x, dr * d.y, dr * d.z])
            }
            InteriorSolution::Custom { f, .. } => f(y),
        }
    }

    pub fn value(&self, dim: Dim, y: &Point) -> Complex64 {
        self.eval(dim, y).0
    }

    /// `∂u/∂n` at `y`.
    pub fn normal_derivative(&self, dim: Dim, y: &Point, n: &Point) -> Complex64 {
        let g = self.eval(dim, y).1;
        g[0] * n.x + g[1] * n.y + g[2] * n.z
    }

    /// Max over `points` of `|Δ_h u + k² u| / max(1, k²)` with the 5- or
    /// 7-point stencil of spacing `h`.
    pub fn pde_residual(&self, dim: Dim, points: &[Point], h: f64) -> f64 {
        let k2 = self.family().wavenumber().map_or(0.0, |k| k * k);
        let axes = dim.value();
        points
            .iter()
            .map(|x| {
                let u0 = self.value(dim, x);
                let mut lap = -2.0 * axes as f64 * u0;
                for a in 0..axes {
                    let mut e = Point::zeros();
                    e[a] = h;
                    lap += self.value(dim, &(x + e)) + self.value(dim, &(x - e));
                }
                (lap / (h * h) + k2 * u0).norm() / k2.max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Names of the built-in subtraction solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionLabel {
    Constant,
    Linear,
    GreenLaplace,
    PlaneWave,
    GreenHelmholtz,
}

impl SolutionLabel {
    pub const ALL: [SolutionLabel; 5] = [
        SolutionLabel::Constant,
        SolutionLabel::Linear,
        SolutionLabel::GreenLaplace,
        SolutionLabel::PlaneWave,
        SolutionLabel::GreenHelmholtz,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionLabel::Constant => "constant",
            SolutionLabel::Linear => "linear",
            SolutionLabel::GreenLaplace => "green-laplace",
            SolutionLabel::PlaneWave => "plane-wave",
            SolutionLabel::GreenHelmholtz => "green-helmholtz",
        }
    }

    fn needs_k(&self) -> bool {
        matches!(
            self,
            SolutionLabel::PlaneWave | SolutionLabel::GreenHelmholtz
        )
    }
}

impl fmt::Display for SolutionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolutionLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SolutionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown solution label '{s}'")))
    }
}

/// Which anchoring constraints hold at `x*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstraintFlags {
    /// `u(x*) = 1` and `∂u(x*) = 0`.
    pub dlp: bool,
    /// `∂u(x*) = 1`.
    pub slp: bool,
    /// `u(x*) = 1` and `∂u(x*) = ik`.
    pub helmholtz: bool,
}

/// An interior solution anchored at a boundary point.
#[derive(Clone, Debug)]
pub struct SubtractionSolution {
    pub label: Option<SolutionLabel>,
    pub anchor: BoundarySample,
    pub dim: Dim,
    pub solution: InteriorSolution,
    pub flags: ConstraintFlags,
}

impl SubtractionSolution {
    /// Wraps `solution` and records which constraints it meets at `anchor`.
    pub fn new(solution: InteriorSolution, anchor: BoundarySample, dim: Dim) -> Self {
        let u = solution.value(dim, &anchor.point);
        let du = solution.normal_derivative(dim, &anchor.point, &anchor.normal);
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= CONSTRAINT_TOL;
        let flags = ConstraintFlags {
            dlp: close(u, ONE) && close(du, ZERO),
            slp: close(du, ONE),
            helmholtz: match solution.family() {
                Family::Helmholtz { k } => close(u, ONE) && close(du, Complex64::new(0.0, k)),
                Family::Laplace => false,
            },
        };
        SubtractionSolution {
            label: None,
            anchor,
            dim,
            solution,
            flags,
        }
    }

    pub fn value(&self, y: &Point) -> Complex64 {
        self.solution.value(self.dim, y)
    }

    pub fn normal_derivative(&self, y: &Point, n: &Point) -> Complex64 {
        self.solution.normal_derivative(self.dim, y, n)
    }

    /// Fails unless the constraints of `family` hold.
    pub fn require(&self, family: RepFamily) -> Result<()> {
        let (ok, what) = match family {
            RepFamily::LaplaceDlp => (self.flags.dlp, "u(x*) = 1, du(x*) = 0"),
            RepFamily::LaplaceSlp => (self.flags.slp, "du(x*) = 1"),
            RepFamily::HelmholtzCombined { k } => (
                self.flags.helmholtz && self.solution.family().wavenumber() == Some(k),
                "u(x*) = 1, du(x*) = ik",
            ),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSolution(format!(
                "{:?} does not satisfy {what} at the anchor",
                self.label.map_or("custom", |l| l.as_str())
            )))
        }
    }

    /// PDE residual at 20 seeded random points inside `boundary`.
    pub fn pde_residual(&self, boundary: &Boundary, seed: u64) -> Result<f64> {
        let pts = interior_points(boundary, 20, seed)?;
        Ok(self.solution.pde_residual(self.dim, &pts, 1e-3))
    }
}

/// Random points well inside `boundary`.
pub fn interior_points(boundary: &Boundary, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    match boundary {
        Boundary::Curve(c) => {
            let (lo, hi) = c.bounding_box();
            let margin = 0.05 * c.diameter();
            let mut tries = 0;
            while out.len() < count {
                tries += 1;
                if tries > 100_000 {
                    return Err(Error::domain("could not sample interior points"));
                }
                let x = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y), 0.0);
                if c.contains(&x)
                    && nearest_boundary_point(boundary, &x).is_ok_and(|p| p.distance > margin)
                {
                    out.push(x);
                }
            }
        }
        Boundary::Surface(s) => {
            let r = s.axes().into_iter().fold(f64::INFINITY, f64::min);
            while out.len() < count {
                let v = Point::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                if v.norm() < 1.0 {
                    out.push(s.center() + 0.8 * r * v);
                }
            }
        }
    }
    Ok(out)
}

/// Builds the named solution anchored at `xstar`. `k` is required for the
/// wave solutions. The constraint of the family the label is meant for is
/// checked and its failure reported as an invalid-solution error.
pub fn make_subtraction_solution(
    label: SolutionLabel,
    xstar: &BoundarySample,
    dim: Dim,
    k: Option<f64>,
) -> Result<SubtractionSolution> {
    let k = match (label.needs_k(), k) {
        (true, Some(k)) => Some(Family::helmholtz(k)?.wavenumber().unwrap_or(k)),
        (true, None) => {
            return Err(Error::usage(format!(
                "solution '{label}' needs a wavenumber"
            )))
        }
        (false, _) => None,
    };
    let n = xstar.normal;
    // 2^{d-1} π G^L has unit normal derivative at x* for the pole x* + n*
    let green_scale = match dim {
        Dim::Two => 2.0 * PI,
        Dim::Three => 4.0 * PI,
    };
    let (solution, family) = match label {
        SolutionLabel::Constant => (InteriorSolution::Constant, RepFamily::LaplaceDlp),
        SolutionLabel::Linear => (InteriorSolution::Linear { a: n }, RepFamily::LaplaceSlp),
        SolutionLabel::GreenLaplace => (
            InteriorSolution::GreenLaplace {
                pole: xstar.point + n,
                scale: green_scale,
            },
            RepFamily::LaplaceSlp,
        ),
        SolutionLabel::PlaneWave => {
            let k = k.unwrap_or_default();
            (
                InteriorSolution::PlaneWave {
                    k,
                    dir: n,
                    origin: xstar.point,
                },
                RepFamily::HelmholtzCombined { k },
            )
        }
        SolutionLabel::GreenHelmholtz => {
            // normalized so that u(x*) = 1; the derivative constraint cannot hold
            let k = k.unwrap_or_default();
            let pole = xstar.point + n;
            let g0 = single(Family::Helmholtz { k }, dim, 1.0);
            (
                InteriorSolution::GreenHelmholtz {
                    k,
                    pole,
                    scale: g0.inv(),
                },
                RepFamily::HelmholtzCombined { k },
            )
        }
    };
    let mut sol = SubtractionSolution::new(solution, xstar.clone(), dim);
    sol.label = Some(label);
    sol.require(family)?;
    Ok(sol)
}

/// Kernel family and potential form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepFamily {
    LaplaceDlp,
    LaplaceSlp,
    HelmholtzCombined { k: f64 },
}

impl RepFamily {
    fn kernel_family(&self) -> Family {
        match self {
            RepFamily::HelmholtzCombined { k } => Family::Helmholtz { k: *k },
            _ => Family::Laplace,
        }
    }
}

/// How the representation is modified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Standard,
    GaussSub,
    Dsl,
    Dsg,
    Pws,
    /// Subtraction with a built-in solution anchored at each `x*`.
    General(SolutionLabel),
}

impl Mode {
    /// The solution a named mode subtracts.
    fn solution_label(&self) -> Option<SolutionLabel> {
        match self {
            Mode::Standard => None,
            Mode::GaussSub => Some(SolutionLabel::Constant),
            Mode::Dsl => Some(SolutionLabel::Linear),
            Mode::Dsg => Some(SolutionLabel::GreenLaplace),
            Mode::Pws => Some(SolutionLabel::PlaneWave),
            Mode::General(l) => Some(*l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Representation {
    pub family: RepFamily,
    pub mode: Mode,
}

impl Representation {
    pub fn new(family: RepFamily, mode: Mode) -> Result<Self> {
        let ok = match mode {
            Mode::Standard => true,
            Mode::GaussSub => family == RepFamily::LaplaceDlp,
            Mode::Dsl | Mode::Dsg => family == RepFamily::LaplaceSlp,
            Mode::Pws => matches!(family, RepFamily::HelmholtzCombined { .. }),
            Mode::General(l) => match l {
                SolutionLabel::Constant => family == RepFamily::LaplaceDlp,
                SolutionLabel::Linear | SolutionLabel::GreenLaplace => {
                    family == RepFamily::LaplaceSlp
                }
                SolutionLabel::PlaneWave | SolutionLabel::GreenHelmholtz => {
                    matches!(family, RepFamily::HelmholtzCombined { .. })
                }
            },
        };
        if let RepFamily::HelmholtzCombined { k } = family {
            Family::helmholtz(k)?;
        }
        if ok {
            Ok(Representation { family, mode })
        } else {
            Err(Error::usage(format!(
                "mode {mode:?} is not compatible with {family:?}"
            )))
        }
    }
}

/// Quadrature nodes with density samples, prepared for one anchor `x*`.
/// Reusing it across many targets along the same normal saves resampling
/// the density.
/// Rotated-rule order used to evaluate an expansion of order `n`. The
/// integrand carries the kernel's oscillation on top of the density's
/// degree, so the rule needs more than `n` points per direction.
pub fn default_eval_order(n: usize) -> usize {
    n + n.div_ceil(2)
}

pub struct EvalContext {
    pub xstar: BoundarySample,
    pub dim: Dim,
    nodes: Vec<QuadNode>,
    mu: Vec<Complex64>,
    mu_star: Complex64,
}

impl EvalContext {
    pub fn new(density: &Density, xstar: BoundarySample) -> Result<Self> {
        match density {
            Density::Nodal(d) => {
                let t = xstar
                    .t()
                    .ok_or_else(|| Error::usage("2D density needs a curve anchor"))?;
                Ok(EvalContext {
                    dim: Dim::Two,
                    nodes: curve_nodes(&d.curve, d.n()),
                    mu: d.values.clone(),
                    mu_star: d.interp(t),
                    xstar,
                })
            }
            Density::Harmonic(d) => Self::sphere(d, xstar, default_eval_order(d.order)),
        }
    }

    /// Like [`EvalContext::new`], with the 3D rule order given explicitly.
    pub fn with_order(
        density: &Density,
        xstar: BoundarySample,
        order: Option<usize>,
    ) -> Result<Self> {
        match (density, order) {
            (Density::Harmonic(d), Some(o)) => Self::sphere(d, xstar, o),
            _ => Self::new(density, xstar),
        }
    }

    /// 3D context with a rotated rule of order `order`.
    pub fn sphere(density: &DensitySH, xstar: BoundarySample, order: usize) -> Result<Self> {
        let Param::Surface(s, t) = xstar.param else {
            return Err(Error::usage("3D density needs a surface anchor"));
        };
        let grid = SphereGrid::new(order.max(2))?;
        let nodes = rotated_nodes(&density.surface, &grid, &xstar)?;
        let mu = nodes.iter().map(|q| density.eval_at(&q.point)).collect();
        Ok(EvalContext {
            dim: Dim::Three,
            nodes,
            mu,
            mu_star: density.eval(s, t),
            xstar,
        })
    }

    pub fn mu_star(&self) -> Complex64 {
        self.mu_star
    }

    fn check_target(&self, x: &Point) -> Result<()> {
        let d = (x - self.xstar.point).norm();
        if d <= 1e-13 * self.xstar.point.norm().max(1.0) {
            return Err(Error::OnBoundary { distance: d });
        }
        Ok(())
    }

    /// Evaluates `repr` at `x`; named modes anchor their solution at `x*`.
    pub fn eval(&self, repr: &Representation, x: &Point) -> Result<Complex64> {
        self.check_target(x)?;
        let Some(label) = repr.mode.solution_label() else {
            return Ok(self.standard(repr.family, x));
        };
        let sol = make_subtraction_solution(
            label,
            &self.xstar,
            self.dim,
            repr.family.kernel_family().wavenumber(),
        )?;
        self.subtracted(repr.family, &sol, x)
    }

    /// Evaluates the subtracted form of `family` with a caller-supplied
    /// solution. Its anchor must be this context's `x*`.
    pub fn eval_with(
        &self,
        family: RepFamily,
        sol: &SubtractionSolution,
        x: &Point,
    ) -> Result<Complex64> {
        self.check_target(x)?;
        if (sol.anchor.point - self.xstar.point).norm() > 1e-14 * self.xstar.point.norm().max(1.0) {
            return Err(Error::usage("solution is anchored at a different point"));
        }
        sol.require(family)?;
        self.subtracted(family, sol, x)
    }

    fn standard(&self, family: RepFamily, x: &Point) -> Complex64 {
        let fam = family.kernel_family();
        self.nodes
            .iter()
            .zip(&self.mu)
            .map(|(q, mu)| {
                let (g, dg) = single_and_dlp(fam, self.dim, x, &q.point, &q.normal);
                let kern = match family {
                    RepFamily::LaplaceDlp => dg,
                    RepFamily::LaplaceSlp => g,
                    RepFamily::HelmholtzCombined { k } => dg - Complex64::new(0.0, k) * g,
                };
                kern * mu * q.weight
            })
            .sum()
    }

    fn subtracted(
        &self,
        family: RepFamily,
        sol: &SubtractionSolution,
        x: &Point,
    ) -> Result<Complex64> {
        let fam = family.kernel_family();
        let ms = self.mu_star;
        let xs = &self.xstar;
        let u_star = sol.value(&xs.point);
        let du_star = sol.normal_derivative(&xs.point, &xs.normal);
        let mut acc = ZERO;
        let mut g_total = ZERO;
        for (q, &mu) in self.nodes.iter().zip(&self.mu) {
            let (g, dg) = single_and_dlp(fam, self.dim, x, &q.point, &q.normal);
            let (u, grad) = sol.solution.eval(self.dim, &q.point);
            let du = grad[0] * q.normal.x + grad[1] * q.normal.y + grad[2] * q.normal.z;
            let term = match family {
                RepFamily::LaplaceDlp => {
                    g_total += g * q.weight;
                    dg * mu * (ONE - u) + dg * (mu - ms) * u + ms * g * (du - du_star)
                }
                RepFamily::LaplaceSlp => {
                    g * mu * (ONE - du) + g * (mu - ms) * du + ms * dg * (u - u_star)
                }
                RepFamily::HelmholtzCombined { k } => {
                    let ik = Complex64::new(0.0, k);
                    (dg - du * g) * (mu - ms) + g * (du - ik) * mu + ms * dg * (ONE - u)
                }
            };
            acc += term * q.weight;
        }
        if family == RepFamily::LaplaceDlp {
            acc += ms * du_star * g_total - ms * u_star;
        }
        Ok(acc)
    }
}

/// Evaluates `repr` at `x`. When `xstar` is `None` the nearest boundary point
/// is computed.
pub fn eval_potential(
    repr: &Representation,
    density: &Density,
    x: &Point,
    xstar: Option<BoundarySample>,
) -> Result<Complex64> {
    let xstar = match xstar {
        Some(s) => s,
        None => nearest_boundary_point(&density.boundary(), x)?.sample,
    };
    EvalContext::new(density, xstar)?.eval(repr, x)
}
