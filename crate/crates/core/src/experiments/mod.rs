//! Orchestration of the close-evaluation experiments: one boundary solve per
//! configuration, then error fields, scans along the normal, wavenumber
//! sweeps and identity tables written as CSV.

mod config;
mod report;

pub use config::{
    log_space, Backend, ExperimentConfig, GridSpec, IdentityFamily, IdentitySpec, KSweepSpec,
    ProblemKind, ScanSpec,
};
pub use report::{write_identity_csv, EvalReport, EvalRow, IdentityRow, KSweepReport, RunMeta};

use crate::bie::{solve_2d, solve_galerkin_3d_with, Density, DensitySidecar, Problem2D, Problem3D};
use crate::error::{Error, Result};
use crate::geometry::{
    nearest_boundary_point, offset_point, Boundary, BoundarySample, Dim, Param, Point, ShapeSpec,
    Side,
};
use crate::identities::{
    builtin_solutions, default_boundary_param, identity_residual_with, random_points, IdentityCase,
    Region, Target,
};
use crate::kernels::{radial_derivative, single, Family};
use crate::potentials::{EvalContext, Mode, RepFamily, Representation};
use config::parse_mode;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Points A and B on the radius-2 sphere used by the 3D scans.
pub const POINT_A: [f64; 3] = [-0.0065, -0.0327, 1.9997];
pub const POINT_B: [f64; 3] = [-0.3526, -1.7728, 0.8561];

/// One evaluation column.
#[derive(Clone, Debug, PartialEq)]
pub struct Method {
    pub name: String,
    pub mode: Mode,
    pub backend: Backend,
    pub repr: Representation,
}

/// Closed-form solution used to generate boundary data and measure errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactSolution {
    pub problem: ProblemKind,
    pub dim: Dim,
    pub x0: Point,
    pub k: Option<f64>,
}

impl ExactSolution {
    /// Value and gradient at `x`. Laplace uses the dipole
    /// `(x1 - x0_1)/|x - x0|²` in 2D and `1/|x - x0|` in 3D; Helmholtz uses
    /// the fundamental solution centred at `x0`.
    pub fn eval(&self, x: &Point) -> (Complex64, [Complex64; 3]) {
        let d = x - self.x0;
        let r = d.norm();
        let c = |v: f64| Complex64::new(v, 0.0);
        match (self.k, self.dim) {
            (Some(k), dim) => {
                let fam = Family::Helmholtz { k };
                let g = single(fam, dim, r);
                let dr = -radial_derivative(fam, dim, r) / r;
                (g, [dr * d.x, dr * d.y, dr * d.z])
            }
            (None, Dim::Two) => {
                let r2 = r * r;
                let r4 = r2 * r2;
                (
                    c(d.x / r2),
                    [
                        c(1.0 / r2 - 2.0 * d.x * d.x / r4),
                        c(-2.0 * d.x * d.y / r4),
                        c(0.0),
                    ],
                )
            }
            (None, Dim::Three) => {
                let r3 = r * r * r;
                (c(1.0 / r), [c(-d.x / r3), c(-d.y / r3), c(-d.z / r3)])
            }
        }
    }

    pub fn value(&self, x: &Point) -> Complex64 {
        self.eval(x).0
    }

    pub fn normal_derivative(&self, x: &Point, n: &Point) -> Complex64 {
        let g = self.eval(x).1;
        g[0] * n.x + g[1] * n.y + g[2] * n.z
    }
}

fn to_point(v: &[f64], dim: Dim) -> Result<Point> {
    if v.len() != dim.value() {
        return Err(Error::Config(format!(
            "expected {} coordinates, got {}",
            dim.value(),
            v.len()
        )));
    }
    let mut p = Point::zeros();
    for (i, x) in v.iter().enumerate() {
        p[i] = *x;
    }
    Ok(p)
}

fn default_x0(shape: &str, problem: ProblemKind, boundary: &Boundary) -> Point {
    let (center, reach) = match boundary {
        Boundary::Curve(c) => {
            let (lo, hi) = c.bounding_box();
            (0.5 * (lo + hi), 0.5 * (hi - lo).norm())
        }
        Boundary::Surface(s) => (s.center(), s.axes().into_iter().fold(0.0, f64::max)),
    };
    match (problem, shape) {
        (ProblemKind::LaplaceIntDirichlet, _) => {
            let dir = match boundary.dim() {
                Dim::Two => Point::new(1.0, 1.0, 0.0),
                Dim::Three => Point::new(1.0, 1.0, 1.0),
            };
            center + (reach + 0.5) * dir.normalize()
        }
        (ProblemKind::LaplaceExtNeumann, "kite") => Point::new(0.1, 0.4, 0.0),
        (ProblemKind::HelmholtzScatter, "star") => Point::new(0.2, 0.8, 0.0),
        (ProblemKind::HelmholtzScatter, s) if s.starts_with("sphere") => Point::new(0.1, 0.2, 0.3),
        _ => center,
    }
}

/// A configuration with its densities solved.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub boundary: Boundary,
    pub family: RepFamily,
    /// Side of the boundary where the solution lives.
    pub side: Side,
    pub methods: Vec<Method>,
    pub exact: ExactSolution,
    pub densities: BTreeMap<Backend, Density>,
    pub solve_seconds: f64,
}

fn backend_ok(backend: Backend, dim: Dim, helmholtz: bool) -> bool {
    match (dim, helmholtz) {
        (Dim::Two, false) => backend == Backend::Ptr,
        (Dim::Two, true) => matches!(backend, Backend::Kress | Backend::BiePws),
        (Dim::Three, false) => backend == Backend::Galerkin,
        (Dim::Three, true) => matches!(backend, Backend::Galerkin | Backend::BiePws),
    }
}

fn parse_methods(
    entries: &[String],
    problem: ProblemKind,
    family: RepFamily,
    dim: Dim,
) -> Result<Vec<Method>> {
    let helmholtz = problem == ProblemKind::HelmholtzScatter;
    let mut default_backend = match (dim, helmholtz) {
        (Dim::Two, false) => Backend::Ptr,
        (Dim::Two, true) => Backend::Kress,
        (Dim::Three, _) => Backend::Galerkin,
    };
    let mut modes: Vec<(String, Mode, Option<Backend>)> = Vec::new();
    for e in entries {
        let e = e.trim();
        if let Ok(b) = e.parse::<Backend>() {
            default_backend = b;
            continue;
        }
        match e.split_once('@') {
            Some((m, b)) => modes.push((e.to_string(), parse_mode(m)?, Some(b.parse()?))),
            None => modes.push((e.to_string(), parse_mode(e)?, None)),
        }
    }
    if modes.is_empty() {
        let names: &[&str] = match problem {
            ProblemKind::LaplaceIntDirichlet => &["standard", "gauss-sub"],
            ProblemKind::LaplaceExtNeumann => &["standard", "dsl", "dsg"],
            ProblemKind::HelmholtzScatter => &["standard", "pws"],
        };
        for n in names {
            modes.push((n.to_string(), parse_mode(n)?, None));
        }
    }
    modes
        .into_iter()
        .map(|(name, mode, b)| {
            let backend = b.unwrap_or(default_backend);
            if !backend_ok(backend, dim, helmholtz) {
                return Err(Error::Config(format!(
                    "backend '{backend}' does not apply to this problem"
                )));
            }
            let repr = Representation::new(family, mode)
                .map_err(|e| Error::Config(format!("method '{name}': {e}")))?;
            Ok(Method {
                name,
                mode,
                backend,
                repr,
            })
        })
        .collect()
}

fn cache_path(base: &Path, backend: Backend, primary: bool) -> PathBuf {
    if primary {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("density");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("json");
    base.with_file_name(format!("{stem}.{backend}.{ext}"))
}

impl Experiment {
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        let boundary = config.shape.parse::<ShapeSpec>()?.0;
        let dim = boundary.dim();
        if config.n == 0 {
            return Err(Error::Config("N is required".into()));
        }
        let helmholtz = config.problem == ProblemKind::HelmholtzScatter;
        let k = if helmholtz {
            let k = config
                .k
                .ok_or_else(|| Error::Config("helmholtz-scatter needs k".into()))?;
            Family::helmholtz(k).map_err(|e| Error::Config(e.to_string()))?;
            Some(k)
        } else {
            None
        };
        let (family, side) = match config.problem {
            ProblemKind::LaplaceIntDirichlet => (RepFamily::LaplaceDlp, Side::Interior),
            ProblemKind::LaplaceExtNeumann => (RepFamily::LaplaceSlp, Side::Exterior),
            ProblemKind::HelmholtzScatter => (
                RepFamily::HelmholtzCombined {
                    k: k.unwrap_or_default(),
                },
                Side::Exterior,
            ),
        };
        let x0 = match &config.x0 {
            Some(v) => to_point(v, dim)?,
            None => default_x0(config.shape.trim(), config.problem, &boundary),
        };
        // the singularity of the exact solution must sit away from the domain
        let x0_side = if boundary.contains(&x0) {
            Side::Interior
        } else {
            Side::Exterior
        };
        if x0_side == side {
            return Err(Error::Config(format!(
                "x0 must lie on the {} side for this problem",
                match side {
                    Side::Interior => Side::Exterior,
                    Side::Exterior => Side::Interior,
                }
            )));
        }
        let exact = ExactSolution {
            problem: config.problem,
            dim,
            x0,
            k,
        };
        let methods = parse_methods(&config.methods, config.problem, family, dim)?;

        let start = Instant::now();
        let mut densities = BTreeMap::new();
        let backends: Vec<Backend> = {
            let mut v: Vec<Backend> = methods.iter().map(|m| m.backend).collect();
            v.dedup();
            v.sort();
            v.dedup();
            v
        };
        let primary = methods[0].backend;
        for b in backends {
            let cache = config
                .density_cache
                .as_ref()
                .map(|p| cache_path(p, b, b == primary));
            let density = match cache.as_ref().filter(|p| p.exists()) {
                Some(p) => load_cached(p, &boundary, config.n)?,
                None => {
                    let d = solve_density(config, &boundary, b, &exact)?;
                    if let Some(p) = &cache {
                        d.to_sidecar().write_json(p)?;
                    }
                    d
                }
            };
            densities.insert(b, density);
        }
        Ok(Experiment {
            config: config.clone(),
            boundary,
            family,
            side,
            methods,
            exact,
            densities,
            solve_seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn dim(&self) -> Dim {
        self.boundary.dim()
    }

    pub fn method_names(&self) -> Vec<String> {
        self.methods.iter().map(|m| m.name.clone()).collect()
    }

    /// Position of the method called `name` in report order.
    pub fn method_index(&self, name: &str) -> Option<usize> {
        self.methods.iter().position(|m| m.name == name)
    }

    pub fn density(&self, backend: Backend) -> Option<&Density> {
        self.densities.get(&backend)
    }

    fn meta(&self) -> RunMeta {
        RunMeta {
            problem: serde_json::to_value(self.config.problem)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            shape: self.config.shape.clone(),
            n: self.config.n,
            k: self.exact.k,
            seed: self.config.seed,
            methods: self.method_names(),
            solve_seconds: self.solve_seconds,
            solves: self
                .densities
                .iter()
                .map(|(b, d)| (b.to_string(), d.report().residual, d.report().condition))
                .collect(),
            ..RunMeta::default()
        }
    }

    fn contexts(&self, xstar: &BoundarySample) -> Result<BTreeMap<Backend, EvalContext>> {
        self.densities
            .iter()
            .map(|(b, d)| {
                Ok((
                    *b,
                    EvalContext::with_order(d, xstar.clone(), self.config.eval_order)?,
                ))
            })
            .collect()
    }

    fn row(
        &self,
        ctx: &BTreeMap<Backend, EvalContext>,
        xstar: &BoundarySample,
        x: Point,
        ell: f64,
        side: Side,
    ) -> Result<EvalRow> {
        let values = self
            .methods
            .iter()
            .map(|m| ctx[&m.backend].eval(&m.repr, &x))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalRow::new(
            x,
            xstar.point,
            ell,
            side,
            values,
            self.exact.value(&x),
        ))
    }

    /// Values and errors at distances `ells` along the normal at `xstar`,
    /// ordered by distance.
    pub fn scan(&self, xstar: &BoundarySample, ells: &[f64]) -> Result<EvalReport> {
        let start = Instant::now();
        let mut ells = ells.to_vec();
        if ells.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Config("scan distances must be positive".into()));
        }
        ells.sort_by(f64::total_cmp);
        let ctx = self.contexts(xstar)?;
        let rows = ells
            .par_iter()
            .map(|&ell| {
                let x = offset_point(xstar, ell, self.side)?;
                self.row(&ctx, xstar, x, ell, self.side)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut meta = self.meta();
        meta.eval_seconds = start.elapsed().as_secs_f64();
        Ok(EvalReport {
            methods: self.method_names(),
            dim: self.dim(),
            rows,
            meta,
        })
    }

    /// Error field on a regular grid over `grid`'s box. Points on the other
    /// side are masked; points within `1e-6·diameter` of the boundary are
    /// skipped.
    pub fn field(&self, grid: &GridSpec) -> Result<EvalReport> {
        let start = Instant::now();
        let res = grid.resolution;
        if res == 0 {
            return Err(Error::Config("grid resolution must be positive".into()));
        }
        let (lo, hi) = match grid.bbox {
            Some([a, b]) => (Point::new(a[0], a[1], 0.0), Point::new(b[0], b[1], 0.0)),
            None => {
                let (lo, hi) = match &self.boundary {
                    Boundary::Curve(c) => c.bounding_box(),
                    Boundary::Surface(s) => {
                        let r = Point::from(s.axes());
                        (s.center() - r, s.center() + r)
                    }
                };
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (1.0 + grid.inflate) * (hi - lo);
                (mid - half, mid + half)
            }
        };
        let x3 = match self.dim() {
            Dim::Two => 0.0,
            Dim::Three => grid.x3.unwrap_or(self.boundary_center().z),
        };
        let coord = |i: usize, a: f64, b: f64| {
            if res == 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (res - 1) as f64
            }
        };
        let points: Vec<Point> = (0..res)
            .flat_map(|j| {
                (0..res).map(move |i| Point::new(coord(i, lo.x, hi.x), coord(j, lo.y, hi.y), x3))
            })
            .collect();
        let tol = 1e-6 * self.boundary.diameter();
        enum Outcome {
            Row(Box<EvalRow>),
            Skipped,
            Masked,
        }
        let outcomes = points
            .par_iter()
            .map(|x| -> Result<Outcome> {
                let p = match nearest_boundary_point(&self.boundary, x) {
                    Ok(p) => p,
                    Err(Error::OnBoundary { .. }) => return Ok(Outcome::Skipped),
                    Err(e) => return Err(e),
                };
                if p.distance < tol {
                    return Ok(Outcome::Skipped);
                }
                if p.side != self.side {
                    return Ok(Outcome::Masked);
                }
                let ctx = self.contexts(&p.sample)?;
                Ok(Outcome::Row(Box::new(
                    self.row(&ctx, &p.sample, *x, p.distance, p.side)?,
                )))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut meta = self.meta();
        let mut rows = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Row(r) => rows.push(*r),
                Outcome::Skipped => meta.skipped += 1,
                Outcome::Masked => meta.masked += 1,
            }
        }
        if meta.skipped > 0 {
            log::warn!("{} grid points on the boundary were skipped", meta.skipped);
        }
        meta.eval_seconds = start.elapsed().as_secs_f64();
        Ok(EvalReport {
            methods: self.method_names(),
            dim: self.dim(),
            rows,
            meta,
        })
    }

    fn boundary_center(&self) -> Point {
        match &self.boundary {
            Boundary::Curve(c) => {
                let (lo, hi) = c.bounding_box();
                0.5 * (lo + hi)
            }
            Boundary::Surface(s) => s.center(),
        }
    }

    /// The anchor of `scan`: a curve parameter, surface parameters, or the
    /// projection of a point.
    pub fn anchor(&self, scan: &ScanSpec) -> Result<BoundarySample> {
        resolve_anchor(
            &self.boundary,
            scan.tstar,
            scan.param,
            scan.point.as_deref(),
        )
    }
}

fn resolve_anchor(
    boundary: &Boundary,
    tstar: Option<f64>,
    param: Option<[f64; 2]>,
    point: Option<&[f64]>,
) -> Result<BoundarySample> {
    match (boundary, tstar, param, point) {
        (_, _, _, Some(p)) => {
            let x = to_point(p, boundary.dim())?;
            match boundary {
                Boundary::Surface(s) => s.sample_toward(&x),
                Boundary::Curve(_) => Ok(nearest_boundary_point(boundary, &x)?.sample),
            }
        }
        (Boundary::Curve(_), Some(t), _, _) => boundary.sample(Param::Curve(t)),
        (Boundary::Surface(_), _, Some([s, t]), _) => boundary.sample(Param::Surface(s, t)),
        (Boundary::Curve(_), None, _, _) => boundary.sample(Param::Curve(0.0)),
        (Boundary::Surface(_), _, None, _) => {
            Err(Error::Config("3D scans need `param` or `point`".into()))
        }
    }
}

fn load_cached(path: &Path, boundary: &Boundary, n: usize) -> Result<Density> {
    let side = DensitySidecar::read_json(path)?;
    let shape = ShapeSpec(boundary.clone()).to_string();
    if side.shape != shape || side.n != n {
        return Err(Error::Config(format!(
            "cached density {} is for {} with N = {}",
            path.display(),
            side.shape,
            side.n
        )));
    }
    side.into_density()
}

/// Solves the boundary equation of `config` with `backend`, using the
/// exact solution for the boundary data.
pub fn solve_density(
    config: &ExperimentConfig,
    boundary: &Boundary,
    backend: Backend,
    exact: &ExactSolution,
) -> Result<Density> {
    let n = config.n;
    let k = exact.k.unwrap_or_default();
    let ex = *exact;
    let dirichlet = move |s: &BoundarySample| ex.value(&s.point);
    let neumann = move |s: &BoundarySample| ex.normal_derivative(&s.point, &s.normal);
    let data: &(dyn Fn(&BoundarySample) -> Complex64 + Sync) = match config.problem {
        ProblemKind::LaplaceExtNeumann => &neumann,
        _ => &dirichlet,
    };
    match boundary {
        Boundary::Curve(c) => {
            let problem = match (config.problem, backend) {
                (ProblemKind::LaplaceIntDirichlet, Backend::Ptr) => Problem2D::LaplaceDirichlet,
                (ProblemKind::LaplaceExtNeumann, Backend::Ptr) => Problem2D::LaplaceNeumann,
                (ProblemKind::HelmholtzScatter, Backend::Kress) => Problem2D::HelmholtzKress { k },
                (ProblemKind::HelmholtzScatter, Backend::BiePws) => Problem2D::HelmholtzPws { k },
                _ => {
                    return Err(Error::Config(format!(
                        "backend '{backend}' does not apply to this problem"
                    )))
                }
            };
            Ok(Density::Nodal(solve_2d(problem, c, data, n)?))
        }
        Boundary::Surface(s) => {
            let problem = match (config.problem, backend) {
                (ProblemKind::LaplaceIntDirichlet, Backend::Galerkin) => {
                    Problem3D::LaplaceDirichlet
                }
                (ProblemKind::LaplaceExtNeumann, Backend::Galerkin) => Problem3D::LaplaceNeumann,
                (ProblemKind::HelmholtzScatter, Backend::Galerkin) => Problem3D::Helmholtz { k },
                (ProblemKind::HelmholtzScatter, Backend::BiePws) => Problem3D::HelmholtzPws { k },
                _ => {
                    return Err(Error::Config(format!(
                        "backend '{backend}' does not apply to this problem"
                    )))
                }
            };
            let inner = config.inner_order.unwrap_or(n);
            Ok(Density::Harmonic(solve_galerkin_3d_with(
                s, problem, data, n, inner,
            )?))
        }
    }
}

pub fn run_error_field(config: &ExperimentConfig, grid: &GridSpec) -> Result<EvalReport> {
    Experiment::prepare(config)?.field(grid)
}

/// Scan along the normal at the anchor of `scan`. Without explicit
/// distances, 40 log-spaced values in `[1e-6, 1]` are used.
pub fn run_normal_scan(config: &ExperimentConfig, scan: &ScanSpec) -> Result<EvalReport> {
    let exp = Experiment::prepare(config)?;
    let xstar = exp.anchor(scan)?;
    exp.scan(&xstar, &scan_ells(scan)?)
}

pub fn scan_ells(scan: &ScanSpec) -> Result<Vec<f64>> {
    match &scan.ells {
        Some(v) if !v.is_empty() => Ok(v.clone()),
        _ => log_space(
            scan.ell_min.unwrap_or(1e-6),
            scan.ell_max.unwrap_or(1.0),
            scan.count.unwrap_or(40),
        ),
    }
}

/// Default wavenumbers of the sweep.
pub fn default_ks(dim: Dim) -> Vec<f64> {
    match dim {
        Dim::Two => vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        Dim::Three => vec![1.0, 2.0, 5.0, 8.0],
    }
}

/// For each wavenumber: solve, then take the maximum error of every method
/// over the near-boundary point set (anchors × distances).
pub fn run_k_sweep(config: &ExperimentConfig, spec: &KSweepSpec) -> Result<KSweepReport> {
    if config.problem != ProblemKind::HelmholtzScatter {
        return Err(Error::Config(
            "the wavenumber sweep needs helmholtz-scatter".into(),
        ));
    }
    let boundary = config.shape.parse::<ShapeSpec>()?.0;
    let dim = boundary.dim();
    let ks = spec.ks.clone().unwrap_or_else(|| default_ks(dim));
    if ks.is_empty() {
        return Err(Error::Config("empty wavenumber list".into()));
    }
    let ells = spec
        .ells
        .clone()
        .unwrap_or_else(|| vec![1e-5, 1e-4, 1e-3, 1e-2]);
    let anchors: Vec<BoundarySample> = match (&spec.points, &spec.tstars, dim) {
        (Some(pts), _, _) => pts
            .iter()
            .map(|p| resolve_anchor(&boundary, None, None, Some(p)))
            .collect::<Result<_>>()?,
        (None, Some(ts), _) => ts
            .iter()
            .map(|t| boundary.sample(Param::Curve(*t)))
            .collect::<Result<_>>()?,
        (None, None, Dim::Two) => (0..8)
            .map(|j| boundary.sample(Param::Curve(0.1 + std::f64::consts::TAU * j as f64 / 8.0)))
            .collect::<Result<_>>()?,
        (None, None, Dim::Three) => [POINT_A, POINT_B]
            .iter()
            .map(|p| resolve_anchor(&boundary, None, None, Some(p)))
            .collect::<Result<_>>()?,
    };
    let mut methods = Vec::new();
    let mut maxerr = Vec::with_capacity(ks.len());
    for &k in &ks {
        let cfg = config.clone().with_k(k);
        let exp = Experiment::prepare(&cfg)?;
        methods = exp.method_names();
        let mut worst = vec![0.0f64; methods.len()];
        for a in &anchors {
            for row in exp.scan(a, &ells)?.rows {
                for (w, e) in worst.iter_mut().zip(&row.errors) {
                    *w = w.max(*e);
                }
            }
        }
        log::info!("k = {k}: {worst:?}");
        maxerr.push(worst);
    }
    Ok(KSweepReport {
        methods,
        ks,
        maxerr,
    })
}

fn wants(family: IdentityFamily, sol_family: Family) -> bool {
    match family {
        IdentityFamily::All => true,
        IdentityFamily::Laplace => sol_family == Family::Laplace,
        IdentityFamily::Helmholtz => sol_family != Family::Laplace,
    }
}

/// Residual table for the built-in solutions at one interior, one boundary
/// and one exterior point per `N`. Boundary cases add rows for the wrong
/// factors 0 and -1 (`boundary-alt0`, `boundary-alt1`).
pub fn run_identity_table(
    boundary: &Boundary,
    family: IdentityFamily,
    ns: &[usize],
    k: f64,
    seed: u64,
) -> Result<Vec<IdentityRow>> {
    if ns.is_empty() {
        return Err(Error::usage("identity table needs at least one N"));
    }
    let reach = 0.5 * boundary.diameter();
    let inner = random_points(boundary, Region::Interior, 1, 0.3, reach, seed)?[0];
    let outer = random_points(boundary, Region::Exterior, 1, 0.3, reach, seed + 1)?[0];
    let on = default_boundary_param(boundary);
    let mut cases = Vec::new();
    for (label, sol) in builtin_solutions(boundary, k)? {
        if !wants(family, sol.family()) {
            continue;
        }
        for (region, target) in [
            (Region::Interior, Target::Point(inner)),
            (Region::Boundary, Target::Boundary(on)),
            (Region::Exterior, Target::Point(outer)),
        ] {
            cases.push(IdentityCase::new(
                label.clone(),
                sol.clone(),
                region,
                target,
                boundary,
            )?);
        }
    }
    let jobs: Vec<(&IdentityCase, usize)> = cases
        .iter()
        .flat_map(|c| ns.iter().map(move |n| (c, *n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|(c, n)| -> Result<Vec<IdentityRow>> {
            let mut factors = vec![(c.region.to_string(), c.region.expected_factor())];
            if c.region == Region::Boundary {
                factors.push(("boundary-alt0".into(), 0.0));
                factors.push(("boundary-alt1".into(), -1.0));
            }
            factors
                .into_iter()
                .map(|(region, f)| {
                    Ok(IdentityRow {
                        case: c.label.clone(),
                        region,
                        n: *n,
                        residual: identity_residual_with(c, boundary, *n, f)?,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config() {
        let cfg = ExperimentConfig::from_json(
            r#"{"problem": "laplace-ext-neumann", "shape": "kite", "N": 64,
                "methods": ["standard", "dsl"], "scan": {"tstar": 1.0}}"#,
        )
        .unwrap();
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.scan.tstar, Some(1.0));
        assert!(
            ExperimentConfig::from_json(r#"{"problem": "nope", "shape": "kite", "N": 4}"#).is_err()
        );
    }

    #[test]
    fn rejects_incompatible_methods() {
        let cfg = ExperimentConfig::new(ProblemKind::LaplaceExtNeumann, "kite", 32)
            .with_methods(&["gauss-sub"]);
        assert!(matches!(Experiment::prepare(&cfg), Err(Error::Config(_))));
        let cfg = ExperimentConfig::new(ProblemKind::LaplaceExtNeumann, "kite", 32)
            .with_methods(&["kress"]);
        assert!(Experiment::prepare(&cfg).is_err());
        let cfg = ExperimentConfig::new(ProblemKind::HelmholtzScatter, "star", 32);
        assert!(Experiment::prepare(&cfg).is_err());
    }

    #[test]
    fn rejects_x0_on_wrong_side() {
        let cfg = ExperimentConfig::new(ProblemKind::LaplaceIntDirichlet, "kite", 32)
            .with_x0(&[0.1, 0.4]);
        assert!(matches!(Experiment::prepare(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn far_point_methods_agree() {
        let cfg = ExperimentConfig::new(ProblemKind::LaplaceExtNeumann, "kite", 128);
        let exp = Experiment::prepare(&cfg).unwrap();
        let grid = GridSpec {
            resolution: 1,
            bbox: Some([[3.5, 3.5], [3.5, 3.5]]),
            ..GridSpec::default()
        };
        let rep = exp.field(&grid).unwrap();
        assert_eq!(rep.rows.len(), 1);
        let v = &rep.rows[0].values;
        for w in v {
            assert!((w - v[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_table_needs_ns() {
        let b = Boundary::Curve(crate::geometry::Curve2D::circle(1.0).unwrap());
        assert!(matches!(
            run_identity_table(&b, IdentityFamily::All, &[], 5.0, 0),
            Err(Error::Usage(_))
        ));
        let rows = run_identity_table(&b, IdentityFamily::Laplace, &[32, 64], 5.0, 0).unwrap();
        // 3 solutions × (interior, boundary ×3, exterior) × 2
        assert_eq!(rows.len(), 30);
    }
}
