use crate::error::{Error, Result};
use crate::geometry::{Boundary, Curve2D, Point, ShapeSpec, Surface3D};
use crate::linalg::SolveReport;
use crate::quadrature::PtrGrid;
use crate::specfun::{sh_index, sph_harm_all};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

/// Nodal density on the PTR grid of a curve.
#[derive(Clone, Debug)]
pub struct Density2D {
    pub curve: Curve2D,
    pub values: Vec<Complex64>,
    pub report: SolveReport,
    /// `c_m` for `m = 0..N/2` then `m = -(N/2 - 1)..-1`, as in a DFT.
    coeffs: Vec<Complex64>,
}

impl Density2D {
    pub fn new(curve: Curve2D, values: Vec<Complex64>, report: SolveReport) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::usage("density needs at least 2 nodes"));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::Solver {
                reason: "density has non-finite values".into(),
                condition: report.condition,
            });
        }
        let coeffs = dft(&values);
        Ok(Density2D {
            curve,
            values,
            report,
            coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn grid(&self) -> PtrGrid {
        PtrGrid { n: self.n() }
    }

    /// Trigonometric interpolant at `t`; the Nyquist mode enters as a cosine.
    pub fn interp(&self, t: f64) -> Complex64 {
        let n = self.n();
        let h = TAU / n as f64;
        let u = t.rem_euclid(TAU) / h;
        let j = u.round();
        if (u - j).abs() * h < 1e-14 {
            return self.values[j as usize % n];
        }
        let mut acc = self.coeffs[0];
        let top = n.div_ceil(2);
        let e = Complex64::from_polar(1.0, t);
        let mut em = e;
        for m in 1..top {
            acc += self.coeffs[m] * em + self.coeffs[n - m] * em.conj();
            em *= e;
        }
        if n.is_multiple_of(2) {
            acc += self.coeffs[n / 2] * (0.5 * n as f64 * t).cos();
        }
        acc
    }

    pub fn fourier_coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }
}

fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let nf = n as f64;
    (0..n)
        .map(|m| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -TAU * ((m * j) % n) as f64 / nf))
                .sum::<Complex64>()
                / nf
        })
        .collect()
}

/// Density as spherical-harmonic coefficients `ψ_nm`, `n < N`.
#[derive(Clone, Debug)]
pub struct DensitySH {
    pub surface: Surface3D,
    pub order: usize,
    pub coeffs: Vec<Complex64>,
    pub report: SolveReport,
}

impl DensitySH {
    pub fn new(
        surface: Surface3D,
        order: usize,
        coeffs: Vec<Complex64>,
        report: SolveReport,
    ) -> Result<Self> {
        if coeffs.len() != order * order {
            return Err(Error::usage(format!(
                "expected {} coefficients, got {}",
                order * order,
                coeffs.len()
            )));
        }
        Ok(DensitySH {
            surface,
            order,
            coeffs,
            report,
        })
    }

    pub fn coeff(&self, n: usize, m: i64) -> Complex64 {
        self.coeffs[sh_index(n, m)]
    }

    /// Expansion value at parameters `(s, t)` of the sphere.
    pub fn eval(&self, s: f64, t: f64) -> Complex64 {
        sph_harm_all(self.order, s, t)
            .iter()
            .zip(&self.coeffs)
            .map(|(y, c)| y * c)
            .sum()
    }

    /// Value at the surface point in the direction of `x` from the center.
    pub fn eval_at(&self, x: &Point) -> Complex64 {
        let (s, t) = sphere_angles(&(x - self.surface.center()));
        self.eval(s, t)
    }
}

/// Polar and azimuthal angle of a direction.
pub fn sphere_angles(d: &Point) -> (f64, f64) {
    let r = d.norm();
    ((d.z / r).clamp(-1.0, 1.0).acos(), d.y.atan2(d.x))
}

/// A solved density of either dimension.
#[derive(Clone, Debug)]
pub enum Density {
    Nodal(Density2D),
    Harmonic(DensitySH),
}

impl Density {
    pub fn report(&self) -> &SolveReport {
        match self {
            Density::Nodal(d) => &d.report,
            Density::Harmonic(d) => &d.report,
        }
    }

    pub fn boundary(&self) -> Boundary {
        match self {
            Density::Nodal(d) => Boundary::Curve(d.curve.clone()),
            Density::Harmonic(d) => Boundary::Surface(d.surface.clone()),
        }
    }

    pub fn to_sidecar(&self) -> DensitySidecar {
        let shape = ShapeSpec(self.boundary()).to_string();
        let rep = self.report();
        match self {
            Density::Nodal(d) => DensitySidecar {
                shape,
                layout: Layout::Nodal,
                n: d.n(),
                values: d.values.clone(),
                residual: rep.residual,
                condition: rep.condition,
            },
            Density::Harmonic(d) => DensitySidecar {
                shape,
                layout: Layout::Harmonic,
                n: d.order,
                values: d.coeffs.clone(),
                residual: rep.residual,
                condition: rep.condition,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Nodal,
    Harmonic,
}

/// Serialized density: nodal values on the PTR grid, or SH coefficients in
/// `n² + n + m` order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySidecar {
    pub shape: String,
    pub layout: Layout,
    pub n: usize,
    pub values: Vec<Complex64>,
    pub residual: f64,
    pub condition: f64,
}

impl DensitySidecar {
    pub fn into_density(self) -> Result<Density> {
        let report = SolveReport {
            residual: self.residual,
            condition: self.condition,
            warnings: Vec::new(),
        };
        match (crate::geometry::parse_shape(&self.shape)?, self.layout) {
            (Boundary::Curve(c), Layout::Nodal) => {
                if self.values.len() != self.n {
                    return Err(Error::Config("nodal sidecar length mismatch".into()));
                }
                Ok(Density::Nodal(Density2D::new(c, self.values, report)?))
            }
            (Boundary::Surface(s), Layout::Harmonic) => Ok(Density::Harmonic(DensitySH::new(
                s,
                self.n,
                self.values,
                report,
            )?)),
            _ => Err(Error::Config(format!(
                "layout {:?} does not match shape {}",
                self.layout, self.shape
            ))),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(f), self)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
    }

    /// `t, re, im` rows for nodal densities, `n, m, re, im` for SH ones.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        match self.layout {
            Layout::Nodal => {
                writeln!(w, "t,re,im")?;
                let g = PtrGrid { n: self.n };
                for (j, v) in self.values.iter().enumerate() {
                    writeln!(w, "{},{},{}", g.node(j), v.re, v.im)?;
                }
            }
            Layout::Harmonic => {
                writeln!(w, "n,m,re,im")?;
                for n in 0..self.n {
                    for m in -(n as i64)..=(n as i64) {
                        let v = self.values[sh_index(n, m)];
                        writeln!(w, "{n},{m},{},{}", v.re, v.im)?;
                    }
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Density value at a boundary parameter.
pub fn density_interp(density: &Density, param: crate::geometry::Param) -> Result<Complex64> {
    use crate::geometry::Param;
    match (density, param) {
        (Density::Nodal(d), Param::Curve(t)) => Ok(d.interp(t)),
        (Density::Harmonic(d), Param::Surface(s, t)) => Ok(d.eval(s, t)),
        _ => Err(Error::usage(
            "parameter does not match the density's boundary",
        )),
    }
}
