//! Parameterised boundaries: closed curves in the plane and closed surfaces
//! in space.
//!
//! Planar points are stored as [`Point`] with a zero third component so that
//! kernels and quadratures can share one vector type across dimensions.

use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

pub type Point = Vector3<f64>;

/// Planar point helper.
#[inline]
pub fn p2(x: f64, y: f64) -> Point {
    Point::new(x, y, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn value(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Interior,
    Exterior,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Interior => "interior",
            Side::Exterior => "exterior",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    Circle {
        radius: f64,
    },
    Kite,
    Star,
    /// Radial Fourier curve `r(t) = a0 + Σ a_j cos jt + Σ b_j sin jt`.
    Fourier {
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

/// A smooth closed curve `y(t)`, `t ∈ [0, 2π)`, traversed counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve2D {
    kind: CurveKind,
}

/// Position and first two derivatives of a curve at one parameter.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet {
    pub y: [f64; 2],
    pub dy: [f64; 2],
    pub ddy: [f64; 2],
}

impl Curve2D {
    pub fn new(kind: CurveKind) -> Result<Self> {
        let curve = Curve2D { kind };
        curve.validate()?;
        Ok(curve)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(CurveKind::Circle { radius })
    }

    pub fn kite() -> Self {
        Curve2D {
            kind: CurveKind::Kite,
        }
    }

    pub fn star() -> Self {
        Curve2D {
            kind: CurveKind::Star,
        }
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            CurveKind::Circle { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidShape(format!("circle radius {radius}")));
                }
            }
            CurveKind::Fourier { a, b } => {
                if a.is_empty() || a.iter().chain(b).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidShape(
                        "fourier coefficients must be finite with a0 present".into(),
                    ));
                }
                let min_r = (0..1024)
                    .map(|j| self.radial(TAU * j as f64 / 1024.0).0)
                    .fold(f64::INFINITY, f64::min);
                if min_r <= 0.0 {
                    return Err(Error::InvalidShape(
                        "fourier radius must stay positive".into(),
                    ));
                }
            }
            CurveKind::Kite | CurveKind::Star => {}
        }
        Ok(())
    }

    /// Radial function and its first two derivatives for radial shapes.
    fn radial(&self, t: f64) -> (f64, f64, f64) {
        match &self.kind {
            CurveKind::Circle { radius } => (*radius, 0.0, 0.0),
            CurveKind::Star => {
                let (s5, c5) = (5.0 * t).sin_cos();
                (1.55 + 0.4 * c5, -2.0 * s5, -10.0 * c5)
            }
            CurveKind::Fourier { a, b } => {
                let mut r = a[0];
                let mut dr = 0.0;
                let mut ddr = 0.0;
                for (j, aj) in a.iter().enumerate().skip(1) {
                    let jf = j as f64;
                    let (s, c) = (jf * t).sin_cos();
                    r += aj * c;
                    dr -= aj * jf * s;
                    ddr -= aj * jf * jf * c;
                }
                for (i, bj) in b.iter().enumerate() {
                    let jf = (i + 1) as f64;
                    let (s, c) = (jf * t).sin_cos();
                    r += bj * s;
                    dr += bj * jf * c;
                    ddr -= bj * jf * jf * s;
                }
                (r, dr, ddr)
            }
            CurveKind::Kite => unreachable!("kite is not radial"),
        }
    }

    pub fn jet(&self, t: f64) -> CurveJet {
        match &self.kind {
            CurveKind::Kite => {
                let (s, c) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                CurveJet {
                    y: [c + 0.65 * c2 - 0.65, 1.5 * s],
                    dy: [-s - 1.3 * s2, 1.5 * c],
                    ddy: [-c - 2.6 * c2, -1.5 * s],
                }
            }
            _ => {
                let (r, dr, ddr) = self.radial(t);
                let (s, c) = t.sin_cos();
                CurveJet {
                    y: [r * c, r * s],
                    dy: [dr * c - r * s, dr * s + r * c],
                    ddy: [(ddr - r) * c - 2.0 * dr * s, (ddr - r) * s + 2.0 * dr * c],
                }
            }
        }
    }

    pub fn point(&self, t: f64) -> Point {
        let j = self.jet(t);
        p2(j.y[0], j.y[1])
    }

    /// Signed curvature, positive on convex parts of a counter-clockwise curve.
    pub fn curvature(&self, t: f64) -> f64 {
        let j = self.jet(t);
        let speed = j.dy[0].hypot(j.dy[1]);
        (j.dy[0] * j.ddy[1] - j.dy[1] * j.ddy[0]) / speed.powi(3)
    }

    pub fn sample(&self, t: f64) -> BoundarySample {
        let j = self.jet(t);
        let speed = j.dy[0].hypot(j.dy[1]);
        BoundarySample {
            param: Param::Curve(t.rem_euclid(TAU)),
            point: p2(j.y[0], j.y[1]),
            normal: p2(j.dy[1] / speed, -j.dy[0] / speed),
            jacobian: speed,
            tangents: [p2(j.dy[0], j.dy[1]), Point::zeros()],
            curvature: Some(self.curvature(t)),
        }
    }

    /// Polygon approximation with `m` vertices, used for coarse searches.
    fn polygon(&self, m: usize) -> Vec<Point> {
        (0..m)
            .map(|j| self.point(TAU * j as f64 / m as f64))
            .collect()
    }

    /// Crossing-number point-in-curve test against a dense polygon.
    pub fn contains(&self, x: &Point) -> bool {
        let poly = self.polygon(4096);
        let mut inside = false;
        let n = poly.len();
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            if (a.y > x.y) != (b.y > x.y) {
                let xc = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x.x < xc {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn diameter(&self) -> f64 {
        let poly = self.polygon(256);
        let mut d: f64 = 0.0;
        for a in &poly {
            for b in &poly {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let poly = self.polygon(2048);
        let mut lo = Point::repeat(f64::INFINITY);
        let mut hi = Point::repeat(f64::NEG_INFINITY);
        for p in &poly {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }
}

/// Closed surface `y(s, t) = c + (a sin s cos t, b sin s sin t, c cos s)`.
///
/// Equal semi-axes give a sphere, the only surface supported by the
/// rotated quadratures.
#[derive(Clone, Debug, PartialEq)]
pub struct Surface3D {
    center: Point,
    axes: [f64; 3],
}

impl Surface3D {
    pub fn sphere(center: Point, radius: f64) -> Result<Self> {
        Self::ellipsoid(center, [radius; 3])
    }

    pub fn ellipsoid(center: Point, axes: [f64; 3]) -> Result<Self> {
        if center.iter().any(|v| !v.is_finite())
            || axes.iter().any(|a| !(a.is_finite() && *a > 0.0))
        {
            return Err(Error::InvalidShape(format!(
                "surface center {center:?} axes {axes:?}"
            )));
        }
        Ok(Surface3D { center, axes })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn is_sphere(&self) -> bool {
        self.axes[0] == self.axes[1] && self.axes[1] == self.axes[2]
    }

    /// Radius of a sphere; errors for other surfaces.
    pub fn radius(&self) -> Result<f64> {
        if self.is_sphere() {
            Ok(self.axes[0])
        } else {
            Err(Error::UnsupportedSurface(
                "operation requires a sphere".into(),
            ))
        }
    }

    pub fn axes(&self) -> [f64; 3] {
        self.axes
    }

    pub fn point(&self, s: f64, t: f64) -> Point {
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        let [a, b, c] = self.axes;
        self.center + Point::new(a * ss * ct, b * ss * st, c * cs)
    }

    pub fn sample(&self, s: f64, t: f64) -> BoundarySample {
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        let [a, b, c] = self.axes;
        // (y_s × y_t) / sin s, finite at the poles
        let m = Point::new(b * c * ss * ct, a * c * ss * st, a * b * cs);
        let jac = m.norm();
        BoundarySample {
            param: Param::Surface(s, t),
            point: self.center + Point::new(a * ss * ct, b * ss * st, c * cs),
            normal: m / jac,
            jacobian: jac,
            tangents: [
                Point::new(a * cs * ct, b * cs * st, -c * ss),
                Point::new(-a * ss * st, b * ss * ct, 0.0),
            ],
            curvature: None,
        }
    }

    /// Sample at the surface point closest to `x` (spheres only).
    pub fn sample_toward(&self, x: &Point) -> Result<BoundarySample> {
        let r = self.radius()?;
        let d = x - self.center;
        let dn = d.norm();
        if dn == 0.0 {
            return Err(Error::domain("direction from the center is undefined"));
        }
        let u = d / dn;
        let s = u.z.clamp(-1.0, 1.0).acos();
        let t = u.y.atan2(u.x);
        let mut sample = self.sample(s, t);
        // keep the exact projected point rather than the re-parameterised one
        sample.point = self.center + r * u;
        sample.normal = u;
        Ok(sample)
    }

    pub fn area_sphere(&self) -> Result<f64> {
        let r = self.radius()?;
        Ok(4.0 * PI * r * r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    Curve(Curve2D),
    Surface(Surface3D),
}

impl Boundary {
    pub fn dim(&self) -> Dim {
        match self {
            Boundary::Curve(_) => Dim::Two,
            Boundary::Surface(_) => Dim::Three,
        }
    }

    pub fn sample(&self, param: Param) -> Result<BoundarySample> {
        match (self, param) {
            (Boundary::Curve(c), Param::Curve(t)) => Ok(c.sample(t)),
            (Boundary::Surface(s), Param::Surface(a, b)) => Ok(s.sample(a, b)),
            _ => Err(Error::usage("parameter does not match boundary dimension")),
        }
    }

    /// Whether `x` lies strictly inside the boundary.
    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Boundary::Curve(c) => c.contains(x),
            Boundary::Surface(s) => {
                let (c, a) = (s.center(), s.axes());
                (0..3).map(|i| ((x[i] - c[i]) / a[i]).powi(2)).sum::<f64>() < 1.0
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Boundary::Curve(c) => c.diameter(),
            Boundary::Surface(s) => 2.0 * s.axes().iter().cloned().fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Curve(f64),
    Surface(f64, f64),
}

/// A point on the boundary together with its local frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySample {
    pub param: Param,
    pub point: Point,
    /// Unit outward normal.
    pub normal: Point,
    /// `|y'(t)|` for curves, `|y_s × y_t| / sin s` for surfaces.
    pub jacobian: f64,
    /// `y'(t)` for curves (second entry zero), `(y_s, y_t)` for surfaces.
    pub tangents: [Point; 2],
    pub curvature: Option<f64>,
}

impl BoundarySample {
    pub fn t(&self) -> Option<f64> {
        match self.param {
            Param::Curve(t) => Some(t),
            Param::Surface(..) => None,
        }
    }
}

pub fn boundary_sample(boundary: &Boundary, param: Param) -> Result<BoundarySample> {
    boundary.sample(param)
}

/// `x* - ℓ n` for interior points and `x* + ℓ n` for exterior points.
pub fn offset_point(sample: &BoundarySample, ell: f64, side: Side) -> Result<Point> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::domain(format!(
            "offset distance must be positive, got {ell}"
        )));
    }
    Ok(match side {
        Side::Interior => sample.point - ell * sample.normal,
        Side::Exterior => sample.point + ell * sample.normal,
    })
}

/// Result of a closest-point query.
#[derive(Clone, Debug)]
pub struct Projection {
    pub sample: BoundarySample,
    pub distance: f64,
    pub side: Side,
    /// Set when Newton refinement failed and the coarse sample was kept.
    pub unconverged: bool,
}

/// Closest boundary point to `x`, its distance and the side `x` lies on.
pub fn nearest_boundary_point(boundary: &Boundary, x: &Point) -> Result<Projection> {
    match boundary {
        Boundary::Curve(c) => nearest_on_curve(c, x, 256),
        Boundary::Surface(s) => {
            let sample = s.sample_toward(x)?;
            let d = x - sample.point;
            let dist = d.norm();
            if dist <= 1e-13 * boundary.diameter() {
                return Err(Error::OnBoundary { distance: dist });
            }
            let side = if d.dot(&sample.normal) > 0.0 {
                Side::Exterior
            } else {
                Side::Interior
            };
            Ok(Projection {
                sample,
                distance: dist,
                side,
                unconverged: false,
            })
        }
    }
}

/// Coarse search over `4 * n` samples followed by damped Newton on
/// `|x - y(t)|² / 2`.
pub fn nearest_on_curve(curve: &Curve2D, x: &Point, n: usize) -> Result<Projection> {
    let m = 4 * n.max(16);
    let dist2 = |t: f64| (x - curve.point(t)).norm_squared();
    let (mut t, _) = (0..m)
        .map(|j| TAU * j as f64 / m as f64)
        .map(|t| (t, dist2(t)))
        .fold(
            (0.0, f64::INFINITY),
            |acc, v| if v.1 < acc.1 { v } else { acc },
        );
    let t_coarse = t;
    let mut converged = false;
    for _ in 0..50 {
        let j = curve.jet(t);
        let d = [x.x - j.y[0], x.y - j.y[1]];
        let g = -(d[0] * j.dy[0] + d[1] * j.dy[1]);
        let h = j.dy[0] * j.dy[0] + j.dy[1] * j.dy[1] - (d[0] * j.ddy[0] + d[1] * j.ddy[1]);
        let mut step = if h > 0.0 {
            -g / h
        } else {
            // fall back to a gradient step scaled by the speed
            -g / (j.dy[0] * j.dy[0] + j.dy[1] * j.dy[1])
        };
        let f0 = dist2(t);
        let mut accepted = false;
        for _ in 0..30 {
            if dist2(t + step) <= f0 {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            converged = g.abs() < 1e-12;
            break;
        }
        t += step;
        if step.abs() < 1e-15 * TAU {
            converged = true;
            break;
        }
    }
    let unconverged = !converged;
    if unconverged {
        log::warn!("closest-point Newton did not converge; using coarse sample");
        t = t_coarse;
    }
    let sample = curve.sample(t);
    let d = x - sample.point;
    let distance = d.norm();
    if distance <= 1e-13 * curve.diameter() {
        return Err(Error::OnBoundary { distance });
    }
    let cos = d.dot(&sample.normal) / distance;
    let side = if cos.abs() > 0.5 {
        if cos > 0.0 {
            Side::Exterior
        } else {
            Side::Interior
        }
    } else if curve.contains(x) {
        Side::Interior
    } else {
        Side::Exterior
    };
    Ok(Projection {
        sample,
        distance,
        side,
        unconverged,
    })
}

/// Rotation taking a sphere point `x*` to the north pole.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleFrame {
    pub rotation: Matrix3<f64>,
    pub center: Point,
    pub radius: f64,
}

impl PoleFrame {
    /// `center + Rᵀ (r ŷ(s, t))`, which sits at `x*` for `s = 0`.
    pub fn point(&self, s: f64, t: f64) -> Point {
        self.center + self.radius * self.unit(s, t)
    }

    /// Outward unit normal at the rotated parameter.
    pub fn unit(&self, s: f64, t: f64) -> Point {
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        self.rotation.transpose() * Point::new(ss * ct, ss * st, cs)
    }
}

/// Orthogonal `R` with `R (x* - c) / r = e₃`.
pub fn rotate_to_pole(surface: &Surface3D, xstar: &BoundarySample) -> Result<PoleFrame> {
    let radius = surface.radius()?;
    let u = (xstar.point - surface.center).normalize();
    let e3 = Point::z();
    let rotation = if (u - e3).norm() < 1e-15 {
        Matrix3::identity()
    } else if (u + e3).norm() < 1e-15 {
        Matrix3::from_diagonal(&Point::new(1.0, -1.0, -1.0))
    } else {
        // Rodrigues rotation about u × e3
        let v = u.cross(&e3);
        let c = u.dot(&e3);
        let vx = Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0);
        Matrix3::identity() + vx + vx * vx * (1.0 / (1.0 + c))
    };
    Ok(PoleFrame {
        rotation,
        center: surface.center,
        radius,
    })
}

/// Shape specification: `circle:r`, `kite`, `star`, `sphere:r`,
/// `fourier:[a0,a1,...;b1,...]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeSpec(pub Boundary);

impl FromStr for ShapeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::InvalidShape(format!("{head} needs a radius")))?
                .parse::<f64>()
                .map_err(|e| Error::InvalidShape(format!("{s}: {e}")))
        };
        let boundary = match head {
            "circle" => Boundary::Curve(Curve2D::circle(num(arg)?)?),
            "kite" => Boundary::Curve(Curve2D::kite()),
            "star" => Boundary::Curve(Curve2D::star()),
            "sphere" => Boundary::Surface(Surface3D::sphere(Point::zeros(), num(arg)?)?),
            "fourier" => {
                let body = arg
                    .and_then(|a| a.strip_prefix('['))
                    .and_then(|a| a.strip_suffix(']'))
                    .ok_or_else(|| Error::InvalidShape(format!("malformed fourier spec {s}")))?;
                let (a_str, b_str) = body.split_once(';').unwrap_or((body, ""));
                let parse_list = |l: &str| -> Result<Vec<f64>> {
                    l.split(',')
                        .map(str::trim)
                        .filter(|v| !v.is_empty())
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|e| Error::InvalidShape(format!("{v}: {e}")))
                        })
                        .collect()
                };
                Boundary::Curve(Curve2D::new(CurveKind::Fourier {
                    a: parse_list(a_str)?,
                    b: parse_list(b_str)?,
                })?)
            }
            other => return Err(Error::InvalidShape(format!("unknown shape '{other}'"))),
        };
        Ok(ShapeSpec(boundary))
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.0 {
            Boundary::Curve(c) => match c.kind() {
                CurveKind::Circle { radius } => write!(f, "circle:{radius}"),
                CurveKind::Kite => write!(f, "kite"),
                CurveKind::Star => write!(f, "star"),
                CurveKind::Fourier { a, b } => write!(f, "fourier:[{};{}]", join(a), join(b)),
            },
            Boundary::Surface(s) => match s.radius() {
                Ok(r) if s.center() == Point::zeros() => write!(f, "sphere:{r}"),
                _ => write!(f, "surface"),
            },
        }
    }
}

pub fn parse_shape(s: &str) -> Result<Boundary> {
    Ok(s.parse::<ShapeSpec>()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circle_sample_at_zero() {
        let c = Curve2D::circle(1.0).unwrap();
        let s = c.sample(0.0);
        assert_abs_diff_eq!((s.point - p2(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.normal - p2(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.jacobian, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.curvature.unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn kite_sample_at_zero() {
        let s = Curve2D::kite().sample(0.0);
        assert_abs_diff_eq!((s.point - p2(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.normal - p2(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sphere_sample_equator() {
        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let s = sph.sample(PI / 2.0, 0.0);
        assert_abs_diff_eq!(
            (s.point - Point::new(2.0, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            (s.normal - Point::new(1.0, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.jacobian, 4.0, epsilon = 1e-14);
        let pole = sph.sample(0.0, 0.4);
        assert_abs_diff_eq!(pole.jacobian, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!((pole.normal - Point::z()).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn offsets() {
        let c = Curve2D::circle(1.0).unwrap();
        let s = c.sample(0.0);
        let xi = offset_point(&s, 0.5, Side::Interior).unwrap();
        let xe = offset_point(&s, 0.5, Side::Exterior).unwrap();
        assert_abs_diff_eq!((xi - p2(0.5, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((xe - p2(1.5, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            offset_point(&s, 0.0, Side::Interior),
            Err(Error::Domain(_))
        ));
        assert!(offset_point(&s, -1.0, Side::Interior).is_err());

        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let s = sph.sample(PI / 2.0, 0.0);
        let x = offset_point(&s, 1e-3, Side::Exterior).unwrap();
        assert_abs_diff_eq!(
            (x - Point::new(2.001, 0.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn nearest_on_circle() {
        let b = Boundary::Curve(Curve2D::circle(1.0).unwrap());
        let p = nearest_boundary_point(&b, &p2(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(p.sample.t().unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.distance, 1.0, epsilon = 1e-14);
        assert_eq!(p.side, Side::Exterior);

        let p = nearest_boundary_point(&b, &p2(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(p.distance, 0.5, epsilon = 1e-14);
        assert_eq!(p.side, Side::Interior);

        assert!(matches!(
            nearest_boundary_point(&b, &p2(1.0, 0.0)),
            Err(Error::OnBoundary { .. })
        ));
    }

    #[test]
    fn kite_round_trip() {
        let kite = Curve2D::kite();
        let s = kite.sample(1.0);
        let x = offset_point(&s, 0.01, Side::Exterior).unwrap();
        let p = nearest_boundary_point(&Boundary::Curve(kite), &x).unwrap();
        assert_abs_diff_eq!(p.sample.t().unwrap(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(p.distance, 0.01, epsilon = 1e-8);
        assert_eq!(p.side, Side::Exterior);
    }

    #[test]
    fn rotation_to_pole() {
        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let north = sph.sample_toward(&Point::new(0.0, 0.0, 5.0)).unwrap();
        let f = rotate_to_pole(&sph, &north).unwrap();
        assert_eq!(f.rotation, Matrix3::identity());

        let east = sph.sample_toward(&Point::new(3.0, 0.0, 0.0)).unwrap();
        let f = rotate_to_pole(&sph, &east).unwrap();
        let img = f.rotation * Point::x();
        assert_abs_diff_eq!((img - Point::z()).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.rotation.determinant(), 1.0, epsilon = 1e-14);
        let v = Point::new(0.3, -1.2, 0.7);
        assert_abs_diff_eq!((f.rotation * v).norm(), v.norm(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            (f.point(0.0, 0.3) - east.point).norm(),
            0.0,
            epsilon = 1e-14
        );

        let south = sph.sample_toward(&Point::new(0.0, 0.0, -1.0)).unwrap();
        let f = rotate_to_pole(&sph, &south).unwrap();
        assert_abs_diff_eq!(
            (f.point(0.0, 0.0) - south.point).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn point_a_to_pole() {
        let sph = Surface3D::sphere(Point::zeros(), 2.0).unwrap();
        let a = Point::new(-0.0065, -0.0327, 1.9997);
        let xs = sph.sample_toward(&a).unwrap();
        let f = rotate_to_pole(&sph, &xs).unwrap();
        let img = f.rotation * a.normalize();
        assert_abs_diff_eq!((img - Point::z()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn shape_grammar() {
        for s in [
            "circle:1.5",
            "kite",
            "star",
            "sphere:2",
            "fourier:[1,0.1,0.05;0.02]",
        ] {
            let spec: ShapeSpec = s.parse().unwrap();
            let back: ShapeSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, back);
        }
        assert!("circle:-1".parse::<ShapeSpec>().is_err());
        assert!("circle:nan".parse::<ShapeSpec>().is_err());
        assert!("blob".parse::<ShapeSpec>().is_err());
        assert!("fourier:[0.1,1.0]".parse::<ShapeSpec>().is_err());
    }

    #[test]
    fn contains_matches_side() {
        let star = Curve2D::star();
        assert!(star.contains(&p2(0.2, 0.8)));
        assert!(!star.contains(&p2(3.0, 0.0)));
    }
}
