//! JSON experiment configuration.

use crate::error::{Error, Result};
use crate::potentials::Mode;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    #[default]
    LaplaceIntDirichlet,
    LaplaceExtNeumann,
    HelmholtzScatter,
}

/// How the density is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Plain trapezoid Nyström for the 2D Laplace equations.
    Ptr,
    /// Kress product quadrature for the 2D combined-field equation.
    Kress,
    /// Plane-wave subtracted Helmholtz equation (2D Nyström or 3D Galerkin).
    BiePws,
    /// Spherical-harmonic Galerkin in 3D.
    Galerkin,
}

impl Backend {
    pub const ALL: [Backend; 4] = [
        Backend::Ptr,
        Backend::Kress,
        Backend::BiePws,
        Backend::Galerkin,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Ptr => "ptr",
            Backend::Kress => "kress",
            Backend::BiePws => "bie-pws",
            Backend::Galerkin => "galerkin",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown backend '{s}'")))
    }
}

pub(crate) fn parse_mode(s: &str) -> Result<Mode> {
    Ok(match s {
        "standard" | "method" => Mode::Standard,
        "gauss-sub" => Mode::GaussSub,
        "dsl" => Mode::Dsl,
        "dsg" => Mode::Dsg,
        "pws" => Mode::Pws,
        other => return Err(Error::Config(format!("unknown method '{other}'"))),
    })
}

/// Field grid over a box in the `x1, x2` plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub resolution: usize,
    /// Relative growth of the shape's bounding box when `bbox` is absent.
    pub inflate: f64,
    /// `[[x1_min, x2_min], [x1_max, x2_max]]`.
    pub bbox: Option<[[f64; 2]; 2]>,
    /// Height of the slice for 3D shapes.
    pub x3: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 200,
            inflate: 0.5,
            bbox: None,
            x3: None,
        }
    }
}

/// Scan along the normal at one boundary point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    /// Curve parameter of the anchor (2D).
    pub tstar: Option<f64>,
    /// Surface parameters `(s, t)` of the anchor (3D).
    pub param: Option<[f64; 2]>,
    /// Any point; the anchor is its projection on the boundary.
    pub point: Option<Vec<f64>>,
    /// Explicit distances; otherwise `count` log-spaced values in `[ell_min, ell_max]`.
    pub ells: Option<Vec<f64>>,
    pub count: Option<usize>,
    pub ell_min: Option<f64>,
    pub ell_max: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KSweepSpec {
    pub ks: Option<Vec<f64>>,
    /// Anchors as curve parameters (2D).
    pub tstars: Option<Vec<f64>>,
    /// Anchors as points projected on the boundary.
    pub points: Option<Vec<Vec<f64>>>,
    pub ells: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityFamily {
    Laplace,
    Helmholtz,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySpec {
    pub family: IdentityFamily,
    pub ns: Vec<usize>,
}

impl Default for IdentitySpec {
    fn default() -> Self {
        IdentitySpec {
            family: IdentityFamily::All,
            ns: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub problem: ProblemKind,
    pub shape: String,
    #[serde(rename = "N", alias = "n", default)]
    pub n: usize,
    #[serde(default)]
    pub k: Option<f64>,
    /// Source point of the exact solution.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    /// Evaluation modes, optionally with `@backend`, and bare backend names.
    #[serde(default)]
    pub methods: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub density_cache: Option<PathBuf>,
    /// Order of the rotated inner rule of the 3D Galerkin solver.
    #[serde(default)]
    pub inner_order: Option<usize>,
    /// Order of the rotated rule used to evaluate 3D potentials.
    #[serde(default)]
    pub eval_order: Option<usize>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub scan: ScanSpec,
    #[serde(default)]
    pub ksweep: KSweepSpec,
    #[serde(default)]
    pub identity: IdentitySpec,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemKind, shape: &str, n: usize) -> Self {
        ExperimentConfig {
            problem,
            shape: shape.to_string(),
            n,
            k: None,
            x0: None,
            methods: Vec::new(),
            out: None,
            seed: 0,
            density_cache: None,
            inner_order: None,
            eval_order: None,
            grid: GridSpec::default(),
            scan: ScanSpec::default(),
            ksweep: KSweepSpec::default(),
            identity: IdentitySpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_x0(mut self, x0: &[f64]) -> Self {
        self.x0 = Some(x0.to_vec());
        self
    }

    pub fn with_methods(mut self, methods: &[&str]) -> Self {
        self.methods = methods.iter().map(|s| s.to_string()).collect();
        self
    }
}

/// `count` log-spaced values in `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi >= lo) || count == 0 {
        return Err(Error::Config(format!(
            "bad log range [{lo}, {hi}] with {count} points"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect())
}
