//! Evaluation reports and their CSV layouts.

use crate::error::Result;
use crate::geometry::{Dim, Point, Side};
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug)]
pub struct EvalRow {
    pub x: Point,
    pub xstar: Point,
    pub ell: f64,
    pub side: Side,
    /// One value per method, in report order.
    pub values: Vec<Complex64>,
    pub exact: Complex64,
    pub errors: Vec<f64>,
}

impl EvalRow {
    pub fn new(
        x: Point,
        xstar: Point,
        ell: f64,
        side: Side,
        values: Vec<Complex64>,
        exact: Complex64,
    ) -> Self {
        let errors = values.iter().map(|v| (v - exact).norm()).collect();
        EvalRow {
            x,
            xstar,
            ell,
            side,
            values,
            exact,
            errors,
        }
    }
}

/// Run metadata, written next to the CSV as JSON.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunMeta {
    pub problem: String,
    pub shape: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: Option<f64>,
    pub seed: u64,
    pub methods: Vec<String>,
    pub solve_seconds: f64,
    pub eval_seconds: f64,
    /// Grid points dropped because they sit on the boundary.
    pub skipped: usize,
    /// Grid points on the other side of the boundary.
    pub masked: usize,
    /// `(backend, residual, condition estimate)` of every solve.
    pub solves: Vec<(String, f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub methods: Vec<String>,
    pub dim: Dim,
    pub rows: Vec<EvalRow>,
    pub meta: RunMeta,
}

fn coords(dim: Dim, x: &Point) -> Vec<String> {
    let n = dim.value();
    x.iter().take(n).map(|v| v.to_string()).collect()
}

impl EvalReport {
    pub fn method_index(&self, name: &str) -> Option<usize> {
        self.methods.iter().position(|m| m == name)
    }

    /// Largest error of `method` over rows accepted by `keep`.
    pub fn max_error<F: Fn(&EvalRow) -> bool>(&self, method: &str, keep: F) -> Option<f64> {
        let i = self.method_index(method)?;
        self.rows
            .iter()
            .filter(|r| keep(r))
            .map(|r| r.errors[i])
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
    }

    fn tail_header(&self) -> Vec<String> {
        let mut h = Vec::new();
        for m in &self.methods {
            h.push(format!("re_{m}"));
            h.push(format!("im_{m}"));
        }
        h.extend(["re_exact", "im_exact"].map(String::from));
        h
    }

    fn tail(&self, r: &EvalRow) -> Vec<String> {
        let mut out = Vec::new();
        for v in &r.values {
            out.push(v.re.to_string());
            out.push(v.im.to_string());
        }
        out.push(r.exact.re.to_string());
        out.push(r.exact.im.to_string());
        out
    }

    fn errs_header(&self, prefix: &str) -> Vec<String> {
        self.methods
            .iter()
            .map(|m| format!("{prefix}{m}"))
            .collect()
    }

    /// `ell, err_<method>...` followed by values, exact value and coordinates.
    pub fn write_scan_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let xs = ["x1", "x2", "x3"];
        let mut h = vec!["ell".to_string()];
        h.extend(self.errs_header("err_"));
        h.extend(self.tail_header());
        h.extend(xs.iter().take(self.dim.value()).map(|s| s.to_string()));
        w.write_record(&h)?;
        for r in &self.rows {
            let mut rec = vec![r.ell.to_string()];
            rec.extend(r.errors.iter().map(|e| e.to_string()));
            rec.extend(self.tail(r));
            rec.extend(coords(self.dim, &r.x));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `x1, x2[, x3], side, ell, err_<method>...` followed by values and
    /// the exact value.
    pub fn write_field_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut h: Vec<String> = ["x1", "x2", "x3"]
            .iter()
            .take(self.dim.value())
            .map(|s| s.to_string())
            .collect();
        h.push("side".into());
        h.push("ell".into());
        h.extend(self.errs_header("err_"));
        h.extend(self.tail_header());
        w.write_record(&h)?;
        for r in &self.rows {
            let mut rec = coords(self.dim, &r.x);
            rec.push(r.side.to_string());
            rec.push(r.ell.to_string());
            rec.extend(r.errors.iter().map(|e| e.to_string()));
            rec.extend(self.tail(r));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_meta(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(f, &self.meta)?;
        Ok(())
    }
}

/// Maximum error per method for each wavenumber.
#[derive(Clone, Debug)]
pub struct KSweepReport {
    pub methods: Vec<String>,
    pub ks: Vec<f64>,
    /// `maxerr[i][j]` for wavenumber `i` and method `j`.
    pub maxerr: Vec<Vec<f64>>,
}

impl KSweepReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut h = vec!["k".to_string()];
        h.extend(self.methods.iter().map(|m| format!("maxerr_{m}")));
        w.write_record(&h)?;
        for (k, errs) in self.ks.iter().zip(&self.maxerr) {
            let mut rec = vec![k.to_string()];
            rec.extend(errs.iter().map(|e| e.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn column(&self, method: &str) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|m| m == method)?;
        Some(self.maxerr.iter().map(|r| r[j]).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRow {
    pub case: String,
    pub region: String,
    pub n: usize,
    pub residual: f64,
}

pub fn write_identity_csv(rows: &[IdentityRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["case", "region", "N", "residual"])?;
    for r in rows {
        w.write_record([
            r.case.clone(),
            r.region.clone(),
            r.n.to_string(),
            r.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
