//! Dense complex linear systems, solved by LU with partial pivoting.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Square dense system `A x = b`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
}

/// Diagnostics reported with every solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    /// `|A x - b| / |b|` (absolute when `b = 0`).
    pub residual: f64,
    /// 1-norm condition number estimate.
    pub condition: f64,
    pub warnings: Vec<String>,
}

impl LinearSystem {
    pub fn new(matrix: DMatrix<Complex64>, rhs: DVector<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != rhs.len() {
            return Err(Error::usage(format!(
                "system shape mismatch: {}x{} matrix, rhs of length {}",
                matrix.nrows(),
                matrix.ncols(),
                rhs.len()
            )));
        }
        Ok(LinearSystem { matrix, rhs })
    }

    /// Builds the matrix from a row-major buffer.
    pub fn from_rows(n: usize, rows: &[Complex64], rhs: Vec<Complex64>) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::usage("row buffer has the wrong length"));
        }
        Self::new(DMatrix::from_row_slice(n, n, rows), DVector::from_vec(rhs))
    }

    pub fn solve(&self) -> Result<(Vec<Complex64>, SolveReport)> {
        let n = self.matrix.nrows();
        let lu = self.matrix.clone().lu();
        let condition = condition_estimate(&self.matrix, &lu);
        let x = lu.solve(&self.rhs).ok_or_else(|| Error::Solver {
            reason: "matrix is singular".into(),
            condition,
        })?;
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) || !condition.is_finite() {
            return Err(Error::Solver {
                reason: "non-finite solution".into(),
                condition,
            });
        }
        let r = &self.matrix * &x - &self.rhs;
        let bnorm = self.rhs.norm();
        let residual = if bnorm > 0.0 {
            r.norm() / bnorm
        } else {
            r.norm()
        };
        let mut warnings = Vec::new();
        if condition > 1e12 {
            warnings.push(format!(
                "ill-conditioned system (condition ≈ {condition:.3e})"
            ));
        }
        if residual > 1e-11 {
            warnings.push(format!("solve residual {residual:.3e} exceeds 1e-11"));
        }
        for w in &warnings {
            log::warn!("{w} (n = {n})");
        }
        Ok((
            x.iter().copied().collect(),
            SolveReport {
                residual,
                condition,
                warnings,
            },
        ))
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Hager's estimate of `|A|_1 |A^{-1}|_1`.
fn condition_estimate(
    a: &DMatrix<Complex64>,
    lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    let adj_lu = a.adjoint().lu();
    let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    for _ in 0..5 {
        let Some(y) = lu.solve(&x) else {
            return f64::INFINITY;
        };
        est = y.iter().map(|v| v.norm()).sum::<f64>();
        let xi = y.map(|v| {
            let m = v.norm();
            if m > 0.0 {
                v / m
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let Some(z) = adj_lu.solve(&xi) else {
            return f64::INFINITY;
        };
        let (j, zmax) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        let zx = z.dotc(&x).re;
        if zmax <= zx {
            break;
        }
        x = DVector::from_element(n, Complex64::new(0.0, 0.0));
        x[j] = Complex64::new(1.0, 0.0);
    }
    est * one_norm(a)
}
