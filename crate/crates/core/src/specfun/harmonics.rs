//! Orthonormal complex spherical harmonics with the Condon–Shortley phase.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_DEGREE: usize = 64;

/// Flat index of `(n, m)` in the degree-major ordering `n² + n + m`.
#[inline]
pub fn sh_index(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

/// Normalised associated Legendre values `P̄_n^m(cos θ)` for `0 ≤ m ≤ n < nmax`,
/// stored at `n(n+1)/2 + m`. Scaled so that `Y_nm = P̄_n^m e^{imφ}`.
fn normalized_legendre(nmax: usize, theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let tri = |n: usize, m: usize| n * (n + 1) / 2 + m;
    let mut p = vec![0.0; nmax * (nmax + 1) / 2];
    if nmax == 0 {
        return p;
    }
    p[0] = 0.5 / PI.sqrt();
    for m in 0..nmax {
        if m > 0 {
            let mf = m as f64;
            p[tri(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[tri(m - 1, m - 1)];
        }
        if m + 1 < nmax {
            p[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * c * p[tri(m, m)];
        }
        for n in (m + 2)..nmax {
            let nf = n as f64;
            let mf = m as f64;
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
            let a_prev = ((4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)
                / ((nf - 1.0) * (nf - 1.0) - mf * mf))
                .sqrt();
            p[tri(n, m)] = a * (c * p[tri(n - 1, m)] - p[tri(n - 2, m)] / a_prev);
        }
    }
    p
}

/// `Y_nm(θ, φ)` for a single degree and order.
pub fn sph_harm(n: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if n > MAX_DEGREE {
        return Err(Error::domain(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    if m.unsigned_abs() as usize > n {
        return Err(Error::domain(format!("|m| = {} exceeds n = {n}", m.abs())));
    }
    let all = sph_harm_all(n + 1, theta, phi);
    Ok(all[sh_index(n, m)])
}

/// All `Y_nm(θ, φ)` with `n < nmax`, in the order given by [`sh_index`].
pub fn sph_harm_all(nmax: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let p = normalized_legendre(nmax, theta);
    let mut out = vec![Complex64::new(0.0, 0.0); nmax * nmax];
    let tri = |n: usize, m: usize| n * (n + 1) / 2 + m;
    // e^{imφ} by repeated multiplication stays accurate for m ≤ 64
    let mut phases = Vec::with_capacity(nmax);
    let base = Complex64::from_polar(1.0, phi);
    let mut e = Complex64::new(1.0, 0.0);
    for m in 0..nmax {
        if m > 0 {
            e = if m % 8 == 0 {
                Complex64::from_polar(1.0, m as f64 * phi)
            } else {
                e * base
            };
        }
        phases.push(e);
    }
    for n in 0..nmax {
        for m in 0..=n {
            let v = p[tri(n, m)] * phases[m];
            out[sh_index(n, m as i64)] = v;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[sh_index(n, -(m as i64))] = sign * v.conj();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y00_is_constant() {
        for (t, p) in [(0.0, 0.0), (1.0, 2.0), (PI, -1.0)] {
            let y = sph_harm(0, 0, t, p).unwrap();
            assert!((y.re - 0.282_094_791_773_878_14).abs() < 1e-15);
            assert_eq!(y.im, 0.0);
        }
    }

    #[test]
    fn y10_at_north_pole() {
        let y = sph_harm(1, 0, 0.0, 0.3).unwrap();
        assert!((y.re - 0.488_602_511_902_919_9).abs() < 1e-15);
    }

    #[test]
    fn y11_matches_closed_form() {
        let (t, p) = (0.7, 1.3);
        let y = sph_harm(1, 1, t, p).unwrap();
        let expected = -(3.0 / (8.0 * PI)).sqrt() * t.sin() * Complex64::from_polar(1.0, p);
        assert!((y - expected).norm() < 1e-15);
        let ym = sph_harm(1, -1, t, p).unwrap();
        assert!((ym + expected.conj()).norm() < 1e-15);
    }

    #[test]
    fn addition_theorem() {
        for n in [0usize, 1, 5, 17, 40, 64] {
            let all = sph_harm_all(n + 1, 0.913, -2.2);
            let s: f64 = (-(n as i64)..=n as i64)
                .map(|m| all[sh_index(n, m)].norm_sqr())
                .sum();
            let expected = (2 * n + 1) as f64 / (4.0 * PI);
            assert!((s - expected).abs() < 1e-12 * expected.max(1.0), "n={n}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(sph_harm(2, 3, 0.1, 0.1).is_err());
        assert!(sph_harm(65, 0, 0.1, 0.1).is_err());
    }
}
