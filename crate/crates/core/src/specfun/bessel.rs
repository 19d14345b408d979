//! Bessel functions `J0, J1, Y0, Y1` and Hankel functions of the first kind
//! for real positive arguments.
//!
//! Below `ASYMPTOTIC_SWITCH` the `J_n` sequence comes from Miller's backward
//! recurrence normalised by `J0 + 2 Σ J_2k = 1`, and `Y0`, `Y1` from the
//! Neumann series built on that sequence. Above it the Hankel asymptotic
//! expansion is summed until its terms stop decreasing.

use super::EULER_GAMMA;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const ASYMPTOTIC_SWITCH: f64 = 20.0;

/// Values of the order-0 and order-1 Bessel functions at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselJY {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BesselJY {
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

/// `J0, J1, Y0, Y1` at `z > 0`.
pub fn bessel_jy01(z: f64) -> Result<BesselJY> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "Bessel argument must be finite and positive, got {z}"
        )));
    }
    Ok(if z < ASYMPTOTIC_SWITCH {
        miller_neumann(z)
    } else {
        hankel_asymptotic(z)
    })
}

/// `H^(1)_order(z) = J_order(z) + i Y_order(z)` for `order ∈ {0, 1}`.
pub fn hankel1(order: u32, z: f64) -> Result<Complex64> {
    let b = bessel_jy01(z)?;
    match order {
        0 => Ok(b.h0()),
        1 => Ok(b.h1()),
        _ => Err(Error::domain(format!(
            "only Hankel orders 0 and 1 are supported, got {order}"
        ))),
    }
}

fn miller_neumann(z: f64) -> BesselJY {
    // start index, even, well past the turning point n ≈ z
    let mut m = (z + 45.0 + 4.0 * z.cbrt()) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut f = vec![0.0f64; m + 2];
    f[m] = 1e-30;
    let two_over_z = 2.0 / z;
    for n in (1..=m).rev() {
        f[n - 1] = n as f64 * two_over_z * f[n] - f[n + 1];
        if f[n - 1].abs() > 1e250 {
            for v in f[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = f[0] + 2.0 * f.iter().skip(2).step_by(2).sum::<f64>();
    let j: Vec<f64> = f.iter().map(|v| v / norm).collect();

    let log_term = (0.5 * z).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k <= m {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
        k += 1;
    }
    let y0 = 2.0 / PI * (log_term * j[0] - 2.0 * s0);
    let y1 = 2.0 / PI * (log_term * j[1] - j[0] / z + s1);
    BesselJY {
        j0: j[0],
        j1: j[1],
        y0,
        y1,
    }
}

/// Sums the Hankel asymptotic series `P_ν`, `Q_ν`.
fn asymptotic_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * z);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        // k = 1 → Q, k = 2 → -P, k = 3 → -Q, k = 4 → +P, ...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn hankel_asymptotic(z: f64) -> BesselJY {
    let amp = (2.0 / (PI * z)).sqrt();
    let (sz, cz) = z.sin_cos();
    // e^{iz} e^{-iπ/4} and e^{iz} e^{-3iπ/4}
    let e0 = Complex64::new(cz, sz) * Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2);
    let e1 = Complex64::new(cz, sz) * Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2);
    let (p0, q0) = asymptotic_pq(0.0, z);
    let (p1, q1) = asymptotic_pq(1.0, z);
    let h0 = amp * Complex64::new(p0, q0) * e0;
    let h1 = amp * Complex64::new(p1, q1) * e1;
    BesselJY {
        j0: h0.re,
        j1: h1.re,
        y0: h0.im,
        y1: h1.im,
    }
}
