use crate::error::{Error, Result};

/// An `N`-point Gauss–Legendre rule on `(-1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GLRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GLRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `(a, b)` with the affinely mapped rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * f(mid + half * z))
            .sum::<f64>()
            * half
    }
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule.
///
/// Roots of `P_n` are found by Newton iteration from Chebyshev-like initial
/// guesses; the rule is exactly symmetric about the origin.
pub fn gauss_legendre(n: usize) -> Result<GLRule> {
    if n == 0 || n > 512 {
        return Err(Error::domain(format!(
            "Gauss-Legendre order must lie in 1..=512, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // the middle node is exactly zero
        nodes[n / 2] = 0.0;
    }
    Ok(GLRule { nodes, weights })
}
