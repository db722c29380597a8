//! Composite Gauss–Legendre quadrature with panel doubling.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Nodes per panel.
pub const GAUSS_ORDER: usize = 20;
/// Default stopping tolerance on successive panel-doubling estimates.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const MAX_PANELS: usize = 1 << 14;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, found by Newton
/// iteration on `P_n` from Chebyshev initial guesses.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..(order + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

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
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over `[a, b]`, doubling the number of equal panels until
/// two successive estimates differ by less than `tolerance`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let (nodes, weights) = gauss_legendre(GAUSS_ORDER);
    let estimate = |panels: usize| -> f64 {
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let s: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * f(mid + half * x))
                .sum();
            total += half * s;
        }
        total
    };
    let mut panels = 1;
    let mut previous = estimate(panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let current = estimate(panels);
        let diff = (current - previous).abs();
        if diff < tolerance {
            return Ok(current);
        }
        if !current.is_finite() {
            break;
        }
        previous = current;
    }
    Err(Error::NumericalFailure {
        what: "Gauss-Legendre panel doubling",
        residual: previous,
    })
}

/// Integral over one period `(-π, π]`.
pub fn integrate_periodic(f: impl Fn(f64) -> f64, tolerance: f64) -> Result<f64> {
    integrate(f, -PI, PI, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights() {
        let (x, w) = gauss_legendre(GAUSS_ORDER);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        // Exact for polynomials up to degree 2n - 1.
        let moment: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((moment - 2.0 / 39.0).abs() < 1e-14);
        let (x3, w3) = gauss_legendre(3);
        assert!((x3[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((w3[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_integrals() {
        let v = integrate(|x| x.exp(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        let v = integrate_periodic(|t| (t.cos()).exp(), 1e-13).unwrap();
        // 2π I_0(1)
        assert!((v - 2.0 * PI * 1.266_065_877_752_008_4).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_fails() {
        let err = integrate(|x| 1.0 / x, -1.0, 1.0 + 1e-9, 1e-12);
        assert!(err.is_err());
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
