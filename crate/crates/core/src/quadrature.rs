//! Summation and quadrature primitives.
//!
//! Every reduction here runs in a fixed order so repeated calls are bitwise
//! reproducible.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (tree) sum of real values in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise (tree) sum of complex values in index order.
pub fn pairwise_sum_c(values: &[C64]) -> C64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().fold(C64::new(0.0, 0.0), |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum_c(&values[..mid]) + pairwise_sum_c(&values[mid..])
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let terms: Vec<f64> = self.mapped(a, b).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// Periodic trapezoid rule over [0, 2π) with `n` equispaced samples.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(n: usize, mut f: F) -> f64 {
    let h = 2.0 * PI / n as f64;
    let values: Vec<f64> = (0..n).map(|k| f(h * k as f64)).collect();
    h * pairwise_sum(&values)
}

/// Stopping rule for [`adaptive_periodic_trapezoid`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrapezoidControl {
    pub initial_samples: usize,
    pub max_samples: usize,
    pub rel_tol: f64,
}

impl Default for TrapezoidControl {
    fn default() -> Self {
        Self {
            initial_samples: 2048,
            max_samples: 1 << 20,
            rel_tol: 1e-10,
        }
    }
}

/// Periodic trapezoid over [0, 2π), doubling the sample count until two
/// successive estimates differ by less than `rel_tol * (1 + |estimate|)`.
///
/// Earlier samples are reused on each doubling.
pub fn adaptive_periodic_trapezoid<F: FnMut(f64) -> f64>(
    control: &TrapezoidControl,
    mut f: F,
) -> Result<f64> {
    let mut n = control.initial_samples.max(1);
    let mut h = 2.0 * PI / n as f64;
    let values: Vec<f64> = (0..n).map(|k| f(h * k as f64)).collect();
    let mut total = pairwise_sum(&values);
    let mut estimate = h * total;
    loop {
        if 2 * n > control.max_samples {
            return Err(Error::NoConvergence {
                max_samples: control.max_samples,
            });
        }
        let fresh: Vec<f64> = (0..n).map(|k| f(h * (k as f64 + 0.5))).collect();
        total += pairwise_sum(&fresh);
        n *= 2;
        h = 2.0 * PI / n as f64;
        let refined = h * total;
        if (refined - estimate).abs() < control.rel_tol * (1.0 + refined.abs()) {
            return Ok(refined);
        }
        estimate = refined;
    }
}
