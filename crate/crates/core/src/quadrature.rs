//! Periodic trapezoid quadrature on the circle.
//!
//! For smooth 2π-periodic integrands the equally weighted trapezoid sum
//! converges faster than any power of the node spacing, so halving the
//! spacing until two successive sums agree gives close to machine precision.

use std::f64::consts::PI;

const START_NODES: usize = 16;
const MAX_NODES: usize = 1 << 20;

/// Result of an adaptive circle integral with several components sharing the same nodes.
#[derive(Debug, Clone, Copy)]
pub struct CircleIntegral<const N: usize> {
    pub values: [f64; N],
    pub nodes: usize,
    /// Largest absolute change between the final two refinement levels.
    pub last_change: f64,
}

/// Integrates the components of `f` over `[0, 2π)` with node doubling.
///
/// Refinement stops once every component changes by at most
/// `abs_tol + rel_tol * |value|` between two successive levels.
pub fn integrate_circle<const N: usize, F>(f: F, abs_tol: f64, rel_tol: f64) -> CircleIntegral<N>
where
    F: Fn(f64) -> [f64; N],
{
    let mut nodes = START_NODES;
    let mut sums = [0.0; N];
    for j in 0..nodes {
        let v = f(2.0 * PI * j as f64 / nodes as f64);
        for c in 0..N {
            sums[c] += v[c];
        }
    }
    let mut values = scale(&sums, 2.0 * PI / nodes as f64);
    loop {
        let finer = nodes * 2;
        for j in (1..finer).step_by(2) {
            let v = f(2.0 * PI * j as f64 / finer as f64);
            for c in 0..N {
                sums[c] += v[c];
            }
        }
        let next = scale(&sums, 2.0 * PI / finer as f64);
        let mut change: f64 = 0.0;
        let mut done = true;
        for c in 0..N {
            let d = (next[c] - values[c]).abs();
            change = change.max(d);
            if d > abs_tol + rel_tol * next[c].abs() {
                done = false;
            }
        }
        nodes = finer;
        values = next;
        if done || nodes >= MAX_NODES {
            return CircleIntegral {
                values,
                nodes,
                last_change: change,
            };
        }
    }
}

fn scale<const N: usize>(sums: &[f64; N], h: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for c in 0..N {
        out[c] = sums[c] * h;
    }
    out
}

/// Trapezoid integral of samples taken on a uniform periodic grid of `[0, 2π)`.
pub fn periodic_sum(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() * 2.0 * PI / values.len() as f64
}

/// Uniform periodic grid `θ_j = 2πj/n`, `j = 0..n`.
pub fn circle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}
