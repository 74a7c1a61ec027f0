//! The Bessel-ratio functions that govern stationary synchronization.
//!
//! ```text
//! V(x) = ∫ cos θ e^{x cos θ} dθ / ∫ e^{x cos θ} dθ  = I1(x) / I0(x)
//! W(x) = 2 V(x) / x
//! ```
//!
//! `V` is evaluated directly from its two circle integrals. The exponent is
//! shifted by `-x` so the integrands never exceed one, and the numerator is
//! written as `cos θ sinh(x cos θ)` (the `cosh` part integrates to zero), which
//! keeps every node non-negative and gives full relative precision for tiny
//! `x`. The periodic trapezoid rule is refined by doubling until two
//! successive levels agree.
//!
//! Odd/even symmetry is exact: every function evaluates at `|x|` and then
//! applies the sign.

use std::f64::consts::PI;

use crate::error::{domain, ensure_finite, Result};

/// Below this magnitude `W` and `V'` use their Taylor series about zero.
pub const SERIES_THRESHOLD: f64 = 1e-4;
/// Above this magnitude `V` uses its large-argument expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 500.0;
/// Below this magnitude `V''` uses its Taylor series; the closed form
/// cancels catastrophically near zero.
const SECOND_DERIVATIVE_SERIES: f64 = 0.05;
/// Relative agreement between two refinement levels of the quadrature.
const QUADRATURE_TOL: f64 = 1e-12;
const MAX_HALF_INTERVALS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub est_abs_error: f64,
}

/// `V(x)` with an estimate of its absolute error.
pub fn eval_v_detailed(x: f64) -> Result<EvalResult> {
    ensure_finite("x", x)?;
    let r = v_nonneg(x.abs());
    Ok(EvalResult {
        value: if x < 0.0 { -r.value } else { r.value },
        est_abs_error: r.est_abs_error,
    })
}

pub fn eval_v(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(v(x))
}

pub fn eval_w(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(w(x))
}

pub fn eval_v_prime(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(v_prime(x))
}

pub fn eval_v_double_prime(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(v_double_prime(x))
}

/// Inverse of `V` on `[0, 1)`.
///
/// The bracket comes from `x/(2+x) ≤ V(x) ≤ 2x/(1+2x)`, which pins the root
/// to `[y/(2(1-y)), 2y/(1-y)]`. Newton steps using the closed-form `V'` are
/// taken inside the bracket, with bisection whenever a step would leave it.
pub fn invert_v(y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return domain(format!("invert_v needs 0 <= y < 1, got {y}"));
    }
    Ok(v_inverse_unchecked(y))
}

pub(crate) fn v(x: f64) -> f64 {
    let r = v_nonneg(x.abs()).value;
    if x < 0.0 {
        -r
    } else {
        r
    }
}

pub(crate) fn w(x: f64) -> f64 {
    let a = x.abs();
    if a < SERIES_THRESHOLD {
        let a2 = a * a;
        1.0 - a2 / 8.0 + a2 * a2 / 48.0
    } else {
        2.0 * v_nonneg(a).value / a
    }
}

pub(crate) fn v_prime(x: f64) -> f64 {
    let a = x.abs();
    if a < SERIES_THRESHOLD {
        let a2 = a * a;
        return 0.5 - 3.0 * a2 / 16.0 + 5.0 * a2 * a2 / 96.0;
    }
    let va = v_nonneg(a).value;
    v_prime_from(a, va)
}

pub(crate) fn v_double_prime(x: f64) -> f64 {
    let a = x.abs();
    let r = if a < SECOND_DERIVATIVE_SERIES {
        let a2 = a * a;
        a * (-3.0 / 8.0
            + a2 * (5.0 / 24.0
                + a2 * (-77.0 / 1024.0
                    + a2 * (57.0 / 2560.0
                        + a2 * (-5203.0 / 884_736.0 + a2 * 2977.0 / 2_064_384.0)))))
    } else {
        let va = v_nonneg(a).value;
        v_double_prime_from(a, va)
    };
    if x < 0.0 {
        -r
    } else {
        r
    }
}

/// `V'(x) = 1 - V² - V/x` for `x > 0`, given `V(x)`.
fn v_prime_from(x: f64, vx: f64) -> f64 {
    (1.0 - vx) * (1.0 + vx) - vx / x
}

/// `V''(x) = 2V³ + 3V²/x + (2/x² - 2)V - 1/x` for `x > 0`, given `V(x)`.
fn v_double_prime_from(x: f64, vx: f64) -> f64 {
    2.0 * vx * vx * vx + 3.0 * vx * vx / x + (2.0 / (x * x) - 2.0) * vx - 1.0 / x
}

fn v_nonneg(x: f64) -> EvalResult {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return EvalResult {
            value: 0.0,
            est_abs_error: 0.0,
        };
    }
    if x > ASYMPTOTIC_THRESHOLD {
        return v_asymptotic(x);
    }
    v_quadrature(x)
}

/// `1 - V(x) = 1/(2x) + 1/(8x²) + 1/(8x³) + 25/(128x⁴) + 13/(32x⁵) + O(x⁻⁶)`.
fn v_asymptotic(x: f64) -> EvalResult {
    let t = 1.0 / x;
    let tail = t * (0.5 + t * (0.125 + t * (0.125 + t * (25.0 / 128.0 + t * 13.0 / 32.0))));
    EvalResult {
        value: 1.0 - tail,
        est_abs_error: t.powi(6),
    }
}

/// Trapezoid rule on the half circle `[0, π]`; by the symmetry `θ → -θ` this
/// equals the periodic rule on the full circle with twice the intervals.
fn v_quadrature(x: f64) -> EvalResult {
    let shift = (-x).exp();
    let node = |theta: f64| -> (f64, f64) {
        let c = theta.cos();
        (c * (x * c).sinh() * shift, (x * (c - 1.0)).exp())
    };

    let mut m = 8usize;
    let (n0, d0) = node(0.0);
    let (npi, dpi) = node(PI);
    let mut num = 0.5 * (n0 + npi);
    let mut den = 0.5 * (d0 + dpi);
    for j in 1..m {
        let (a, b) = node(PI * j as f64 / m as f64);
        num += a;
        den += b;
    }
    let mut value = num / den;
    loop {
        let finer = 2 * m;
        for j in (1..finer).step_by(2) {
            let (a, b) = node(PI * j as f64 / finer as f64);
            num += a;
            den += b;
        }
        m = finer;
        let next = num / den;
        let change = (next - value).abs();
        value = next;
        if change <= QUADRATURE_TOL * next || m >= MAX_HALF_INTERVALS {
            return EvalResult {
                value,
                est_abs_error: change,
            };
        }
    }
}

pub(crate) fn v_inverse_unchecked(y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let one_minus = 1.0 - y;
    let mut lo = 0.5 * y / one_minus;
    let mut hi = 2.0 * y / one_minus;
    // Exact at both ends of [0, 1): 2y near zero, 1/(2(1-y)) near one.
    let mut x = (y * (4.0 - 3.0 * y) / (2.0 * one_minus)).clamp(lo, hi);
    for _ in 0..200 {
        let vx = v_nonneg(x).value;
        let f = vx - y;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = v_prime_from(x, vx);
        let mut next = x - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * hi {
            return next;
        }
        x = next;
    }
    x
}
