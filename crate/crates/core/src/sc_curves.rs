//! Self-consistency surfaces `h1`, `h2` and their zero sets `Γ1`, `Γ2`.
//!
//! ```text
//! h1(r1, r2) = V(K1 r1 + L1 r2) - r1        Γ1 = { h1 = 0 } ∩ [0,1]²
//! h2(r1, r2) = V(K2 r2 + L2 r1) - r2        Γ2 = { h2 = 0 } ∩ [0,1]²
//! ```
//!
//! Both curves share one shape in "local" coordinates: with `u` the curve's own
//! synchronization level and `w` the other community's, the curve is
//! `V(K u + L w) = u`. Because `V` is strictly increasing, every `u ∈ [0, 1)`
//! has exactly one `w`, namely `w(u) = (V⁻¹(u) - K u) / L`. Tracing is therefore
//! a closed-form evaluation of this graph; no continuation is needed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, Error, Result};
use crate::roots::bisect;
use crate::special_fn::{self, v, v_double_prime, v_prime};

/// Default number of grid points in the independent coordinate.
pub const DEFAULT_GRID: usize = 2001;
/// Largest `|h|` accepted for a point claimed to lie on a curve.
pub const ON_CURVE_TOL: f64 = 1e-9;

/// The four interaction strengths of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub k1: f64,
    pub k2: f64,
    pub l1: f64,
    pub l2: f64,
}

impl CouplingParams {
    pub fn new(k1: f64, k2: f64, l1: f64, l2: f64) -> Result<Self> {
        let p = Self { k1, k2, l1, l2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("K1", self.k1)?;
        ensure_finite("K2", self.k2)?;
        ensure_finite("L1", self.l1)?;
        ensure_finite("L2", self.l2)?;
        if self.l1 == 0.0 || self.l2 == 0.0 {
            return domain(format!(
                "L1 and L2 must be nonzero, got L1={}, L2={}",
                self.l1, self.l2
            ));
        }
        Ok(())
    }

    /// `(K, L)` seen by the given curve: `(K1, L1)` for Γ1, `(K2, L2)` for Γ2.
    pub fn coupling(&self, curve: Curve) -> (f64, f64) {
        match curve {
            Curve::Gamma1 => (self.k1, self.l1),
            Curve::Gamma2 => (self.k2, self.l2),
        }
    }

    /// The same parameters with both cross couplings negated; solutions with
    /// antiphase communities are the in-phase solutions of this set.
    pub fn with_negated_cross(&self) -> Self {
        Self {
            l1: -self.l1,
            l2: -self.l2,
            ..*self
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.k1, self.k2, self.l1, self.l2]
    }
}

impl fmt::Display for CouplingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(K1={}, K2={}, L1={}, L2={})",
            self.k1, self.k2, self.l1, self.l2
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    Gamma1,
    Gamma2,
}

impl Curve {
    pub fn label(self) -> &'static str {
        match self {
            Curve::Gamma1 => "Gamma1",
            Curve::Gamma2 => "Gamma2",
        }
    }

    /// Splits `(r1, r2)` into `(own, other)` coordinates for this curve.
    fn to_local(self, r1: f64, r2: f64) -> (f64, f64) {
        match self {
            Curve::Gamma1 => (r1, r2),
            Curve::Gamma2 => (r2, r1),
        }
    }

    fn to_global(self, own: f64, other: f64) -> CurveSample {
        match self {
            Curve::Gamma1 => CurveSample { r1: own, r2: other },
            Curve::Gamma2 => CurveSample { r1: other, r2: own },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub r1: f64,
    pub r2: f64,
}

/// Where a traced curve meets the boundary of the unit square.
///
/// `Top` and `Bottom` are stated in the curve's own orientation: for Γ1 they
/// are the points `(r, 1)` and `(r, 0)`, for Γ2 the points `(1, r)` and `(0, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Connection {
    /// The curve leaves the origin into the square.
    Origin,
    Top {
        r: f64,
    },
    Bottom {
        r: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    pub curve: Curve,
    /// Points on the curve ordered by the independent coordinate (r1 for Γ1,
    /// r2 for Γ2). Includes the refined boundary crossings. The origin is a
    /// sample only when the curve is connected to it.
    pub samples: Vec<CurveSample>,
    /// Boundary connections in order of the independent coordinate.
    pub connections: Vec<Connection>,
    /// Grid spacing in the independent coordinate.
    pub grid_step: f64,
}

impl CurveTrace {
    /// The origin solves every self-consistency equation; it is always on the curve.
    pub fn contains_origin(&self) -> bool {
        true
    }

    pub fn connected_to_origin(&self) -> bool {
        self.connections.contains(&Connection::Origin)
    }

    pub fn top_connections(&self) -> Vec<f64> {
        self.connections
            .iter()
            .filter_map(|c| match c {
                Connection::Top { r } => Some(*r),
                _ => None,
            })
            .collect()
    }

    pub fn bottom_connections(&self) -> Vec<f64> {
        self.connections
            .iter()
            .filter_map(|c| match c {
                Connection::Bottom { r } => Some(*r),
                _ => None,
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FundamentalCurveKind {
    /// `K ≤ 2, L > 0`: convex, runs from the origin to the top edge.
    ConvexConnectedZero,
    /// `K > 2, L > 0`: convex, runs from the bottom edge to the top edge.
    ConvexDisconnectedZero,
    /// `K > 2, L < 0`: concave with one turning point, origin to bottom edge.
    Parabola,
    /// `K ≤ 2, L < 0`: only the isolated origin.
    Trivial,
}

/// A point of zero slope on Γ1, stated as `(r1, r2)`. The point lies on the
/// analytic continuation of the curve and may fall above the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub r1: f64,
    pub r2: f64,
    pub inside_unit_square: bool,
}

fn check_square(r1: f64, r2: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r1) || !(0.0..=1.0).contains(&r2) {
        return domain(format!("(r1, r2) = ({r1}, {r2}) lies outside [0,1]²"));
    }
    Ok(())
}

/// `h1` or `h2` at `(r1, r2)`.
pub fn eval_h(curve: Curve, params: &CouplingParams, r1: f64, r2: f64) -> Result<f64> {
    params.validate()?;
    check_square(r1, r2)?;
    let (k, l) = params.coupling(curve);
    let (own, other) = curve.to_local(r1, r2);
    Ok(h_local(k, l, own, other))
}

pub(crate) fn h_local(k: f64, l: f64, own: f64, other: f64) -> f64 {
    v(k * own + l * other) - own
}

/// The other coordinate of the curve `V(K u + L w) = u` as a function of `u`.
/// Infinite at `u = 1`, where `V` never reaches.
pub(crate) fn graph_from_inverse(k: f64, l: f64, u: f64, v_inv: f64) -> f64 {
    (v_inv - k * u) / l
}

pub(crate) fn graph(k: f64, l: f64, u: f64) -> f64 {
    if u >= 1.0 {
        return f64::INFINITY * l.signum();
    }
    graph_from_inverse(k, l, u, special_fn::v_inverse_unchecked(u))
}

/// `V⁻¹` sampled on the uniform grid `i / (n-1)`, `i = 0..n`. The last entry
/// (`u = 1`) is `+∞`. Depends only on `n`, so it is computed once per size.
pub(crate) fn inverse_grid(n: usize) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("grid cache poisoned").get(&n) {
        return Arc::clone(g);
    }
    let step = 1.0 / (n - 1) as f64;
    let g: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                f64::INFINITY
            } else {
                special_fn::v_inverse_unchecked(i as f64 * step)
            }
        })
        .collect();
    let g = Arc::new(g);
    cache
        .lock()
        .expect("grid cache poisoned")
        .insert(n, Arc::clone(&g));
    g
}

pub(crate) fn grid_point(i: usize, n: usize) -> f64 {
    if i + 1 == n {
        1.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

/// Samples Γ1 or Γ2 on a uniform grid of its independent coordinate.
pub fn trace_curve(curve: Curve, params: &CouplingParams, n_grid: usize) -> Result<CurveTrace> {
    params.validate()?;
    if n_grid < 2 {
        return domain(format!("n_grid must be at least 2, got {n_grid}"));
    }
    let (k, l) = params.coupling(curve);
    let inv = inverse_grid(n_grid);
    let other: Vec<f64> = (0..n_grid)
        .map(|i| graph_from_inverse(k, l, grid_point(i, n_grid), inv[i]))
        .collect();
    let inside = |w: f64| (0.0..=1.0).contains(&w);

    let mut samples = Vec::new();
    let mut connections = Vec::new();
    if inside(other[1]) {
        connections.push(Connection::Origin);
        samples.push(curve.to_global(0.0, 0.0));
    }
    for i in 1..n_grid {
        let (u0, u1) = (grid_point(i - 1, n_grid), grid_point(i, n_grid));
        let (w0, w1) = (other[i - 1], other[i]);
        // Edges crossed between the two grid points, in order of u.
        let mut crossings: Vec<(f64, f64)> = Vec::new();
        for edge in [0.0, 1.0] {
            let crossed = (w0 - edge) * (w1 - edge) < 0.0 || (i > 1 && w0 != edge && w1 == edge);
            // At i == 1 the curve starts at the origin itself; that is not an edge crossing.
            if crossed && !(i == 1 && edge == 0.0 && w0 == 0.0) {
                let u = bisect(|u| graph(k, l, u) - edge, u0, u1);
                crossings.push((u, edge));
            }
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (u, edge) in crossings {
            samples.push(curve.to_global(u, edge));
            connections.push(if edge == 1.0 {
                Connection::Top { r: u }
            } else {
                Connection::Bottom { r: u }
            });
        }
        if inside(w1) && !(w1 == 0.0 || w1 == 1.0) {
            samples.push(curve.to_global(u1, w1));
        }
    }
    Ok(CurveTrace {
        curve,
        samples,
        connections,
        grid_step: 1.0 / (n_grid - 1) as f64,
    })
}

fn on_curve_local(
    curve: Curve,
    params: &CouplingParams,
    p: CurveSample,
) -> Result<(f64, f64, f64, f64)> {
    let h = eval_h(curve, params, p.r1, p.r2)?;
    if h.abs() > ON_CURVE_TOL {
        return Err(Error::Precondition(format!(
            "({}, {}) is not on {} (|h| = {:e})",
            p.r1,
            p.r2,
            curve.label(),
            h.abs()
        )));
    }
    let (k, l) = params.coupling(curve);
    let (own, other) = curve.to_local(p.r1, p.r2);
    Ok((k, l, own, other))
}

/// `dr2/dr1` along the curve through `p`.
///
/// Γ1: `(1 - K1 C)/(L1 C)`, Γ2: `L2 C/(1 - K2 C)` with `C = V'(argument of V)`.
/// A vanishing denominator (Γ2 at the origin with `K2 = 2`) gives `+∞`.
pub fn curve_slope(curve: Curve, params: &CouplingParams, p: CurveSample) -> Result<f64> {
    let (k, l, own, other) = on_curve_local(curve, params, p)?;
    let c = v_prime(k * own + l * other);
    Ok(match curve {
        Curve::Gamma1 => (1.0 - k * c) / (l * c),
        Curve::Gamma2 => {
            let den = 1.0 - k * c;
            if den == 0.0 {
                f64::INFINITY
            } else {
                l * c / den
            }
        }
    })
}

/// `d²r2/dr1²` along the curve through `p`.
///
/// Γ1: `-C'/(L1 C³)`, Γ2: `L2² C'/(1 - K2 C)³` with `C = V'`, `C' = V''`.
pub fn curve_curvature(curve: Curve, params: &CouplingParams, p: CurveSample) -> Result<f64> {
    let (k, l, own, other) = on_curve_local(curve, params, p)?;
    let x = k * own + l * other;
    let c = v_prime(x);
    let c2 = v_double_prime(x);
    Ok(match curve {
        Curve::Gamma1 => -c2 / (l * c * c * c),
        Curve::Gamma2 => {
            let den = 1.0 - k * c;
            if den == 0.0 {
                f64::INFINITY
            } else {
                l * l * c2 / (den * den * den)
            }
        }
    })
}

pub fn classify_fundamental_curve(k: f64, l: f64) -> Result<FundamentalCurveKind> {
    ensure_finite("K", k)?;
    ensure_finite("L", l)?;
    if l == 0.0 {
        return domain("L must be nonzero");
    }
    Ok(match (k > 2.0, l > 0.0) {
        (false, false) => FundamentalCurveKind::Trivial,
        (false, true) => FundamentalCurveKind::ConvexConnectedZero,
        (true, true) => FundamentalCurveKind::ConvexDisconnectedZero,
        (true, false) => FundamentalCurveKind::Parabola,
    })
}

/// The unique `r ∈ (0,1)` with `r = V(K r + L)`: where the curve meets the top edge.
pub fn top_connection(k: f64, l: f64) -> Result<f64> {
    ensure_finite("K", k)?;
    ensure_finite("L", l)?;
    if l <= 0.0 {
        return domain(format!("top connection needs L > 0, got {l}"));
    }
    Ok(bisect(|r| v(k * r + l) - r, 0.0, 1.0))
}

/// The positive root of `r = V(K r)` for `K > 2`: where the curve meets the bottom edge.
pub fn bottom_connection(k: f64) -> Option<f64> {
    if k.is_nan() || k <= 2.0 || k.is_infinite() {
        return None;
    }
    Some(bisect(|r| v(k * r) - r, 1e-12, 1.0))
}

/// Locates the zero of `dΓ1/dr1` for a parabola-shaped curve (`K > 2, L < 0`).
///
/// Scans `1 - K V'(V⁻¹(u))` on the default grid for its sign change and bisects it.
pub fn find_turning_point(k: f64, l: f64) -> Result<Option<TurningPoint>> {
    ensure_finite("K", k)?;
    ensure_finite("L", l)?;
    if !(k > 2.0 && l < 0.0) {
        return domain(format!(
            "turning points need K > 2 and L < 0, got K={k}, L={l}"
        ));
    }
    let n = DEFAULT_GRID;
    let inv = inverse_grid(n);
    let slope_numerator = |x: f64| 1.0 - k * v_prime(x);
    let mut prev = slope_numerator(inv[1]);
    for i in 2..n - 1 {
        let cur = slope_numerator(inv[i]);
        if prev < 0.0 && cur >= 0.0 {
            let u = bisect(
                |u| slope_numerator(special_fn::v_inverse_unchecked(u)),
                grid_point(i - 1, n),
                grid_point(i, n),
            );
            let w = graph(k, l, u);
            return Ok(Some(TurningPoint {
                r1: u,
                r2: w,
                inside_unit_square: (0.0..=1.0).contains(&w),
            }));
        }
        prev = cur;
    }
    Ok(None)
}

/// Abscissa of the turning point from the closed-form reduction
/// `r = V(K r / (K(1 - r²) - 1))`, solved on `(0, √(1 - 1/K))`.
///
/// Independent of `L`; used to cross-check [`find_turning_point`] and the
/// bound `r < √(1 - 2/K)`.
pub fn turning_abscissa(k: f64) -> Result<f64> {
    ensure_finite("K", k)?;
    if k.is_nan() || k <= 2.0 {
        return domain(format!("turning abscissa needs K > 2, got {k}"));
    }
    let upper = (1.0 - 1.0 / k).sqrt();
    let f = |r: f64| {
        let den = k * (1.0 - r * r) - 1.0;
        if den <= 0.0 {
            1.0 - r
        } else {
            v(k * r / den) - r
        }
    };
    // f < 0 just above the trivial root at zero because K/(2(K-1)) < 1.
    let lo = 1e-9 * upper;
    Ok(bisect(f, lo, upper))
}
