//! Steady states of the reduced self-consistency equations
//!
//! ```text
//! r1 = V(K1 r1 + L1 r2 cos ψ),    r2 = V(K2 r2 + L2 r1 cos ψ),    ψ ∈ {0, π}
//! ```
//!
//! together with the parameter-space bookkeeping built on them: the ten
//! regions, the sufficient conditions for the unsynchronized state, symmetric
//! solutions, the stationary phase densities, and the equivalence of the
//! integral and `W` forms of the equations.

mod density;
mod region;
mod symmetric;
mod w_form;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use density::{simplified_density, stationary_density, DensityProfile, PhaseState};
pub use region::{beta_zero, classify_region, unsync_only_sufficient, RegionId};
pub use symmetric::{r_of_c_approx, solve_r_of_c, symmetric_class, SymmetryClass};
pub use w_form::{verify_w_form, WFormCheck};

use crate::error::Result;
use crate::roots::{bisect, golden_min};
use crate::sc_curves::{
    graph, graph_from_inverse, grid_point, h_local, inverse_grid, CouplingParams, DEFAULT_GRID,
};

/// Roots closer than this in `r1` are the same solution.
pub const DEDUP_TOL: f64 = 1e-7;
/// A local minimum of `|g|` below this without a sign change is a tangential intersection.
pub const TANGENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Psi {
    Zero,
    Pi,
}

impl Psi {
    pub fn cos(self) -> f64 {
        match self {
            Psi::Zero => 1.0,
            Psi::Pi => -1.0,
        }
    }

    pub fn angle(self) -> f64 {
        match self {
            Psi::Zero => 0.0,
            Psi::Pi => std::f64::consts::PI,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Psi::Zero => "0",
            Psi::Pi => "pi",
        }
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Community {
    One,
    Two,
}

/// A steady state `(r1, r2)` with phase difference `ψ = ψ2 - ψ1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionPoint {
    pub r1: f64,
    pub r2: f64,
    pub psi: Psi,
    /// The curves touch here without crossing.
    pub tangent: bool,
}

impl SolutionPoint {
    pub fn is_unsynchronized(&self) -> bool {
        self.r1 == 0.0 && self.r2 == 0.0
    }

    /// Residuals of both self-consistency equations at this point.
    pub fn residuals(&self, params: &CouplingParams) -> (f64, f64) {
        let c = self.psi.cos();
        (
            crate::special_fn::v(params.k1 * self.r1 + params.l1 * c * self.r2) - self.r1,
            crate::special_fn::v(params.k2 * self.r2 + params.l2 * c * self.r1) - self.r2,
        )
    }
}

/// All intersections of Γ1 and Γ2 for the given phase difference, origin included,
/// sorted by `r1`.
pub fn find_solutions(params: &CouplingParams, psi: Psi) -> Result<Vec<SolutionPoint>> {
    find_solutions_on_grid(params, psi, DEFAULT_GRID)
}

pub fn find_solutions_on_grid(
    params: &CouplingParams,
    psi: Psi,
    n_grid: usize,
) -> Result<Vec<SolutionPoint>> {
    params.validate()?;
    if n_grid < 3 {
        return crate::error::domain(format!("n_grid must be at least 3, got {n_grid}"));
    }
    let effective = match psi {
        Psi::Zero => *params,
        Psi::Pi => params.with_negated_cross(),
    };
    Ok(in_phase_roots(&effective, n_grid)
        .into_iter()
        .map(|(r1, r2, tangent)| SolutionPoint {
            r1,
            r2,
            psi,
            tangent,
        })
        .collect())
}

#[derive(Clone, Copy)]
struct Node {
    r1: f64,
    g: f64,
}

/// Roots of `g(r1) = h2(r1, γ1(r1))` where `γ1` is Γ1 written as a graph over `r1`.
fn in_phase_roots(p: &CouplingParams, n: usize) -> Vec<(f64, f64, bool)> {
    let (k1, l1, k2, l2) = (p.k1, p.l1, p.k2, p.l2);
    let inv = inverse_grid(n);
    let h2 = |r1: f64, r2: f64| h_local(k2, l2, r2, r1);
    let g_of = |r1: f64| h2(r1, graph(k1, l1, r1));
    let inside = |w: f64| (0.0..=1.0).contains(&w);

    // Maximal runs of the graph inside the unit square, with exact edge crossings as end nodes.
    let mut segments: Vec<Vec<Node>> = Vec::new();
    let mut current: Vec<Node> = vec![Node { r1: 0.0, g: 0.0 }];
    let mut prev_w = 0.0;
    for i in 1..n {
        let (u0, u1) = (grid_point(i - 1, n), grid_point(i, n));
        let w = graph_from_inverse(k1, l1, u1, inv[i]);
        let mut crossings: Vec<(f64, f64)> = Vec::new();
        for edge in [0.0, 1.0] {
            if (prev_w - edge) * (w - edge) < 0.0 {
                crossings.push((bisect(|u| graph(k1, l1, u) - edge, u0, u1), edge));
            }
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut state_inside = inside(prev_w);
        for (u, edge) in crossings {
            let node = Node {
                r1: u,
                g: h2(u, edge),
            };
            if state_inside {
                current.push(node);
                segments.push(std::mem::take(&mut current));
            } else {
                current.push(node);
            }
            state_inside = !state_inside;
        }
        if inside(w) {
            current.push(Node {
                r1: u1,
                g: h2(u1, w),
            });
        } else if !current.is_empty() {
            // Left the square straight from the origin.
            segments.push(std::mem::take(&mut current));
        }
        prev_w = w;
    }
    if !current.is_empty() {
        segments.push(current);
    }

    let mut roots: Vec<(f64, bool)> = Vec::new();
    for seg in &segments {
        for pair in seg.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.g * b.g < 0.0 {
                roots.push((bisect(g_of, a.r1, b.r1), false));
            } else if b.g == 0.0 && b.r1 > 0.0 {
                roots.push((b.r1, false));
            }
        }
    }
    for seg in &segments {
        for tri in seg.windows(3) {
            let (a, m, b) = (tri[0], tri[1], tri[2]);
            let same_sign = a.g * m.g > 0.0 && m.g * b.g > 0.0;
            if !same_sign || !(m.g.abs() < a.g.abs() && m.g.abs() <= b.g.abs()) {
                continue;
            }
            let (u, gmin) = golden_min(|u| g_of(u).abs(), a.r1, b.r1, 1e-13);
            if gmin < TANGENT_TOL {
                roots.push((u, true));
            }
        }
    }

    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64, bool)> = vec![(0.0, 0.0, false)];
    for (r1, tangent) in roots {
        let last = out.last().map(|s| s.0).unwrap_or(0.0);
        if r1 - last <= DEDUP_TOL {
            continue;
        }
        let r2 = graph(k1, l1, r1).clamp(0.0, 1.0);
        out.push((r1, r2, tangent));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k1: f64, k2: f64, l1: f64, l2: f64) -> CouplingParams {
        CouplingParams::new(k1, k2, l1, l2).unwrap()
    }

    #[test]
    fn region_two_example_has_origin_and_one_positive() {
        let s = find_solutions(&p(1.0, 2.0, 3.0, 1.0), Psi::Zero).unwrap();
        assert_eq!(s.len(), 2, "{s:?}");
        assert!(s[0].is_unsynchronized());
        assert!(s[1].r1 > 0.0 && s[1].r2 > 0.0);
    }

    #[test]
    fn region_ten_example_has_four() {
        let s = find_solutions(&p(4.0, 5.5, -1.0, -2.0), Psi::Zero).unwrap();
        assert_eq!(s.len(), 4, "{s:?}");
    }

    #[test]
    fn trivial_curve_gives_only_origin() {
        let s = find_solutions(&p(1.0, 3.0, -1.0, 1.0), Psi::Zero).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].is_unsynchronized());
    }

    #[test]
    fn solutions_satisfy_equations() {
        let q = p(4.0, 5.5, -1.0, -2.0);
        for psi in [Psi::Zero, Psi::Pi] {
            for s in find_solutions(&q, psi).unwrap() {
                let (a, b) = s.residuals(&q);
                assert!(a.abs() < 1e-9 && b.abs() < 1e-9, "{s:?}: {a:e} {b:e}");
            }
        }
    }

    #[test]
    fn antiphase_tags_and_mirror() {
        let q = p(3.0, 4.0, 2.0, 1.0);
        let pi = find_solutions(&q, Psi::Pi).unwrap();
        let zero = find_solutions(&q.with_negated_cross(), Psi::Zero).unwrap();
        assert_eq!(pi.len(), zero.len());
        for (a, b) in pi.iter().zip(&zero) {
            assert_eq!(a.psi, Psi::Pi);
            assert_eq!((a.r1, a.r2), (b.r1, b.r2));
        }
    }

    #[test]
    fn rejects_invalid_params() {
        let bad = CouplingParams {
            k1: 1.0,
            k2: 1.0,
            l1: 0.0,
            l2: 1.0,
        };
        assert!(find_solutions(&bad, Psi::Zero).is_err());
    }
}
