use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Community;
use crate::error::{domain, ensure_finite, Result};
use crate::quadrature::{circle_grid, periodic_sum};
use crate::sc_curves::CouplingParams;

const MIN_THETA_POINTS: usize = 64;

// 4-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Order parameters of both communities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub r1: f64,
    pub psi1: f64,
    pub r2: f64,
    pub psi2: f64,
}

impl PhaseState {
    pub fn new(r1: f64, psi1: f64, r2: f64, psi2: f64) -> Self {
        Self { r1, psi1, r2, psi2 }
    }

    fn validate(&self) -> Result<()> {
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !(0.0..=1.0).contains(&r) {
                return domain(format!("{name} must lie in [0, 1], got {r}"));
            }
        }
        ensure_finite("psi1", self.psi1)?;
        ensure_finite("psi2", self.psi2)
    }

    /// `(r_k, ψ_k, r_k', ψ_k')` seen from community `k`.
    fn view(&self, community: Community) -> (f64, f64, f64, f64) {
        match community {
            Community::One => (self.r1, self.psi1, self.r2, self.psi2),
            Community::Two => (self.r2, self.psi2, self.r1, self.psi1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub community: Community,
    pub omega: f64,
    pub noise_d: f64,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityProfile {
    pub fn total_mass(&self) -> f64 {
        periodic_sum(&self.values)
    }
}

fn check_grid(n_theta: usize) -> Result<()> {
    if n_theta < MIN_THETA_POINTS || !n_theta.is_power_of_two() {
        return domain(format!(
            "n_theta must be a power of two >= {MIN_THETA_POINTS}, got {n_theta}"
        ));
    }
    Ok(())
}

/// Stationary phase density of an oscillator with natural frequency `omega`
/// in community `k`, given the order parameters of both communities.
///
/// With `Φ(θ) = 2ωθ/D + 2α_k K_k r_k cos(ψ_k - θ)/D + 2α_k' L_k r_k' cos(ψ_k' - θ)/D`
/// the unnormalized density is
///
/// ```text
/// A(θ) = e^Φ(θ) [ e^{4πω/D} ∫_θ^{2π} e^{-Φ} + ∫_0^θ e^{-Φ} ]
/// ```
#[allow(clippy::too_many_arguments)]
pub fn stationary_density(
    community: Community,
    params: &CouplingParams,
    alphas: (f64, f64),
    noise_d: f64,
    state: &PhaseState,
    omega: f64,
    n_theta: usize,
) -> Result<DensityProfile> {
    params.validate()?;
    state.validate()?;
    check_grid(n_theta)?;
    ensure_finite("omega", omega)?;
    if !(noise_d > 0.0 && noise_d.is_finite()) {
        return domain(format!("noise D must be positive, got {noise_d}"));
    }
    let (a1, a2) = alphas;
    if !(a1 > 0.0 && a2 > 0.0 && ((a1 + a2) - 1.0).abs() <= 1e-12) {
        return domain(format!(
            "alphas must be positive and sum to 1, got ({a1}, {a2})"
        ));
    }

    let (r, psi, r_other, psi_other) = state.view(community);
    let (k, l, alpha, alpha_other) = match community {
        Community::One => (params.k1, params.l1, a1, a2),
        Community::Two => (params.k2, params.l2, a2, a1),
    };
    let own = 2.0 * alpha * k * r / noise_d;
    let cross = 2.0 * alpha_other * l * r_other / noise_d;
    let drift = 2.0 * omega / noise_d;
    let phi = |t: f64| drift * t + own * (psi - t).cos() + cross * (psi_other - t).cos();

    let thetas = circle_grid(n_theta);
    let h = 2.0 * PI / n_theta as f64;

    // Everything is carried in logs: the linear drift term alone can push e^Φ
    // far outside the floating-point range.
    // log_cells[m] = log ∫ e^{-Φ} over [θ_m, θ_m + h]
    let log_cells: Vec<f64> = (0..n_theta)
        .map(|m| {
            let mid = (m as f64 + 0.5) * h;
            let phi_mid = phi(mid);
            let local: f64 = GL_NODES
                .iter()
                .zip(GL_WEIGHTS)
                .map(|(x, wgt)| wgt * (phi_mid - phi(mid + 0.5 * h * x)).exp())
                .sum();
            -phi_mid + (0.5 * h * local).ln()
        })
        .collect();
    // prefix[j] = log ∫_0^{θ_j},  suffix[j] = log ∫_{θ_j}^{2π}
    let mut prefix = vec![f64::NEG_INFINITY; n_theta];
    for j in 1..n_theta {
        prefix[j] = log_add(prefix[j - 1], log_cells[j - 1]);
    }
    let mut suffix = vec![f64::NEG_INFINITY; n_theta + 1];
    for j in (0..n_theta).rev() {
        suffix[j] = log_add(suffix[j + 1], log_cells[j]);
    }
    let growth = 4.0 * PI * omega / noise_d;
    let log_a: Vec<f64> = thetas
        .iter()
        .enumerate()
        .map(|(j, &t)| phi(t) + log_add(growth + suffix[j], prefix[j]))
        .collect();
    let top = log_a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let values: Vec<f64> = log_a.iter().map(|la| (la - top).exp()).collect();
    let norm = periodic_sum(&values);
    Ok(DensityProfile {
        community,
        omega,
        noise_d,
        thetas,
        values: values.into_iter().map(|v| v / norm).collect(),
    })
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Density `∝ exp[K_k r_k cos(ψ_k - θ) + L_k r_k' cos(ψ_k' - θ)]`, the zero-frequency
/// density for equal community sizes and unit noise.
pub fn simplified_density(
    community: Community,
    params: &CouplingParams,
    state: &PhaseState,
    n_theta: usize,
) -> Result<DensityProfile> {
    params.validate()?;
    state.validate()?;
    check_grid(n_theta)?;
    let (r, psi, r_other, psi_other) = state.view(community);
    let (k, l) = match community {
        Community::One => (params.k1, params.l1),
        Community::Two => (params.k2, params.l2),
    };
    let amp = (k * r).abs() + (l * r_other).abs();
    let thetas = circle_grid(n_theta);
    let values: Vec<f64> = thetas
        .iter()
        .map(|&t| (k * r * (psi - t).cos() + l * r_other * (psi_other - t).cos() - amp).exp())
        .collect();
    let norm = periodic_sum(&values);
    Ok(DensityProfile {
        community,
        omega: 0.0,
        noise_d: 1.0,
        thetas,
        values: values.into_iter().map(|v| v / norm).collect(),
    })
}
