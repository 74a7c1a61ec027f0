use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result};
use crate::quadrature::integrate_circle;
use crate::sc_curves::CouplingParams;
use crate::special_fn::w;

/// Right-hand sides of the `r` and phase equations, by quadrature of the
/// stationary density and by the closed `W` form, indexed by community.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WFormCheck {
    pub r_integral: [f64; 2],
    pub r_w_form: [f64; 2],
    pub phase_integral: [f64; 2],
    pub phase_w_form: [f64; 2],
    pub residual_r: [f64; 2],
    pub residual_phase: [f64; 2],
}

impl WFormCheck {
    pub fn max_residual(&self) -> f64 {
        self.residual_r
            .iter()
            .chain(&self.residual_phase)
            .fold(0.0, |m, x| m.max(*x))
    }
}

pub fn verify_w_form(
    params: &CouplingParams,
    r1: f64,
    r2: f64,
    psi1: f64,
    psi2: f64,
) -> Result<WFormCheck> {
    for (name, x) in [
        ("K1", params.k1),
        ("K2", params.k2),
        ("L1", params.l1),
        ("L2", params.l2),
        ("r1", r1),
        ("r2", r2),
        ("psi1", psi1),
        ("psi2", psi2),
    ] {
        ensure_finite(name, x)?;
    }
    let mut out = WFormCheck {
        r_integral: [0.0; 2],
        r_w_form: [0.0; 2],
        phase_integral: [0.0; 2],
        phase_w_form: [0.0; 2],
        residual_r: [0.0; 2],
        residual_phase: [0.0; 2],
    };
    let sides = [
        (params.k1, params.l1, r1, psi1, r2, psi2),
        (params.k2, params.l2, r2, psi2, r1, psi1),
    ];
    for (idx, (k, l, r, psi, r_o, psi_o)) in sides.into_iter().enumerate() {
        let rho = (k * k * r * r + l * l * r_o * r_o + 2.0 * k * l * r * r_o * (psi_o - psi).cos())
            .sqrt();
        let exponent = |t: f64| k * r * (psi - t).cos() + l * r_o * (psi_o - t).cos() - rho;
        let q = integrate_circle(
            |t| {
                let e = exponent(t).exp();
                [e, (psi - t).cos() * e, (psi - t).sin() * e]
            },
            1e-15,
            1e-14,
        );
        let half_w = 0.5 * w(rho);
        out.r_integral[idx] = q.values[1] / q.values[0];
        out.phase_integral[idx] = q.values[2] / q.values[0];
        out.r_w_form[idx] = (k * r + l * r_o * (psi_o - psi).cos()) * half_w;
        out.phase_w_form[idx] = l * r_o * (psi - psi_o).sin() * half_w;
        out.residual_r[idx] = (out.r_integral[idx] - out.r_w_form[idx]).abs();
        out.residual_phase[idx] = (out.phase_integral[idx] - out.phase_w_form[idx]).abs();
    }
    Ok(out)
}
