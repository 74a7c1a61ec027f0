use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{wrap_angle, OrderParameterPoint};
use crate::error::{domain, Result};
use crate::steady_state::{Psi, SolutionPoint};

/// Long-time statistics of a recorded series after burn-in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryEstimate {
    pub r1_mean: f64,
    pub r1_std: f64,
    pub r2_mean: f64,
    pub r2_std: f64,
    /// Circular mean of `ψ2 - ψ1`, in `(-π, π]`.
    pub psi_diff_mean: f64,
    pub psi_diff_circ_std: f64,
    pub samples: usize,
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn stationary_estimate(
    series: &[OrderParameterPoint],
    burn_in: f64,
) -> Result<StationaryEstimate> {
    let kept: Vec<&OrderParameterPoint> = series.iter().filter(|p| p.t > burn_in).collect();
    if kept.is_empty() {
        return domain(format!("no recorded points after burn-in {burn_in}"));
    }
    let (r1_mean, r1_std) = mean_std(kept.iter().map(|p| p.r1));
    let (r2_mean, r2_std) = mean_std(kept.iter().map(|p| p.r2));
    let n = kept.len() as f64;
    let (c, s) = kept.iter().fold((0.0, 0.0), |(c, s), p| {
        let (sn, cs) = (p.psi2 - p.psi1).sin_cos();
        (c + cs, s + sn)
    });
    let (c, s) = (c / n, s / n);
    let resultant = c.hypot(s).min(1.0);
    let psi_diff_mean = if resultant == 0.0 {
        0.0
    } else {
        wrap_angle(s.atan2(c))
    };
    let psi_diff_circ_std = if resultant == 0.0 {
        f64::INFINITY
    } else {
        (-2.0 * resultant.ln()).max(0.0).sqrt()
    };
    Ok(StationaryEstimate {
        r1_mean,
        r1_std,
        r2_mean,
        r2_std,
        psi_diff_mean,
        psi_diff_circ_std,
        samples: kept.len(),
    })
}

/// Nearest analytical solution to a simulated estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub nearest: SolutionPoint,
    pub distance: f64,
    pub dr1: f64,
    pub dr2: f64,
    /// Circular distance between the phase class of the estimate and that of the solution.
    pub dpsi: f64,
    pub within_tol: bool,
}

/// The estimated phase difference snapped to the nearer of `0` and `π`.
pub fn nearest_phase_class(psi: f64) -> Psi {
    if wrap_angle(psi).abs() <= PI / 2.0 {
        Psi::Zero
    } else {
        Psi::Pi
    }
}

/// Finds the solution closest to the estimate. The distance is Euclidean in
/// `(r1, r2, ψ)`; the phase term is dropped for the unsynchronized solution,
/// where the phase difference carries no information.
pub fn compare_to_theory(
    est: &StationaryEstimate,
    solutions: &[SolutionPoint],
    tol: f64,
) -> Result<MatchReport> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tol must be positive, got {tol}"));
    }
    if solutions.is_empty() {
        return domain("no solutions to compare against");
    }
    let class = nearest_phase_class(est.psi_diff_mean);
    let report = |s: &SolutionPoint| {
        let dr1 = (est.r1_mean - s.r1).abs();
        let dr2 = (est.r2_mean - s.r2).abs();
        let dpsi = if s.is_unsynchronized() || class == s.psi {
            0.0
        } else {
            PI
        };
        let distance = (dr1 * dr1 + dr2 * dr2 + dpsi * dpsi).sqrt();
        MatchReport {
            nearest: *s,
            distance,
            dr1,
            dr2,
            dpsi,
            within_tol: distance <= tol,
        }
    };
    Ok(solutions
        .iter()
        .map(report)
        .min_by(|a, b| a.distance.total_cmp(&b.distance))
        .expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64, r1: f64, r2: f64, psi1: f64, psi2: f64) -> OrderParameterPoint {
        OrderParameterPoint {
            t,
            r1,
            psi1,
            r2,
            psi2,
        }
    }

    #[test]
    fn constant_series() {
        let s: Vec<_> = (0..20).map(|i| pt(i as f64, 0.5, 0.5, 1.0, 1.0)).collect();
        let e = stationary_estimate(&s, 5.0).unwrap();
        assert_eq!((e.r1_mean, e.r2_mean), (0.5, 0.5));
        assert_eq!((e.r1_std, e.r2_std), (0.0, 0.0));
        assert_eq!(e.psi_diff_mean, 0.0);
        assert_eq!(e.samples, 14);
    }

    #[test]
    fn alternating_phase_difference_averages_to_zero() {
        let s: Vec<_> = (0..40)
            .map(|i| pt(i as f64, 0.5, 0.5, 0.0, if i % 2 == 0 { 0.1 } else { -0.1 }))
            .collect();
        let e = stationary_estimate(&s, -1.0).unwrap();
        assert!(e.psi_diff_mean.abs() < 1e-15);
        assert!((e.psi_diff_circ_std - 0.1).abs() < 1e-3);
    }

    #[test]
    fn nothing_after_burn_in() {
        let s = vec![pt(0.0, 0.1, 0.1, 0.0, 0.0)];
        assert!(stationary_estimate(&s, 1.0).is_err());
    }

    #[test]
    fn exact_match_and_phase_mismatch() {
        let sol = SolutionPoint {
            r1: 0.7,
            r2: 0.6,
            psi: Psi::Zero,
            tangent: false,
        };
        let origin = SolutionPoint {
            r1: 0.0,
            r2: 0.0,
            psi: Psi::Zero,
            tangent: false,
        };
        let mut est = StationaryEstimate {
            r1_mean: 0.7,
            r1_std: 0.0,
            r2_mean: 0.6,
            r2_std: 0.0,
            psi_diff_mean: 0.0,
            psi_diff_circ_std: 0.0,
            samples: 1,
        };
        let m = compare_to_theory(&est, &[origin, sol], 1e-9).unwrap();
        assert_eq!(m.distance, 0.0);
        assert!(m.within_tol);
        est.psi_diff_mean = 3.0;
        let m = compare_to_theory(&est, &[sol], 0.05).unwrap();
        assert_eq!(m.dpsi, PI);
        assert!(!m.within_tol);
        assert!(compare_to_theory(&est, &[], 0.1).is_err());
        assert!(compare_to_theory(&est, &[sol], 0.0).is_err());
    }
}
