//! Finite-size Euler–Maruyama simulation of the two-community system
//!
//! ```text
//! dθ_{1,i} = [α1 K1 r1 sin(ψ1 - θ_{1,i}) + α2 L1 r2 sin(ψ2 - θ_{1,i})] dt + √D dW
//! dθ_{2,i} = [α2 K2 r2 sin(ψ2 - θ_{2,i}) + α1 L2 r1 sin(ψ1 - θ_{2,i})] dt + √D dW
//! ```
//!
//! with `α_k = N_k / (N1 + N2)` and all natural frequencies zero. Every
//! oscillator draws its noise from its own ChaCha stream keyed by the seed,
//! its community and its index, so results do not depend on thread count.

mod estimate;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use estimate::{compare_to_theory, stationary_estimate, MatchReport, StationaryEstimate};

use crate::error::{domain, ensure_finite, Result};
use crate::sc_curves::CouplingParams;
use crate::steady_state::{stationary_density, Community, PhaseState};

/// Largest accepted time step.
pub const MAX_DT: f64 = 0.05;
/// Total population from which per-step updates run on the rayon pool.
pub const PARALLEL_THRESHOLD: usize = 8192;
const DENSITY_GRID: usize = 4096;
const INIT_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialCondition {
    /// Independent uniform phases.
    UniformIid,
    /// Every oscillator of community `k` starts at `theta_k`.
    PointMass { theta1: f64, theta2: f64 },
    /// Independent draws from the zero-frequency stationary densities of the
    /// state `(r1, ψ1 = 0, r2, ψ2 = psi)`.
    FromDensity { r1: f64, r2: f64, psi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n1: usize,
    pub n2: usize,
    pub noise_d: f64,
    pub dt: f64,
    pub t_total: f64,
    pub burn_in: f64,
    pub seed: u64,
    pub init: InitialCondition,
    pub params: CouplingParams,
    /// Time between recorded order-parameter points.
    pub record_interval: f64,
}

impl SimConfig {
    /// Defaults: `N1 = N2 = 1000`, `D = 1`, `dt = 0.005`, `T = 200`, burn-in 100,
    /// uniform start, seed 0, recording every 0.1 time units.
    pub fn new(params: CouplingParams) -> Self {
        Self {
            n1: 1000,
            n2: 1000,
            noise_d: 1.0,
            dt: 0.005,
            t_total: 200.0,
            burn_in: 100.0,
            seed: 0,
            init: InitialCondition::UniformIid,
            params,
            record_interval: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n1 == 0 || self.n2 == 0 {
            return domain(format!(
                "N1 and N2 must be positive, got {} and {}",
                self.n1, self.n2
            ));
        }
        for (name, x) in [
            ("noise D", self.noise_d),
            ("dt", self.dt),
            ("t_total", self.t_total),
            ("record interval", self.record_interval),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return domain(format!("{name} must be positive and finite, got {x}"));
            }
        }
        if self.dt > MAX_DT {
            return domain(format!("dt must not exceed {MAX_DT}, got {}", self.dt));
        }
        if !(self.burn_in >= 0.0 && self.burn_in < self.t_total) {
            return domain(format!(
                "burn_in must lie in [0, t_total), got {}",
                self.burn_in
            ));
        }
        match self.init {
            InitialCondition::UniformIid => Ok(()),
            InitialCondition::PointMass { theta1, theta2 } => {
                ensure_finite("theta1", theta1)?;
                ensure_finite("theta2", theta2)
            }
            InitialCondition::FromDensity { r1, r2, psi } => {
                ensure_finite("psi", psi)?;
                if !(0.0..=1.0).contains(&r1) || !(0.0..=1.0).contains(&r2) {
                    return domain(format!("initial r1, r2 must lie in [0, 1], got {r1}, {r2}"));
                }
                Ok(())
            }
        }
    }

    /// `(α1, α2)`, the community fractions.
    pub fn alphas(&self) -> (f64, f64) {
        let n = (self.n1 + self.n2) as f64;
        (self.n1 as f64 / n, self.n2 as f64 / n)
    }

    pub fn n_steps(&self) -> u64 {
        (self.t_total / self.dt).round() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterPoint {
    pub t: f64,
    pub r1: f64,
    pub psi1: f64,
    pub r2: f64,
    pub psi2: f64,
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn mean_phasor(phases: &[f64]) -> (f64, f64) {
    let (mut c, mut s) = (0.0, 0.0);
    for &t in phases {
        let (sn, cs) = t.sin_cos();
        c += cs;
        s += sn;
    }
    let n = phases.len() as f64;
    (c / n, s / n)
}

fn polar((c, s): (f64, f64)) -> (f64, f64) {
    let r = c.hypot(s);
    if r == 0.0 {
        (0.0, 0.0)
    } else {
        (r, wrap_angle(s.atan2(c)))
    }
}

/// `(r1, ψ1, r2, ψ2)` of two phase populations.
pub fn order_parameters(phases1: &[f64], phases2: &[f64]) -> Result<(f64, f64, f64, f64)> {
    if phases1.is_empty() || phases2.is_empty() {
        return domain("both communities need at least one oscillator");
    }
    let (r1, psi1) = polar(mean_phasor(phases1));
    let (r2, psi2) = polar(mean_phasor(phases2));
    Ok((r1, psi1, r2, psi2))
}

fn stream_id(community: Community, index: usize) -> u64 {
    let c = match community {
        Community::One => 0,
        Community::Two => 1,
    };
    (c << 32) | index as u64
}

fn oscillator_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// A running simulation: phases plus the noise stream of every oscillator.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    phases: [Vec<f64>; 2],
    rngs: [Vec<ChaCha8Rng>; 2],
    steps_done: u64,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let phases = [
            initial_phases(&config, Community::One)?,
            initial_phases(&config, Community::Two)?,
        ];
        Self::with_phases(config, phases[0].clone(), phases[1].clone())
    }

    /// Starts from explicit phases; the configured initial condition is ignored.
    pub fn with_phases(config: SimConfig, phases1: Vec<f64>, phases2: Vec<f64>) -> Result<Self> {
        config.validate()?;
        if phases1.len() != config.n1 || phases2.len() != config.n2 {
            return domain(format!(
                "expected {} and {} phases, got {} and {}",
                config.n1,
                config.n2,
                phases1.len(),
                phases2.len()
            ));
        }
        if let Some(x) = phases1.iter().chain(&phases2).find(|x| !x.is_finite()) {
            return domain(format!("phases must be finite, got {x}"));
        }
        let rngs = [
            (0..config.n1)
                .map(|i| oscillator_rng(config.seed, stream_id(Community::One, i)))
                .collect(),
            (0..config.n2)
                .map(|i| oscillator_rng(config.seed, stream_id(Community::Two, i)))
                .collect(),
        ];
        Ok(Self {
            config,
            phases: [phases1, phases2],
            rngs,
            steps_done: 0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.steps_done as f64 * self.config.dt
    }

    pub fn phases(&self, community: Community) -> &[f64] {
        match community {
            Community::One => &self.phases[0],
            Community::Two => &self.phases[1],
        }
    }

    pub fn snapshot(&self) -> OrderParameterPoint {
        let (r1, psi1) = polar(mean_phasor(&self.phases[0]));
        let (r2, psi2) = polar(mean_phasor(&self.phases[1]));
        OrderParameterPoint {
            t: self.time(),
            r1,
            psi1,
            r2,
            psi2,
        }
    }

    /// Advances one Euler–Maruyama step.
    pub fn step(&mut self) {
        let cfg = &self.config;
        let p = cfg.params;
        let (a1, a2) = cfg.alphas();
        let (c1, s1) = mean_phasor(&self.phases[0]);
        let (c2, s2) = mean_phasor(&self.phases[1]);
        let dt = cfg.dt;
        let sigma = (cfg.noise_d * dt).sqrt();
        // drift = A cos θ - B sin θ
        let coeffs = [
            (
                (p.k1 * a1 * s1 + p.l1 * a2 * s2) * dt,
                (p.k1 * a1 * c1 + p.l1 * a2 * c2) * dt,
            ),
            (
                (p.k2 * a2 * s2 + p.l2 * a1 * s1) * dt,
                (p.k2 * a2 * c2 + p.l2 * a1 * c1) * dt,
            ),
        ];
        let parallel = cfg.n1 + cfg.n2 >= PARALLEL_THRESHOLD;
        for (k, (a, b)) in coeffs.into_iter().enumerate() {
            let update = |(theta, rng): (&mut f64, &mut ChaCha8Rng)| {
                let (sn, cs) = theta.sin_cos();
                let xi: f64 = rng.sample(StandardNormal);
                *theta = (*theta + a * cs - b * sn + sigma * xi).rem_euclid(TAU);
            };
            if parallel {
                self.phases[k]
                    .par_iter_mut()
                    .zip(self.rngs[k].par_iter_mut())
                    .for_each(update);
            } else {
                self.phases[k]
                    .iter_mut()
                    .zip(self.rngs[k].iter_mut())
                    .for_each(update);
            }
        }
        self.steps_done += 1;
    }

    /// Runs to `t_total`, recording at `t = 0` and each step that crosses a
    /// multiple of the record interval.
    pub fn run(mut self) -> Vec<OrderParameterPoint> {
        let n_steps = self.config.n_steps();
        let interval = self.config.record_interval;
        let mut out = vec![self.snapshot()];
        let mut last_slot = 0i64;
        while self.steps_done < n_steps {
            self.step();
            let slot = (self.time() / interval + 1e-9).floor() as i64;
            if slot > last_slot {
                last_slot = slot;
                out.push(self.snapshot());
            }
        }
        out
    }
}

fn initial_phases(cfg: &SimConfig, community: Community) -> Result<Vec<f64>> {
    let n = match community {
        Community::One => cfg.n1,
        Community::Two => cfg.n2,
    };
    let mut rng = oscillator_rng(cfg.seed, INIT_STREAM | stream_id(community, 0));
    Ok(match cfg.init {
        InitialCondition::UniformIid => (0..n).map(|_| rng.gen::<f64>() * TAU).collect(),
        InitialCondition::PointMass { theta1, theta2 } => {
            let t = match community {
                Community::One => theta1,
                Community::Two => theta2,
            };
            vec![t.rem_euclid(TAU); n]
        }
        InitialCondition::FromDensity { r1, r2, psi } => {
            let state = PhaseState::new(r1, 0.0, r2, psi);
            let d = stationary_density(
                community,
                &cfg.params,
                cfg.alphas(),
                cfg.noise_d,
                &state,
                0.0,
                DENSITY_GRID,
            )?;
            let h = TAU / DENSITY_GRID as f64;
            // cdf[j] = P(θ < θ_j), trapezoid on the periodic grid.
            let mut cdf = Vec::with_capacity(DENSITY_GRID + 1);
            cdf.push(0.0);
            for j in 0..DENSITY_GRID {
                let next = d.values[(j + 1) % DENSITY_GRID];
                cdf.push(cdf[j] + 0.5 * h * (d.values[j] + next));
            }
            let total = cdf[DENSITY_GRID];
            (0..n)
                .map(|_| {
                    let u = rng.gen::<f64>() * total;
                    let j = cdf.partition_point(|&c| c <= u).clamp(1, DENSITY_GRID) - 1;
                    let span = cdf[j + 1] - cdf[j];
                    let frac = if span > 0.0 { (u - cdf[j]) / span } else { 0.0 };
                    ((j as f64 + frac) * h).rem_euclid(TAU)
                })
                .collect()
        }
    })
}

/// Runs a full simulation from the configured initial condition.
pub fn simulate(config: &SimConfig) -> Result<Vec<OrderParameterPoint>> {
    Ok(Simulation::new(*config)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(params: CouplingParams) -> SimConfig {
        SimConfig {
            n1: 50,
            n2: 60,
            t_total: 1.0,
            burn_in: 0.5,
            ..SimConfig::new(params)
        }
    }

    fn params() -> CouplingParams {
        CouplingParams::new(3.0, 4.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn order_parameter_cases() {
        let (r1, psi1, r2, psi2) = order_parameters(&[0.4, 0.4], &[0.4]).unwrap();
        assert!((r1 - 1.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
        assert!((psi1 - 0.4).abs() < 1e-15 && (psi2 - 0.4).abs() < 1e-15);
        let (r1, ..) = order_parameters(&[0.0, PI], &[0.0]).unwrap();
        assert!(r1 < 1e-15);
        let (r1, psi1, ..) = order_parameters(&[0.0, PI / 2.0], &[0.0]).unwrap();
        assert!((r1 - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((psi1 - PI / 4.0).abs() < 1e-15);
        assert!(order_parameters(&[], &[0.0]).is_err());
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let ok = small(params());
        assert!(ok.validate().is_ok());
        assert!(SimConfig { dt: 0.06, ..ok }.validate().is_err());
        assert!(SimConfig { burn_in: 1.0, ..ok }.validate().is_err());
        assert!(SimConfig { n1: 0, ..ok }.validate().is_err());
        assert!(SimConfig { noise_d: 0.0, ..ok }.validate().is_err());
    }

    #[test]
    fn records_every_interval() {
        let series = simulate(&small(params())).unwrap();
        assert_eq!(series.len(), 11);
        assert_eq!(series[0].t, 0.0);
        assert!((series[10].t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_starts_synchronized() {
        let cfg = SimConfig {
            init: InitialCondition::PointMass {
                theta1: 1.0,
                theta2: -2.0,
            },
            ..small(params())
        };
        let s = Simulation::new(cfg).unwrap().snapshot();
        assert!((s.r1 - 1.0).abs() < 1e-12 && (s.psi1 - 1.0).abs() < 1e-12);
        assert!((s.psi2 + 2.0).abs() < 1e-12);
    }

    #[test]
    fn density_start_matches_requested_levels() {
        let cfg = SimConfig {
            n1: 20000,
            n2: 20000,
            init: InitialCondition::FromDensity {
                r1: 0.8,
                r2: 0.6,
                psi: 0.0,
            },
            ..small(params())
        };
        let s = Simulation::new(cfg).unwrap().snapshot();
        // With (3, 4, 2, 1) the density of (0.8, 0.6) has its own order parameter V(3·0.8 + 2·0.6).
        let want1 = crate::special_fn::v(3.6);
        assert!((s.r1 - want1).abs() < 0.02, "{} vs {want1}", s.r1);
        assert!(s.psi1.abs() < 0.05);
    }

    #[test]
    fn deterministic_for_same_seed() {
        let cfg = small(params());
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
        let other = simulate(&SimConfig { seed: 9, ..cfg }).unwrap();
        assert_ne!(simulate(&cfg).unwrap(), other);
    }

    #[test]
    fn with_phases_checks_lengths() {
        let cfg = small(params());
        assert!(Simulation::with_phases(cfg, vec![0.0; 3], vec![0.0; 60]).is_err());
    }
}
