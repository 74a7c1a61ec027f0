//! Flat JSON documents accepted by `simulate` and `sweep`.

use serde::Deserialize;

use kuramoto_duo::sde_sim::{InitialCondition, SimConfig};
use kuramoto_duo::CouplingParams;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfigFile {
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "N1")]
    pub n1: Option<usize>,
    #[serde(rename = "N2")]
    pub n2: Option<usize>,
    #[serde(rename = "noise_D")]
    pub noise_d: Option<f64>,
    pub dt: Option<f64>,
    pub t_total: Option<f64>,
    pub burn_in: Option<f64>,
    pub seed: Option<u64>,
    pub record_interval: Option<f64>,
    /// `uniform`, `point_mass` or `from_density`.
    pub init: Option<String>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub init_r1: Option<f64>,
    pub init_r2: Option<f64>,
    pub init_psi: Option<f64>,
    /// Match tolerance for the comparison with the analytical solutions.
    pub tol: Option<f64>,
}

impl SimConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed simulation config: {e}")))
    }

    pub fn to_config(&self) -> Result<SimConfig, CliError> {
        let params = CouplingParams::new(self.k1, self.k2, self.l1, self.l2)?;
        let d = SimConfig::new(params);
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                CliError::Usage(format!(
                    "init {} requires {name}",
                    self.init.as_deref().unwrap_or("")
                ))
            })
        };
        let init = match self.init.as_deref().unwrap_or("uniform") {
            "uniform" => InitialCondition::UniformIid,
            "point_mass" => InitialCondition::PointMass {
                theta1: need("theta1", self.theta1)?,
                theta2: need("theta2", self.theta2)?,
            },
            "from_density" => InitialCondition::FromDensity {
                r1: need("init_r1", self.init_r1)?,
                r2: need("init_r2", self.init_r2)?,
                psi: self.init_psi.unwrap_or(0.0),
            },
            other => return Err(CliError::Usage(format!("unknown init {other:?}"))),
        };
        let cfg = SimConfig {
            n1: self.n1.unwrap_or(d.n1),
            n2: self.n2.unwrap_or(d.n2),
            noise_d: self.noise_d.unwrap_or(d.noise_d),
            dt: self.dt.unwrap_or(d.dt),
            t_total: self.t_total.unwrap_or(d.t_total),
            burn_in: self.burn_in.unwrap_or(d.burn_in),
            seed: self.seed.unwrap_or(d.seed),
            init,
            params,
            record_interval: self.record_interval.unwrap_or(d.record_interval),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Axis {
    K1,
    K2,
    L1,
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepPsi {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "pi")]
    Pi,
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(rename = "K1")]
    pub k1: Option<f64>,
    #[serde(rename = "K2")]
    pub k2: Option<f64>,
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
    #[serde(rename = "L2")]
    pub l2: Option<f64>,
    pub x_axis: Axis,
    pub x_min: f64,
    pub x_max: f64,
    pub x_n: usize,
    pub y_axis: Option<Axis>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub y_n: Option<usize>,
    #[serde(default = "default_psi")]
    pub psi: SweepPsi,
}

fn default_psi() -> SweepPsi {
    SweepPsi::Zero
}

#[derive(Debug, Clone, Copy)]
pub struct AxisRange {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
    }
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed sweep config: {e}")))
    }

    /// Validates the sweep and returns the axes plus the base parameter values `[K1, K2, L1, L2]`.
    pub fn resolve(&self) -> Result<(Vec<AxisRange>, [f64; 4]), CliError> {
        let mut axes = vec![AxisRange {
            axis: self.x_axis,
            min: self.x_min,
            max: self.x_max,
            n: self.x_n,
        }];
        match (self.y_axis, self.y_min, self.y_max, self.y_n) {
            (None, None, None, None) => {}
            (Some(axis), Some(min), Some(max), Some(n)) => {
                axes.push(AxisRange { axis, min, max, n })
            }
            _ => {
                return Err(CliError::Usage(
                    "y_axis, y_min, y_max and y_n go together".into(),
                ))
            }
        }
        if axes.len() == 2 && axes[0].axis == axes[1].axis {
            return Err(CliError::Usage("x_axis and y_axis must differ".into()));
        }
        for a in &axes {
            if a.n < 2 {
                return Err(CliError::Usage(format!(
                    "axis {:?} needs n >= 2, got {}",
                    a.axis, a.n
                )));
            }
            if !a.min.is_finite() || !a.max.is_finite() || a.min >= a.max {
                return Err(CliError::Usage(format!(
                    "axis {:?} needs finite min < max",
                    a.axis
                )));
            }
        }
        let swept = |axis: Axis| axes.iter().any(|a| a.axis == axis);
        let mut base = [0.0; 4];
        for (slot, axis, value) in [
            (0, Axis::K1, self.k1),
            (1, Axis::K2, self.k2),
            (2, Axis::L1, self.l1),
            (3, Axis::L2, self.l2),
        ] {
            if swept(axis) {
                continue;
            }
            match value {
                Some(v) if v.is_finite() => base[slot] = v,
                _ => return Err(CliError::Usage(format!("fixed value for {axis:?} missing"))),
            }
            if slot >= 2 && base[slot] == 0.0 {
                return Err(CliError::Usage(format!("fixed {axis:?} must be nonzero")));
            }
        }
        Ok((axes, base))
    }
}

pub fn set_axis(values: &mut [f64; 4], axis: Axis, v: f64) {
    let slot = match axis {
        Axis::K1 => 0,
        Axis::K2 => 1,
        Axis::L1 => 2,
        Axis::L2 => 3,
    };
    values[slot] = v;
}
