use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::roots::bisect;
use crate::sc_curves::CouplingParams;
use crate::special_fn::v;

/// Parameters are treated as lying on a level set `K1 + L1 = K2 + L2` when the
/// two sums differ by at most this.
pub const LEVEL_TOL: f64 = 1e-12;

/// A level set `K1 + L1 = K2 + L2 = C > 2` and its symmetric solution `r1 = r2 = r(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub level_c: f64,
    pub r_of_c: f64,
}

/// Returns the symmetric class the parameters belong to, if any.
pub fn symmetric_class(params: &CouplingParams) -> Result<Option<SymmetryClass>> {
    params.validate()?;
    let c1 = params.k1 + params.l1;
    let c2 = params.k2 + params.l2;
    if (c1 - c2).abs() > LEVEL_TOL {
        return Ok(None);
    }
    let c = 0.5 * (c1 + c2);
    if c <= 2.0 {
        return Ok(None);
    }
    Ok(Some(SymmetryClass {
        level_c: c,
        r_of_c: solve_r_of_c(c),
    }))
}

/// Positive root of `r = V(C r)`, or 0 when `C ≤ 2`.
pub fn solve_r_of_c(c: f64) -> f64 {
    if c.is_nan() || c <= 2.0 {
        return 0.0;
    }
    bisect(|r| v(c * r) - r, 1e-12, 1.0)
}

/// `sqrt((C - 2) / (C - 1))`, the closed-form approximation of `r(C)`.
pub fn r_of_c_approx(c: f64) -> f64 {
    if c.is_nan() || c <= 2.0 {
        return 0.0;
    }
    ((c - 2.0) / (c - 1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_value_at_four() {
        assert!((solve_r_of_c(4.0) - 0.831_462_024_754_257).abs() < 1e-12);
    }

    #[test]
    fn subcritical_is_zero() {
        assert_eq!(solve_r_of_c(2.0), 0.0);
        assert_eq!(solve_r_of_c(-3.0), 0.0);
        assert_eq!(solve_r_of_c(f64::NAN), 0.0);
        assert_eq!(r_of_c_approx(1.5), 0.0);
    }

    #[test]
    fn class_detection() {
        let p = CouplingParams::new(1.0, 2.0, 3.0, 2.0).unwrap();
        let s = symmetric_class(&p).unwrap().unwrap();
        assert_eq!(s.level_c, 4.0);
        let q = CouplingParams::new(1.0, 2.0, 3.0, 1.0).unwrap();
        assert!(symmetric_class(&q).unwrap().is_none());
        let low = CouplingParams::new(1.0, 0.5, 0.5, 1.0).unwrap();
        assert!(symmetric_class(&low).unwrap().is_none());
    }
}
