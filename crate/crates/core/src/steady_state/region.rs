use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sc_curves::CouplingParams;

/// The ten parameter regions, by the shapes of the two curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl RegionId {
    pub const ALL: [RegionId; 10] = [
        RegionId::R1,
        RegionId::R2,
        RegionId::R3,
        RegionId::R4,
        RegionId::R5,
        RegionId::R6,
        RegionId::R7,
        RegionId::R8,
        RegionId::R9,
        RegionId::R10,
    ];

    /// Largest number of in-phase solutions, origin included.
    pub fn max_solutions(self) -> usize {
        use RegionId::*;
        match self {
            R1 => 1,
            R2 | R3 | R4 | R5 => 2,
            R6 | R7 | R8 | R9 => 3,
            R10 => 4,
        }
    }

    pub fn index(self) -> u8 {
        RegionId::ALL.iter().position(|r| *r == self).unwrap() as u8 + 1
    }

    pub fn label(self) -> &'static str {
        use RegionId::*;
        match self {
            R1 => "R1",
            R2 => "R2",
            R3 => "R3",
            R4 => "R4",
            R5 => "R5",
            R6 => "R6",
            R7 => "R7",
            R8 => "R8",
            R9 => "R9",
            R10 => "R10",
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Domain {
    /// `K ≤ 2, L > 0`
    Weak,
    /// `K > 2, L > 0`
    Strong,
    /// `K > 2, L < 0`
    Inhibited,
}

fn domain_of(k: f64, l: f64) -> Option<Domain> {
    match (k > 2.0, l > 0.0) {
        (false, true) => Some(Domain::Weak),
        (true, true) => Some(Domain::Strong),
        (true, false) => Some(Domain::Inhibited),
        (false, false) => None,
    }
}

pub fn classify_region(params: &CouplingParams) -> Result<RegionId> {
    params.validate()?;
    use Domain::*;
    use RegionId::*;
    let (d1, d2) = match (
        domain_of(params.k1, params.l1),
        domain_of(params.k2, params.l2),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(R1),
    };
    Ok(match (d1, d2) {
        (Weak, Weak) => R2,
        (Strong, Strong) => R3,
        (Weak, Strong) => R4,
        (Strong, Weak) => R5,
        (Inhibited, Strong) => R6,
        (Strong, Inhibited) => R7,
        (Inhibited, Weak) => R8,
        (Weak, Inhibited) => R9,
        (Inhibited, Inhibited) => R10,
    })
}

/// `(K1 - 2)(K2 - 2) - L1 L2`
pub fn beta_zero(params: &CouplingParams) -> f64 {
    (params.k1 - 2.0) * (params.k2 - 2.0) - params.l1 * params.l2
}

/// Checks eight conditions under which the origin is claimed to be the only
/// in-phase solution. Returns whether any holds and which ones (1-based).
///
/// Conditions 5 and 6 do not guarantee this on their own; see the test
/// `condition_five_admits_synchronized_solutions`.
pub fn unsync_only_sufficient(params: &CouplingParams) -> Result<(bool, Vec<u8>)> {
    params.validate()?;
    let CouplingParams { k1, k2, l1, l2 } = *params;
    let b = beta_zero(params);
    let conditions = [
        k1 < 2.0 && l2 > 0.0 && b >= 0.0,
        k2 < 2.0 && l1 > 0.0 && b >= 0.0,
        k1 > 2.0 && l2 < 0.0 && b <= 0.0,
        k2 > 2.0 && l1 < 0.0 && b <= 0.0,
        k1 > 2.0 && k2 < 2.0 && l1 < 0.0 && l2 > 0.0 && b >= 0.0,
        k1 < 2.0 && k2 > 2.0 && l1 > 0.0 && l2 < 0.0 && b >= 0.0,
        k1 <= 2.0 && l1 < 0.0,
        k2 <= 2.0 && l2 < 0.0,
    ];
    let hits: Vec<u8> = conditions
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(i, _)| i as u8 + 1)
        .collect();
    Ok((!hits.is_empty(), hits))
}
