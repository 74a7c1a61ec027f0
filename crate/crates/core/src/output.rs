//! CSV writers shared by the command-line tool. Numbers carry 12 significant digits.

use std::io::{self, BufRead, Write};

use crate::sc_curves::{CouplingParams, Curve, CurveSample, CurveTrace};
use crate::sde_sim::OrderParameterPoint;
use crate::steady_state::{DensityProfile, RegionId, SolutionPoint};

pub const CURVES_HEADER: &str = "curve,r1,r2";
pub const SOLUTIONS_HEADER: &str = "K1,K2,L1,L2,psi,r1,r2,tangent_flag";
pub const REGIONS_HEADER: &str = "K1,K2,L1,L2,region,n_solutions";
pub const SERIES_HEADER: &str = "t,r1,psi1,r2,psi2";
pub const DENSITY_HEADER: &str = "theta,density";

/// Formats `x` rounded to 12 significant digits, in the shortest form that
/// parses back to the rounded value.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float round trip");
    let a = rounded.abs();
    if a == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn params_cols(p: &CouplingParams) -> String {
    p.as_array()
        .iter()
        .map(|x| fmt_num(*x))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_curves<W: Write>(mut w: W, traces: &[CurveTrace]) -> io::Result<()> {
    writeln!(w, "{CURVES_HEADER}")?;
    for t in traces {
        for s in &t.samples {
            writeln!(w, "{},{},{}", t.curve.label(), fmt_num(s.r1), fmt_num(s.r2))?;
        }
    }
    Ok(())
}

pub fn read_curves<R: BufRead>(r: R) -> io::Result<Vec<(Curve, CurveSample)>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(bad(format!("line {}: expected 3 columns", i + 1)));
        }
        let curve = match cols[0] {
            "Gamma1" => Curve::Gamma1,
            "Gamma2" => Curve::Gamma2,
            other => return Err(bad(format!("line {}: unknown curve {other}", i + 1))),
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| bad(format!("line {}: {e}", i + 1)))
        };
        out.push((
            curve,
            CurveSample {
                r1: num(cols[1])?,
                r2: num(cols[2])?,
            },
        ));
    }
    Ok(out)
}

pub fn write_solutions<W: Write>(
    mut w: W,
    params: &CouplingParams,
    solutions: &[SolutionPoint],
) -> io::Result<()> {
    writeln!(w, "{SOLUTIONS_HEADER}")?;
    let p = params_cols(params);
    for s in solutions {
        writeln!(
            w,
            "{p},{},{},{},{}",
            s.psi.label(),
            fmt_num(s.r1),
            fmt_num(s.r2),
            u8::from(s.tangent)
        )?;
    }
    Ok(())
}

pub fn region_row(params: &CouplingParams, region: RegionId, n_solutions: usize) -> String {
    format!("{},{region},{n_solutions}", params_cols(params))
}

pub fn write_series<W: Write>(mut w: W, series: &[OrderParameterPoint]) -> io::Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    for p in series {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_num(p.t),
            fmt_num(p.r1),
            fmt_num(p.psi1),
            fmt_num(p.r2),
            fmt_num(p.psi2)
        )?;
    }
    Ok(())
}

pub fn write_density<W: Write>(mut w: W, d: &DensityProfile) -> io::Result<()> {
    writeln!(w, "{DENSITY_HEADER}")?;
    for (t, v) in d.thetas.iter().zip(&d.values) {
        writeln!(w, "{},{}", fmt_num(*t), fmt_num(*v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.697_774_657_964_008), "0.697774657964");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt_num(0.0), "0");
        let x = std::f64::consts::PI * 1e-3;
        let back: f64 = fmt_num(x).parse().unwrap();
        assert!((back - x).abs() <= 1e-14);
    }

    #[test]
    fn curves_round_trip() {
        let trace = CurveTrace {
            curve: Curve::Gamma2,
            samples: vec![CurveSample { r1: 0.25, r2: 0.5 }],
            connections: vec![],
            grid_step: 0.5,
        };
        let mut buf = Vec::new();
        write_curves(&mut buf, &[trace]).unwrap();
        let rows = read_curves(buf.as_slice()).unwrap();
        assert_eq!(
            rows,
            vec![(Curve::Gamma2, CurveSample { r1: 0.25, r2: 0.5 })]
        );
    }
}
