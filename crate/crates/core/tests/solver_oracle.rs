//! Cross-checks the intersection finder against an independent route: Γ2
//! written as a graph over `r2`, scanned on a much finer grid for sign changes
//! of `h1`.

use kuramoto_duo::{eval_v, find_solutions, invert_v, CouplingParams, Psi, SolutionPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h1(p: &CouplingParams, r1: f64, r2: f64) -> f64 {
    eval_v(p.k1 * r1 + p.l1 * r2).unwrap() - r1
}

/// Positive in-phase solutions from the `r2` parameterization.
fn oracle_positive(p: &CouplingParams, n: usize) -> Vec<(f64, f64)> {
    let gamma2 = |r2: f64| (invert_v(r2).unwrap() - p.k2 * r2) / p.l2;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64, f64)> = None;
    for i in 1..n {
        let r2 = i as f64 / n as f64;
        let r1 = gamma2(r2);
        if !(0.0..=1.0).contains(&r1) {
            prev = None;
            continue;
        }
        let g = h1(p, r1, r2);
        if let Some((pr1, pr2, pg)) = prev {
            if pg * g < 0.0 {
                let t = pg / (pg - g);
                out.push((pr1 + t * (r1 - pr1), pr2 + t * (r2 - pr2)));
            }
        }
        prev = Some((r1, r2, g));
    }
    out
}

fn positive(sols: &[SolutionPoint]) -> Vec<&SolutionPoint> {
    sols.iter().filter(|s| !s.is_unsynchronized()).collect()
}

#[test]
fn random_parameters_agree_with_transposed_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut disagreements = Vec::new();
    let trials = 300;
    for _ in 0..trials {
        let mut l = || {
            let x: f64 = rng.gen_range(0.05..6.0);
            if rng.gen::<bool>() {
                x
            } else {
                -x
            }
        };
        let (l1, l2) = (l(), l());
        let p = CouplingParams::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), l1, l2)
            .unwrap();
        let found = find_solutions(&p, Psi::Zero).unwrap();
        let oracle = oracle_positive(&p, 8000);
        let pos = positive(&found);
        let matched = pos.len() == oracle.len()
            && pos
                .iter()
                .zip(&oracle)
                .all(|(s, o)| (s.r1 - o.0).abs() < 1e-3 && (s.r2 - o.1).abs() < 1e-3);
        if !matched {
            disagreements.push((p, pos.len(), oracle.len()));
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}
