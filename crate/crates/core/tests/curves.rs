use kuramoto_duo::{
    curve_curvature, curve_slope, eval_h, trace_curve, Connection, CouplingParams, Curve,
    CurveSample, Error,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = CouplingParams> {
    let cross = prop_oneof![0.05f64..6.0, -6.0f64..-0.05];
    (-6.0f64..6.0, -6.0f64..6.0, cross.clone(), cross)
        .prop_map(|(k1, k2, l1, l2)| CouplingParams::new(k1, k2, l1, l2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traced_points_lie_on_curve(q in params()) {
        for curve in [Curve::Gamma1, Curve::Gamma2] {
            let t = trace_curve(curve, &q, 501).unwrap();
            for s in &t.samples {
                prop_assert!((0.0..=1.0).contains(&s.r1) && (0.0..=1.0).contains(&s.r2));
                let h = eval_h(curve, &q, s.r1, s.r2).unwrap();
                prop_assert!(h.abs() <= 1e-9, "{:?} {:?} h = {:e}", curve, s, h);
            }
        }
    }
}

#[test]
fn slope_matches_finite_difference_along_gamma1() {
    let q = CouplingParams::new(4.0, 1.0, -1.0, 1.0).unwrap();
    let t = trace_curve(Curve::Gamma1, &q, 4001).unwrap();
    let s = &t.samples;
    for i in (100..s.len() - 100).step_by(250) {
        let fd = (s[i + 1].r2 - s[i - 1].r2) / (s[i + 1].r1 - s[i - 1].r1);
        let slope = curve_slope(Curve::Gamma1, &q, s[i]).unwrap();
        assert!(
            (fd - slope).abs() < 1e-4 * slope.abs().max(1.0),
            "{fd} vs {slope}"
        );
        let fd2 = (s[i + 1].r2 - 2.0 * s[i].r2 + s[i - 1].r2) / (s[i + 1].r1 - s[i].r1).powi(2);
        let curv = curve_curvature(Curve::Gamma1, &q, s[i]).unwrap();
        assert!(
            (fd2 - curv).abs() < 1e-3 * curv.abs().max(1.0),
            "{fd2} vs {curv}"
        );
        // K > 2, L < 0 bends downward.
        assert!(curv < 0.0);
    }
}

#[test]
fn gamma2_connections_are_mirrored() {
    let q = CouplingParams::new(1.0, 1.5, 2.0, 4.0).unwrap();
    let t = trace_curve(Curve::Gamma2, &q, 2001).unwrap();
    assert_eq!(t.connections[0], Connection::Origin);
    let top = t.top_connections();
    assert_eq!(top.len(), 1);
    // Γ2 meets r1 = 1 at r2 = top.
    assert!(eval_h(Curve::Gamma2, &q, 1.0, top[0]).unwrap().abs() < 1e-12);
}

#[test]
fn off_curve_point_is_a_precondition_error() {
    let q = CouplingParams::new(1.0, 1.5, 2.0, 4.0).unwrap();
    let err = curve_slope(Curve::Gamma1, &q, CurveSample { r1: 0.5, r2: 0.5 }).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    assert!(matches!(
        eval_h(Curve::Gamma1, &q, 1.2, 0.0),
        Err(Error::Domain(_))
    ));
}
