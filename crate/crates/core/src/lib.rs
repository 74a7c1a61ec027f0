//! Two-community noisy Kuramoto model: the Bessel-ratio special functions,
//! self-consistency curves and their intersections, stationary densities and a
//! finite-size stochastic simulator to check them against.

pub mod error;
pub mod output;
pub mod quadrature;
mod roots;
pub mod sc_curves;
pub mod sde_sim;
pub mod special_fn;
pub mod steady_state;

pub use error::{Error, Result};
pub use sc_curves::{
    bottom_connection, classify_fundamental_curve, curve_curvature, curve_slope, eval_h,
    find_turning_point, top_connection, trace_curve, turning_abscissa, Connection, CouplingParams,
    Curve, CurveSample, CurveTrace, FundamentalCurveKind, TurningPoint,
};
pub use special_fn::{
    eval_v, eval_v_detailed, eval_v_double_prime, eval_v_prime, eval_w, invert_v, EvalResult,
};
pub use steady_state::{
    beta_zero, classify_region, find_solutions, r_of_c_approx, solve_r_of_c, stationary_density,
    symmetric_class, unsync_only_sufficient, verify_w_form, Community, DensityProfile, PhaseState,
    Psi, RegionId, SolutionPoint, SymmetryClass, WFormCheck,
};
