use proptest::prelude::*;

use super::oracle::*;
use super::*;

// Reference values from an independent scipy brentq/quad evaluation.
const EPS_R_U1: f64 = 0.194_575_148_127_741_8;
const DEEP_AT_EPS_R_U1: f64 = 3.050_327_416_235_704;
const EXIT_AT_EPS_R_U1: f64 = 2.787_284_551_887_142_3;

fn rb(u: f64, eps: f64, phase: Phase) -> ReducedBarrier<f64> {
    ReducedBarrier::shape(u, eps, phase).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn static_limit_both_phases() {
    for phase in [Phase::FieldMax, Phase::FieldMin] {
        for u in [0.3, 1.0, 4.0] {
            let b = rb(u, 0.0, phase);
            let roots = solve_tunneling_time(&b).unwrap();
            assert_eq!(roots.len(), 1);
            assert_eq!(roots[0].tau0_hat, u);
            let s = solution_for(&b, roots[0]);
            assert!(rel(s.action_g, 2.0 / 3.0 * u * u * u) < 1e-14);
            assert_eq!(s.energy_transfer_hat, 0.0);
            assert!(rel(s.exit_x0, u * u / 2.0) < 1e-15);
        }
    }
}

#[test]
fn deep_root_at_the_unit_resonance() {
    let roots = solve_tunneling_time(&rb(1.0, EPS_R_U1, Phase::FieldMin)).unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[1].branch, Branch::Deep);
    assert!((roots[1].tau0_hat - DEEP_AT_EPS_R_U1).abs() < 1e-12);
    // published rounding: "tau0 ~ 3 tau00"
    assert!((roots[1].tau0_hat - 3.0).abs() < 0.1);
    let x = position(&rb(1.0, EPS_R_U1, Phase::FieldMin), roots[1].tau0_hat, 0.0);
    assert!((x - EXIT_AT_EPS_R_U1).abs() < 1e-11);
}

#[test]
fn deep_root_at_u2() {
    let t = deep_root(&rb(2.0, 0.047, Phase::FieldMin)).unwrap();
    assert!((t - 4.769_490_060_069_081_5).abs() < 1e-11);
    assert!((t / 2.0 - 2.38).abs() <= 0.02);
}

#[test]
fn field_max_root_matches_reference_and_log_estimate_is_rough() {
    let t = solve_tunneling_time(&rb(6.0, 0.01, Phase::FieldMax)).unwrap()[0].tau0_hat;
    assert!((t - 5.143_477_153_983_16).abs() < 1e-11);
    // eps = 0.01 sits below the photon-assisted threshold 6 e^-6 at u = 6, so the
    // logarithmic estimate ln(u/eps) is only good to about 20% here.
    let log_estimate = (6.0f64 / 0.01).ln();
    assert!(rel(t, log_estimate) < 0.2);
}

#[test]
fn log_estimate_improves_with_u() {
    let eps = 0.01;
    let errs: Vec<f64> = [3.0, 4.0, 5.0, 6.0, 8.0, 12.0]
        .iter()
        .map(|&u| {
            let t = solve_tunneling_time(&rb(u, eps, Phase::FieldMax)).unwrap()[0].tau0_hat;
            let l = (u / eps).ln();
            (t - l).abs() / l
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn reference_actions() {
    let b = rb(1.0, 0.05, Phase::FieldMin);
    let roots = solve_tunneling_time(&b).unwrap();
    assert!((roots[0].tau0_hat - 1.063_805_938_614_086_1).abs() < 1e-12);
    assert!((roots[1].tau0_hat - 5.099_872_513_580_637).abs() < 1e-11);
    assert!((action_closed_form(&b, roots[0].tau0_hat) - 0.706_111_054_126_111_1).abs() < 1e-12);
    assert!((action_closed_form(&b, roots[1].tau0_hat) + 13.891_520_182_802_633).abs() < 1e-9);

    let m = rb(3.0, 0.05, Phase::FieldMax);
    let t = solve_tunneling_time(&m).unwrap()[0].tau0_hat;
    assert!((t - 2.648_461_879_943_581_7).abs() < 1e-12);
    assert!((action_closed_form(&m, t) - 16.406_908_059_874_617).abs() < 1e-10);
}

#[test]
fn resonance_zeroes_the_deep_action_at_u2() {
    let b = rb(2.0, 0.047, Phase::FieldMin);
    let g = action_closed_form(&b, deep_root(&b).unwrap());
    assert!(g.abs() <= 0.05 * 2.0 / 3.0 * 8.0, "g = {g}");
}

#[test]
fn beyond_the_window_has_no_saddle() {
    let err = solve_tunneling_time(&rb(2.0, 0.2, Phase::FieldMin)).unwrap_err();
    assert!(matches!(err, Error::NoSaddle { .. }));
    // field maximum always has a root
    assert_eq!(solve_tunneling_time(&rb(2.0, 0.2, Phase::FieldMax)).unwrap().len(), 1);
}

#[test]
fn tangency_returns_a_single_flagged_root() {
    let u = 1.0f64;
    let eps = tangency_eps(u).unwrap();
    assert!((window_peak(eps) - u).abs() < 1e-12);
    let roots = solve_tunneling_time(&rb(u, eps, Phase::FieldMin)).unwrap();
    assert_eq!(roots.len(), 1);
    assert_eq!(roots[0].branch, Branch::Tangent);
    assert!((roots[0].tau0_hat - turning_point(eps)).abs() < 1e-12);
}

#[test]
fn tangency_reference() {
    // brentq on arccosh(1/eps) - sqrt(1-eps^2) = u
    assert!((tangency_eps(1.0f64).unwrap() - 0.275_922_970_325_683_97).abs() < 1e-12);
    assert!((tangency_eps(2.0f64).unwrap() - 0.099_822_810_686_173_28).abs() < 1e-12);
}

#[test]
fn energy_transfer_signs() {
    let deep = dominant(&rb(1.0, EPS_R_U1, Phase::FieldMin)).unwrap();
    assert_eq!(deep.branch, Branch::Deep);
    assert!(deep.energy_transfer_hat < 0.0);
    let max = dominant(&rb(1.0, 0.1, Phase::FieldMax)).unwrap();
    assert!(max.energy_transfer_hat > 0.0);
}

#[test]
fn exit_relation_at_resonance_holds_only_asymptotically() {
    // at A = 0 the asymptotic theory gives x(0) = 3 (V - E_R) = 3 u^2 / 2
    let cases = [(1.0, EPS_R_U1, DEEP_AT_EPS_R_U1)];
    for (u, eps, tau) in cases {
        let x = position(&rb(u, eps, Phase::FieldMin), tau, 0.0);
        assert!(x / (1.5 * u * u) > 1.5);
    }
}

#[test]
fn trajectory_rejects_non_roots() {
    let b = rb(1.0, 0.1, Phase::FieldMax);
    assert!(trajectory(&b, 0.5, 10).is_err());
    let t = solve_tunneling_time(&b).unwrap()[0].tau0_hat;
    assert!(trajectory(&b, t, 1).is_err());
    assert!(trajectory(&b, t, 2).is_ok());
}

#[test]
fn static_trajectory_is_free_fall() {
    let b = rb(1.5, 0.0, Phase::FieldMin);
    let p = trajectory(&b, 1.5, 7).unwrap();
    for (t, x) in p.tau.iter().zip(&p.x) {
        assert!((x - (2.25 - t * t) / 2.0).abs() < 1e-15);
    }
    assert_eq!(p.x[0], 1.125);
}

#[test]
fn f32_solver_tracks_f64() {
    let b32 = ReducedBarrier::<f32>::shape(1.0, EPS_R_U1 as f32, Phase::FieldMin).unwrap();
    let t = deep_root(&b32).unwrap();
    assert!((t as f64 - DEEP_AT_EPS_R_U1).abs() < 1e-4);
    let g = action_closed_form(&b32, t);
    assert!(g.abs() < 1e-3);
}

// ---------------------------------------------------------------- oracles

#[test]
fn shooting_recovers_the_static_solution() {
    let u = 1.3;
    let sols = ode_shooting_oracle(&rb(u, 0.0, Phase::FieldMin), &ShootingConfig::default()).unwrap();
    assert_eq!(sols.len(), 1);
    assert!((sols[0].tau0_hat - u).abs() < 1e-10);
    assert!((sols[0].exit_x0 - u * u / 2.0).abs() < 1e-10);
}

#[test]
fn shooting_counts_a_crossing_on_a_node_once() {
    // u = 1 is a multiple of the scan step, so v = -u lands exactly on a node
    let sols = ode_shooting_oracle(&rb(1.0, 0.0, Phase::FieldMax), &ShootingConfig::default()).unwrap();
    assert_eq!(sols.len(), 1);
}

#[test]
fn shooting_finds_both_field_min_roots() {
    let b = rb(1.0, 0.05, Phase::FieldMin);
    let sols = ode_shooting_oracle(&b, &ShootingConfig::default()).unwrap();
    let analytic = solve_tunneling_time(&b).unwrap();
    assert_eq!(sols.len(), 2);
    for (s, a) in sols.iter().zip(&analytic) {
        assert!(rel(s.tau0_hat, a.tau0_hat) < 1e-10);
        assert!(rel(s.exit_x0, position(&b, a.tau0_hat, 0.0)) < 1e-9);
    }
}

#[test]
fn shooting_finds_nothing_beyond_the_window() {
    let sols = ode_shooting_oracle(&rb(2.0, 0.2, Phase::FieldMin), &ShootingConfig::default()).unwrap();
    assert!(sols.is_empty());
}

#[test]
fn shooting_is_fourth_order() {
    let b = rb(1.0, EPS_R_U1, Phase::FieldMin);
    let exact = position(&b, deep_root(&b).unwrap(), 0.0);
    let errs: Vec<f64> = [8e-2, 4e-2, 2e-2]
        .iter()
        .map(|&h| {
            let cfg = ShootingConfig {
                steps: StepControl::Fixed(h),
                ..Default::default()
            };
            let sols = ode_shooting_oracle(&b, &cfg).unwrap();
            (sols[1].exit_x0 - exact).abs()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((3.5..4.6).contains(&order), "errors {errs:?}, order {order}");
    }
}

#[test]
fn quadrature_static_value() {
    let b = rb(1.0, 0.0, Phase::FieldMin);
    let p = trajectory(&b, 1.0, MIN_QUADRATURE_NODES).unwrap();
    let g = action_quadrature_oracle(&b, &p).unwrap();
    assert!((g - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn quadrature_rejects_short_or_even_paths() {
    let b = rb(1.0, 0.0, Phase::FieldMin);
    let short = trajectory(&b, 1.0, 101).unwrap();
    assert!(matches!(
        action_quadrature_oracle(&b, &short),
        Err(Error::InsufficientSamples { .. })
    ));
    let even = trajectory(&b, 1.0, MIN_QUADRATURE_NODES + 1).unwrap();
    assert!(action_quadrature_oracle(&b, &even).is_err());
}

#[test]
fn quadrature_confirms_resonance_on_the_shooting_path() {
    let b = rb(1.0, EPS_R_U1, Phase::FieldMin);
    let sols = ode_shooting_oracle(&b, &ShootingConfig::default()).unwrap();
    let g = action_quadrature_oracle(&b, &sols[1].path).unwrap();
    assert!(g.abs() <= 1e-3 * 2.0 / 3.0, "g = {g}");
}

#[test]
fn quadrature_matches_closed_form_at_field_max() {
    let b = rb(3.0, 0.05, Phase::FieldMax);
    let t = solve_tunneling_time(&b).unwrap()[0].tau0_hat;
    let p = trajectory(&b, t, 8193).unwrap();
    let q = action_quadrature_oracle(&b, &p).unwrap();
    assert!(rel(q, action_closed_form(&b, t)) < 1e-8);
}

// ---------------------------------------------------------------- properties

fn window_case() -> impl Strategy<Value = (f64, f64)> {
    // (u, fraction of the tangency eps)
    (0.2f64..6.0, 0.01f64..0.98)
}

proptest! {
    #[test]
    fn residuals_are_tiny(u in 0.05f64..10.0, eps in 0.0f64..0.95, min in any::<bool>()) {
        let phase = if min { Phase::FieldMin } else { Phase::FieldMax };
        let b = rb(u, eps, phase);
        if let Ok(roots) = solve_tunneling_time(&b) {
            for r in roots {
                prop_assert!(time_residual(&b, r.tau0_hat).abs() <= 1e-12 * u);
            }
        }
    }

    #[test]
    fn boundary_contracts((u, frac) in window_case(), min in any::<bool>()) {
        let eps = frac * tangency_eps(u).unwrap();
        let phase = if min { Phase::FieldMin } else { Phase::FieldMax };
        let b = rb(u, eps, phase);
        for r in solve_tunneling_time(&b).unwrap() {
            let t = r.tau0_hat;
            prop_assert!(position(&b, t, t).abs() <= 1e-10);
            prop_assert!(velocity(&b, 0.0).abs() <= 1e-10);
            prop_assert!((velocity(&b, t) + u).abs() <= 1e-10);
        }
    }

    #[test]
    fn field_max_is_field_min_with_negated_eps(u in 0.1f64..5.0, eps in 0.0f64..0.9, t in 0.01f64..6.0) {
        let max = rb(u, eps, Phase::FieldMax);
        // field-minimum formulas written out with eps -> -eps
        let e = -eps;
        let g_min = u * u * t - t.powi(3) / 3.0
            + 2.0 * e * (t * t.cosh() - t.sinh())
            + e * e * (2.0 * t - (2.0 * t).sinh()) / 4.0;
        let x_min = t * t / 2.0 - e * (t.cosh() - 1.0);
        prop_assert!((action_closed_form(&max, t) - g_min).abs() <= 1e-12 * g_min.abs().max(1.0));
        prop_assert!((position(&max, t, 0.0) - x_min).abs() <= 1e-12 * x_min.abs().max(1.0));
    }

    #[test]
    fn field_max_root_falls_with_eps(u in 0.1f64..8.0, e1 in 0.001f64..0.9, de in 0.001f64..0.09) {
        let a = solve_tunneling_time(&rb(u, e1, Phase::FieldMax)).unwrap()[0].tau0_hat;
        let b = solve_tunneling_time(&rb(u, e1 + de, Phase::FieldMax)).unwrap()[0].tau0_hat;
        prop_assert!(b < a);
        prop_assert!(a > 0.0 && a < u);
    }

    #[test]
    fn field_min_roots_converge_toward_tangency((u, frac) in window_case(), step in 0.005f64..0.02) {
        let tan = tangency_eps(u).unwrap();
        let e1 = frac * tan;
        let e2 = ((frac + step).min(0.99)) * tan;
        prop_assume!(e2 > e1);
        let r1 = solve_tunneling_time(&rb(u, e1, Phase::FieldMin)).unwrap();
        let r2 = solve_tunneling_time(&rb(u, e2, Phase::FieldMin)).unwrap();
        prop_assert!(r2[0].tau0_hat > r1[0].tau0_hat);
        prop_assert!(r2[1].tau0_hat < r1[1].tau0_hat);
        prop_assert!(r1[1].tau0_hat > r1[0].tau0_hat);
        prop_assert!(r1[0].tau0_hat != u);
    }
}

#[test]
fn window_peak_is_continuous_across_the_series_switch() {
    let s = 0.1f64;
    let eps = (1.0 - s * s).sqrt();
    let direct = s.atanh() - s;
    let below = window_peak(eps * (1.0 - 1e-15));
    let above = window_peak(eps * (1.0 + 1e-15));
    // eps near 1 only fixes s^2 to about 1e-16 / s^2 relative
    assert!((window_peak(eps) - direct).abs() <= 1e-13 * direct);
    assert!(below >= above && below - above <= 1e-15);
}

#[test]
fn tangency_at_tiny_u() {
    for u in [1e-4f64, 1e-6, 1e-9] {
        let eps = tangency_eps(u).unwrap();
        assert!(eps < 1.0);
        assert!((window_peak(eps) - u).abs() <= 1e-9 * u);
    }
}
