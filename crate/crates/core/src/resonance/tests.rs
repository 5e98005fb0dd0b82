use proptest::prelude::*;

use super::*;
use crate::units::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::units::{ev_to_joule, hz_to_angular};

// Reference values from an independent scipy brentq evaluation.
const EPS_R_U1: f64 = 0.194_575_148_127_741_8;
const EPS_R_U2: f64 = 0.047_124_497_559_283_55;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Electron `W` eV below the top with the static field chosen to give `u`.
fn electron(ev: f64, u: f64, eps: f64) -> BarrierSpec {
    let omega = hz_to_angular(1e9);
    let w = ev_to_joule(ev);
    let field = omega * (2.0 * ELECTRON_MASS * w).sqrt() / (ELEMENTARY_CHARGE * u);
    BarrierSpec::new(ELECTRON_MASS, -ELEMENTARY_CHARGE, w, field, eps * field, omega).unwrap()
}

#[test]
fn prefactor_value() {
    assert!((asymptotic_prefactor::<f64>() - 0.471_077_444_007_285_3).abs() < 1e-15);
}

#[test]
fn resonant_amplitude_at_u1() {
    let a = solve_resonant_amplitude(1.0f64).unwrap();
    assert!(rel(a.eps_r, EPS_R_U1) < 1e-10, "{}", a.eps_r);
    assert!((a.tau0_hat - 3.0).abs() < 0.1);
    assert!(a.action_residual.abs() <= 1e-10);
    assert!(a.time_residual.abs() <= 1e-10);
}

#[test]
fn resonant_amplitude_at_u2() {
    let a = solve_resonant_amplitude(2.0f64).unwrap();
    assert!(rel(a.eps_r, EPS_R_U2) < 1e-10, "{}", a.eps_r);
    assert!((a.tau0_hat / 2.0 - 2.38).abs() <= 0.02);
}

#[test]
fn resonant_amplitude_in_f32() {
    let a = solve_resonant_amplitude(1.0f32).unwrap();
    assert!((a.eps_r as f64 - EPS_R_U1).abs() / EPS_R_U1 < 1e-3);
}

#[test]
fn asymptotic_amplitude_converges() {
    let errs: Vec<f64> = [3.0, 4.0, 5.0, 6.0, 8.0]
        .iter()
        .map(|&u: &f64| {
            let exact = solve_resonant_amplitude(u).unwrap().eps_r.ln();
            (asymptotic_resonant_amplitude(u).ln() - exact).abs() / exact.abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] <= 0.15);
}

#[test]
fn resonant_u_inverts_amplitude() {
    let a = solve_resonant_u(EPS_R_U1).unwrap();
    assert!((a.u - 1.0).abs() < 1e-9, "{}", a.u);
    assert!(a.action_residual.abs() <= 1e-10);
}

#[test]
fn resonance_point_of_a_resonant_spec_has_zero_detuning() {
    let spec = electron(3.3, 1.0, EPS_R_U1);
    let p = resonance_point(&spec).unwrap();
    assert!(p.detuning.abs() < 1e-8 * spec.barrier_offset());
    assert!(p.width > 0.0 && p.width < p.resonant_offset);
    // exit point: 2.787 length units, not the asymptotic 3 u^2 / 2
    assert!(rel(p.exit_x / spec.length_scale(), 2.787_284_551_887_142_3) < 1e-9);
}

#[test]
fn stronger_field_moves_resonance_up() {
    let weak = resonance_point(&electron(3.3, 1.0, EPS_R_U1)).unwrap();
    let strong = resonance_point(&electron(3.3, 1.0, 0.2)).unwrap();
    assert!(strong.detuning > weak.detuning);
    assert!(strong.u_r < 1.0);
}

#[test]
fn asymptotic_resonant_energy_reduced_identity() {
    for (u, eps) in [(4.0, 0.01), (6.0, 1e-3), (2.0, 0.05)] {
        let spec = electron(3.3, u, eps);
        let a = resonant_energy(&spec).unwrap();
        let l = (u / eps).ln();
        assert!(rel(a.log_factor, l) < 1e-12);
        assert!(rel(a.resonant_offset, spec.energy_scale() * l * l / 6.0) < 1e-12);
    }
}

#[test]
fn asymptotic_resonant_energy_needs_a_large_log() {
    let spec = electron(3.3, 0.5, 0.6);
    assert!(matches!(resonant_energy(&spec), Err(Error::OutOfValidity { .. })));
}

/// Level whose own asymptotic resonant energy it is; the large log depends on
/// the level through `a`, so this is a short fixed point.
fn self_consistent_resonance(spec: &BarrierSpec) -> BarrierSpec {
    let mut at = *spec;
    for _ in 0..60 {
        let w = resonant_energy(&at).unwrap().resonant_offset;
        at = at.with_barrier_offset(w).unwrap();
    }
    at
}

#[test]
fn exponent_vanishes_at_asymptotic_resonance() {
    let spec = electron(3.3, 4.0, 0.01);
    let log = resonant_energy(&spec).unwrap().log_factor;
    assert_eq!(asymptotic_exponent(0.0, spec.quantum(), log), 0.0);
    let at = self_consistent_resonance(&spec);
    let pe = penetration_exponent(&at, 1.0).unwrap();
    let asym = pe.asymptotic.unwrap();
    assert!(asym.abs() < 1e-9 * pe.static_exponent.abs(), "{asym}");
}

#[test]
fn two_asymptotic_forms_agree() {
    for d in [1e-22, 3e-21, 5e-20] {
        let q = 6.6e-25;
        let a = asymptotic_exponent(d, q, 7.3);
        let b = quanta_exponent(d, q, 7.3);
        assert!(rel(a, b) < 1e-12);
    }
}

#[test]
fn asymptotic_exponent_below_resonance() {
    let spec = electron(3.3, 4.0, 0.01);
    let l = (4.0f64 / 0.01).ln();
    let offset = spec.energy_scale() * l * l / 6.0;
    let expected = -2.0 * (spec.barrier_offset() - offset) / spec.quantum() * l;
    let got = penetration_exponent(&spec, 1.0).unwrap().asymptotic.unwrap();
    assert!(rel(got, expected) < 1e-10);
    assert!(got < 0.0);
}

#[test]
fn width_is_hbar_over_two_root_three_tau00() {
    let spec = electron(3.3, 1.0, EPS_R_U1);
    let expected = spec.quantum() / (2.0 * 3f64.sqrt());
    assert!(rel(resonance_width(&spec), expected) < 1e-12);
}

#[test]
fn exact_exponent_vanishes_at_resonance() {
    let spec = electron(3.3, 1.0, EPS_R_U1);
    let pe = penetration_exponent(&spec, 1.0).unwrap();
    assert_eq!(pe.exact_branch, Some(Branch::Deep));
    let exact = pe.exact.unwrap();
    assert!(exact.abs() < 1e-6 * pe.static_exponent.abs(), "{exact}");
    assert!(pe.field_max < exact);
}

#[test]
fn penetration_beyond_window_uses_field_max_only() {
    let spec = electron(3.3, 4.0, 0.2);
    let pe = penetration_exponent(&spec, 1.0).unwrap();
    assert!(pe.exact.is_none());
    assert_eq!(pe.total(), Some(pe.field_max));
    assert!(pe.field_max > pe.static_exponent);
}

#[test]
fn penetration_rejects_small_r() {
    assert!(penetration_exponent(&electron(3.3, 1.0, 0.1), 0.5).is_err());
}

#[test]
fn below_threshold_static_tunneling_dominates() {
    let spec = electron(3.3, 6.0, 0.01);
    assert!(threshold_ratio(&spec) < 1.0);
    let p = pat_optimize(&spec).unwrap();
    assert!(matches!(p.outcome, PatOutcome::StaticDominant { ln_w } if ln_w == -spec.static_wkb_exponent()));
}

#[test]
fn photon_assisted_optimum_matches_concave_closed_form() {
    for (u, eps) in [(6.0, 0.05), (4.0, 0.2), (8.0, 0.01)] {
        let spec = electron(3.3, u, eps);
        let p = pat_optimize(&spec).unwrap();
        let l = (u / eps).ln();
        let PatOutcome::Assisted {
            delta_e,
            ln_w,
            saturated,
            tau0,
        } = p.outcome
        else {
            panic!("expected assisted at u = {u}");
        };
        assert!(!saturated);
        let expected = (u * u - l * l) / 2.0 * spec.energy_scale();
        assert!(rel(delta_e, expected) < 1e-6, "u = {u}: {delta_e} vs {expected}");
        let theta = spec.energy_scale() / spec.quantum();
        let reduced = -theta * (2.0 * l * expected / spec.energy_scale() + 2.0 / 3.0 * l.powi(3));
        assert!(rel(ln_w, reduced) < 1e-9);
        assert!(ln_w > -spec.static_wkb_exponent());
        assert!(rel(tau0 * spec.angular_frequency(), l) < 1e-12);
    }
}

#[test]
fn photon_assisted_saturates_only_when_the_log_turns_negative() {
    let spec = electron(3.3, 0.5, 0.6);
    let p = pat_optimize(&spec).unwrap();
    let PatOutcome::Assisted { delta_e, saturated, ln_w, .. } = p.outcome else {
        panic!("expected assisted");
    };
    assert!(saturated);
    assert_eq!(delta_e, spec.barrier_offset());
    let l = quantum_log(&spec);
    assert!(rel(ln_w, -2.0 * spec.barrier_offset() / spec.quantum() * l) < 1e-12);
    assert_eq!(classify_regime(&spec, DEFAULT_RESONANCE_WINDOW).unwrap().pat_regime, Regime::MultiQuantaTop);
}

#[test]
fn one_photon_exponent_is_the_first_order_objective() {
    let spec = electron(3.3, 6.0, 0.05);
    let l = quantum_log(&spec);
    let shifted = spec.with_barrier_offset(spec.barrier_offset() - spec.quantum()).unwrap();
    let direct = -2.0 * l - shifted.static_wkb_exponent();
    let one = one_photon_exponent(&spec);
    assert!((one - direct).abs() < 1e-4 * direct.abs());
}

#[test]
fn regimes() {
    let stat = classify_regime(&electron(3.3, 6.0, 0.0), DEFAULT_RESONANCE_WINDOW).unwrap();
    assert_eq!(stat.regime, Regime::StaticWkb);
    assert_eq!(stat.threshold_ratio, 0.0);
    let res = classify_regime(&electron(3.3, 1.0, 1.05 * EPS_R_U1), DEFAULT_RESONANCE_WINDOW).unwrap();
    assert_eq!(res.regime, Regime::EuclideanResonance);
    assert!(res.validity_flags.is_empty());
    let pat = classify_regime(&electron(3.3, 6.0, 0.05), DEFAULT_RESONANCE_WINDOW).unwrap();
    assert_eq!(pat.regime, Regime::PhotonAssisted);
    assert!(pat.threshold_ratio > 1.0);
    let beyond = classify_regime(&electron(3.3, 4.0, 0.2), DEFAULT_RESONANCE_WINDOW).unwrap();
    assert!(beyond
        .validity_flags
        .iter()
        .any(|f| matches!(f, ValidityFlag::BeyondTwoRootWindow { .. })));
}

#[test]
fn quantum_flag_for_low_barrier() {
    let spec = electron(2e-5, 1.0, 0.1);
    let r = classify_regime(&spec, DEFAULT_RESONANCE_WINDOW).unwrap();
    assert!(r
        .validity_flags
        .iter()
        .any(|f| matches!(f, ValidityFlag::NotSemiclassical { .. })));
}

fn curve_grid(spec: &BarrierSpec, n: usize) -> Vec<f64> {
    let top = spec.barrier_offset();
    (0..n).map(|i| -0.3 * top + 0.6 * top * i as f64 / n as f64).collect()
}

#[test]
fn curve_peaks_at_exact_resonance() {
    let spec = electron(3.3, 1.0, 0.2);
    let energies = curve_grid(&spec, 120);
    let curve = resonance_curve(&spec, &energies, 1.0, DEFAULT_RESONANCE_WINDOW).unwrap();
    let e_r = curve.resonant_energy.unwrap();
    let step = energies[1] - energies[0];
    let (best, _) = curve
        .samples
        .iter()
        .filter_map(|s| s.ln_w_exact.map(|w| (s.energy, w)))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    assert!((best - e_r).abs() <= step, "peak {best} vs E_R {e_r}");
    // rising toward E_R from below
    let below: Vec<f64> = curve
        .samples
        .iter()
        .filter(|s| s.energy < e_r && s.energy > e_r - 10.0 * step)
        .filter_map(|s| s.ln_w_exact)
        .collect();
    assert!(below.len() > 3 && below.windows(2).all(|w| w[1] > w[0]));
    assert!(curve.samples.iter().filter(|s| s.energy > e_r).all(|s| s.ln_w_exact.is_none()));
    let res = resonance_point(&spec).unwrap();
    let peak = curve.peak_estimate.unwrap();
    assert!(rel(peak, -2.0 * (res.u_r / 0.2).ln()) < 1e-9, "{peak}");
}

#[test]
fn curve_validates_grid() {
    let spec = electron(3.3, 1.0, 0.2);
    assert!(resonance_curve(&spec, &[0.0, 0.0], 1.0, 0.1).is_err());
    assert!(resonance_curve(&spec, &[], 1.0, 0.1).is_err());
    assert!(resonance_curve(&spec, &[0.0, spec.barrier_offset()], 1.0, 0.1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resonant_amplitude_inside_window(u in 0.3f64..7.0) {
        let a = solve_resonant_amplitude(u).unwrap();
        let tangency = dynamics::tangency_eps(u).unwrap();
        prop_assert!(a.eps_r > 0.0 && a.eps_r < tangency);
        prop_assert!(a.action_residual.abs() <= 1e-9 * 2.0 / 3.0 * u.powi(3));
        prop_assert!(a.time_residual.abs() <= 1e-10 * (1.0 + u));
    }

    #[test]
    fn resonant_amplitude_falls_with_u(u in 0.3f64..6.0, du in 0.05f64..1.0) {
        let a = solve_resonant_amplitude(u).unwrap().eps_r;
        let b = solve_resonant_amplitude(u + du).unwrap().eps_r;
        prop_assert!(b < a);
    }

    #[test]
    fn asymptotic_exponent_available_only_below_resonance(u in 2.0f64..8.0, leps in -8.0f64..-2.0, scale in 0.3f64..3.0) {
        let base = electron(3.3, u, leps.exp());
        let spec = base.with_barrier_offset(base.barrier_offset() * scale).unwrap();
        let pe = penetration_exponent(&spec, 1.0).unwrap();
        let below = resonant_energy(&spec).map(|a| a.detuning >= 0.0).unwrap_or(false);
        prop_assert_eq!(pe.asymptotic.is_some(), below);
        if let Some(a) = pe.asymptotic {
            prop_assert!(a <= 0.0);
        }
    }
}
