//! Euclidean resonance and photon-assisted tunneling.
//!
//! At the field minimum the deep trajectory's action vanishes along a curve
//! `eps = eps_R(u)`; there the penetration exponent stops being semiclassically
//! large. This module locates that curve exactly and asymptotically, converts
//! it into resonant energies and widths, evaluates penetration exponents, and
//! optimises the competing photon-assisted channel at the field maximum.

use serde::{Deserialize, Serialize};

use crate::barrier::{BarrierSpec, Phase, ReducedBarrier, SEMICLASSICAL_LIMIT};
use crate::dynamics::{self, Branch};
use crate::error::{Error, Result};
use crate::rootfind::{golden_section_max, solve_bracketed};
use crate::scalar::Scalar;
use crate::units::constants::HBAR;

/// Relative distance from `eps_R` inside which a spec is flagged resonant.
pub const DEFAULT_RESONANCE_WINDOW: f64 = 0.1;

/// `2 (sqrt3 - 1) exp[-(sqrt3 - 1)(3 sqrt3 + 1) / 4]`.
pub fn asymptotic_prefactor<T: Scalar>() -> T {
    let s3 = T::lit(3.0).sqrt();
    let one = T::one();
    T::lit(2.0) * (s3 - one) * (-(s3 - one) * (T::lit(3.0) * s3 + one) / T::lit(4.0)).exp()
}

/// Large-`u` resonant field ratio `C u exp(-sqrt3 u)`.
pub fn asymptotic_resonant_amplitude<T: Scalar>(u: T) -> T {
    asymptotic_prefactor::<T>() * u * (-T::lit(3.0).sqrt() * u).exp()
}

/// Exact resonant amplitude at a given `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonantAmplitude<T> {
    pub u: T,
    pub eps_r: T,
    /// Deep root of the time equation at `(u, eps_r)`.
    pub tau0_hat: T,
    pub time_residual: T,
    pub action_residual: T,
}

fn deep_action<T: Scalar>(u: T, eps: T) -> Result<(T, T)> {
    let rb = ReducedBarrier::shape(u, eps, Phase::FieldMin)?;
    let tau = dynamics::deep_root(&rb)?;
    Ok((tau, dynamics::action_closed_form(&rb, tau)))
}

/// `d g / d eps` along the deep branch; `tau0` is stationary so only the
/// explicit dependence survives.
fn deep_action_eps_slope<T: Scalar>(eps: T, tau: T) -> T {
    let two = T::lit(2.0);
    two * (tau * tau.cosh() - tau.sinh()) + eps * (two * tau - (two * tau).sinh()) / two
}

fn action_tolerance<T: Scalar>(u: T) -> T {
    let scale = (T::lit(10.0 * 2.0 / 3.0) * u * u * u).min(T::one());
    T::lit(T::ROOT_TOL * 100.0) * scale
}

/// Solves `tau0 - eps sinh tau0 = u` together with `g = 0` on the deep branch.
///
/// The action rises monotonically with `eps` along the deep branch, so the
/// outer problem is a 1-D root in `ln eps` bracketed around the asymptotic
/// estimate and capped below the tangency value.
pub fn solve_resonant_amplitude<T: Scalar>(u: T) -> Result<ResonantAmplitude<T>> {
    if !(u > T::zero() && u.is_finite()) {
        return Err(Error::invalid("u", format!("must be finite and > 0, got {u}")));
    }
    let no_res = |detail: String| Error::NoResonance {
        u: u.as_f64(),
        detail,
    };
    let tangency = dynamics::tangency_eps(u)?;
    let cap = tangency * T::lit(0.99);
    let ceiling = tangency * (T::one() - T::lit(T::BISECT_TOL * 1e-3));
    let guess = asymptotic_resonant_amplitude(u).max(T::min_positive_value());
    let mut lo = (guess / T::lit(5.0)).min(cap * T::lit(0.5));
    let mut hi = (guess * T::lit(5.0)).min(cap);
    let g = |ln_eps: T| deep_action(u, ln_eps.exp()).map(|(_, g)| g);

    let mut tries = 0;
    while g(lo.ln())? > T::zero() {
        lo = lo / T::lit(10.0);
        tries += 1;
        if tries > 60 || lo < T::min_positive_value() {
            return Err(no_res("deep action stays positive at small eps".into()));
        }
    }
    while g(hi.ln())? < T::zero() {
        if hi >= ceiling {
            return Err(no_res(format!(
                "deep action still negative at the window edge eps = {}",
                tangency
            )));
        }
        hi = (hi * T::lit(2.0)).min(ceiling);
    }

    let f = |ln_eps: T| g(ln_eps).unwrap_or(T::nan());
    let df = |ln_eps: T| {
        let eps = ln_eps.exp();
        match deep_action(u, eps) {
            Ok((tau, _)) => eps * deep_action_eps_slope(eps, tau),
            Err(_) => T::nan(),
        }
    };
    let ln_eps = solve_bracketed(f, df, lo.ln(), hi.ln(), action_tolerance(u), "resonant amplitude")?;
    let eps_r = ln_eps.exp();
    let (tau, action) = deep_action(u, eps_r)?;
    let rb = ReducedBarrier::shape(u, eps_r, Phase::FieldMin)?;
    Ok(ResonantAmplitude {
        u,
        eps_r,
        tau0_hat: tau,
        time_residual: dynamics::time_residual(&rb, tau),
        action_residual: action,
    })
}

/// Reduced `u` at which a fixed field ratio `eps` is resonant: the deep action
/// `g(u)` grows with `u` (slope `2 u tau0`) inside the window `u < peak(eps)`.
pub fn solve_resonant_u<T: Scalar>(eps: T) -> Result<ResonantAmplitude<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let peak = dynamics::window_peak(eps);
    let g = |u: T| deep_action(u, eps).map(|(_, g)| g).unwrap_or(T::nan());
    let dg = |u: T| {
        deep_action(u, eps)
            .map(|(tau, _)| T::lit(2.0) * u * tau)
            .unwrap_or(T::nan())
    };
    let lo = peak * T::lit(1e-3);
    let hi = peak * (T::one() - T::lit(T::BISECT_TOL * 1e-3));
    let no_res = |detail: &str| Error::NoResonance {
        u: peak.as_f64(),
        detail: format!("eps = {eps}: {detail}"),
    };
    if !(g(lo) < T::zero()) {
        return Err(no_res("deep action positive across the window"));
    }
    if !(g(hi) > T::zero()) {
        return Err(no_res("deep action negative at the window edge"));
    }
    let u = solve_bracketed(g, dg, lo, hi, action_tolerance(peak), "resonant u")?;
    let (tau, action) = deep_action(u, eps)?;
    let rb = ReducedBarrier::shape(u, eps, Phase::FieldMin)?;
    Ok(ResonantAmplitude {
        u,
        eps_r: eps,
        tau0_hat: tau,
        time_residual: dynamics::time_residual(&rb, tau),
        action_residual: action,
    })
}

/// Exact resonance of a physical spec at its own fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePoint<T> {
    /// Field ratio, resonant by construction.
    pub eps_r: T,
    /// Reduced `u` of the resonant level.
    pub u_r: T,
    pub tau0_hat: T,
    /// `V - E_R`, J.
    pub resonant_offset: f64,
    /// `E_R - E`, J; positive when the incident level lies below resonance.
    pub detuning: f64,
    /// Resonance width, J.
    pub width: f64,
    /// Exit point from under the barrier at resonance, m.
    pub exit_x: f64,
}

/// Incident energy at which the spec's fields are exactly resonant.
pub fn resonance_point(spec: &BarrierSpec) -> Result<ResonancePoint<f64>> {
    let rb: ReducedBarrier<f64> = spec.reduce(Phase::FieldMin)?;
    if rb.eps() == 0.0 {
        return Err(Error::NoResonance {
            u: rb.u(),
            detail: "no oscillating field".into(),
        });
    }
    let amp = solve_resonant_u(rb.eps())?;
    let resonant_offset = spec.energy_scale() * amp.u * amp.u / 2.0;
    let at_res = spec.with_barrier_offset(resonant_offset)?;
    let shape = ReducedBarrier::shape(amp.u, amp.eps_r, Phase::FieldMin)?;
    Ok(ResonancePoint {
        eps_r: amp.eps_r,
        u_r: amp.u,
        tau0_hat: amp.tau0_hat,
        resonant_offset,
        detuning: spec.barrier_offset() - resonant_offset,
        width: resonance_width(&at_res),
        exit_x: dynamics::position(&shape, amp.tau0_hat, 0.0) * spec.length_scale(),
    })
}

/// `ln(hbar Omega / (a |q| E))`, the large logarithm of the asymptotic theory.
pub fn quantum_log(spec: &BarrierSpec) -> f64 {
    (spec.quantum() / (spec.de_broglie_length() * spec.charge().abs() * spec.osc_amplitude())).ln()
}

/// Asymptotic resonant energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResonance {
    /// `V - E_R = F0^2 / (6 m Omega^2) * ln^2(hbar Omega / (a q E))`, J.
    pub resonant_offset: f64,
    /// `E_R - E`, J.
    pub detuning: f64,
    pub log_factor: f64,
}

/// Large-`u` resonant energy of the spec's fields.
pub fn resonant_energy(spec: &BarrierSpec) -> Result<AsymptoticResonance> {
    let log = quantum_log(spec);
    if !(log > 0.0) || !log.is_finite() {
        return Err(Error::OutOfValidity {
            what: "resonant energy",
            detail: format!("hbar*Omega/(a q E) must exceed 1 (log = {log})"),
        });
    }
    let f0 = spec.static_force();
    let omega = spec.angular_frequency();
    let resonant_offset = f0 * f0 / (6.0 * spec.mass() * omega * omega) * log * log;
    Ok(AsymptoticResonance {
        resonant_offset,
        detuning: spec.barrier_offset() - resonant_offset,
        log_factor: log,
    })
}

/// Resonance width `hbar / (2 sqrt3 tau00)`, J.
pub fn resonance_width(spec: &BarrierSpec) -> f64 {
    HBAR / (2.0 * 3f64.sqrt() * spec.static_time())
}

/// `ln w = -2 (E_R - E) / (hbar Omega) * log`.
pub fn asymptotic_exponent(detuning: f64, quantum: f64, log_factor: f64) -> f64 {
    -2.0 * detuning / quantum * log_factor
}

/// `ln w = 2 N ln(a q E / hbar Omega)` with `N = (E_R - E) / hbar Omega`.
pub fn quanta_exponent(detuning: f64, quantum: f64, log_factor: f64) -> f64 {
    let n = detuning / quantum;
    2.0 * n * (-log_factor)
}

/// Penetration exponents `ln w` by every available route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenetrationExponent {
    /// `-theta g` of the dominant field-minimum saddle; `None` beyond the window.
    pub exact: Option<f64>,
    pub exact_branch: Option<Branch>,
    /// `-theta g` at the field maximum.
    pub field_max: f64,
    /// Large-`u` form, available below the asymptotic resonant energy.
    pub asymptotic: Option<f64>,
    /// Peak estimate `2 R ln(a q E / hbar Omega)`.
    pub peak: f64,
    /// `-A0`.
    pub static_exponent: f64,
    /// The dominant field-minimum action is negative: the level lies above
    /// `E_R` and the single-trajectory result no longer applies.
    pub beyond_resonance: bool,
}

impl PenetrationExponent {
    /// Largest exponent over the saddles that apply.
    pub fn total(&self) -> Option<f64> {
        match (self.exact, self.beyond_resonance) {
            (_, true) => None,
            (Some(e), false) => Some(e.max(self.field_max)),
            (None, false) => Some(self.field_max),
        }
    }
}

pub fn penetration_exponent(spec: &BarrierSpec, r: f64) -> Result<PenetrationExponent> {
    if !(r >= 1.0) {
        return Err(Error::invalid("R", format!("must be >= 1, got {r}")));
    }
    let min: ReducedBarrier<f64> = spec.reduce(Phase::FieldMin)?;
    let max = min.with_phase(Phase::FieldMax);
    let theta = min.theta();
    let field_max = -theta * dynamics::dominant(&max)?.action_g;
    let (exact, exact_branch) = match dynamics::dominant(&min) {
        Ok(s) => (Some(-theta * s.action_g), Some(s.branch)),
        Err(Error::NoSaddle { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let beyond_resonance = exact.is_some_and(|e| e > 0.0);
    let (asymptotic, peak) = if min.eps() > 0.0 {
        let log = quantum_log(spec);
        let asym = resonant_energy(spec)
            .ok()
            .filter(|a| a.detuning >= 0.0)
            .map(|a| asymptotic_exponent(a.detuning, spec.quantum(), a.log_factor));
        (asym, -2.0 * r * log)
    } else {
        (None, f64::NEG_INFINITY)
    };
    Ok(PenetrationExponent {
        exact,
        exact_branch,
        field_max,
        asymptotic,
        peak,
        static_exponent: -spec.static_wkb_exponent(),
        beyond_resonance,
    })
}

/// One-photon-assisted exponent `2 [ln(a q E / hbar Omega) + Omega tau00] - A0`.
pub fn one_photon_exponent(spec: &BarrierSpec) -> f64 {
    2.0 * (-quantum_log(spec) + spec.angular_frequency() * spec.static_time()) - spec.static_wkb_exponent()
}

/// `eps e^u / u`; photon-assisted tunneling dominates when it exceeds 1.
pub fn threshold_ratio(spec: &BarrierSpec) -> f64 {
    let u = spec.angular_frequency() * spec.static_time();
    let eps = spec.osc_amplitude() / spec.static_field();
    eps * u.exp() / u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PatOutcome {
    /// Below threshold: plain tunneling wins, exponent `-A0`.
    StaticDominant { ln_w: f64 },
    Assisted {
        /// Optimal absorbed energy, J.
        delta_e: f64,
        ln_w: f64,
        /// The optimum sits at the barrier top.
        saturated: bool,
        /// Under-barrier time `ln(hbar Omega / (a q E)) / Omega`, s.
        tau0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatOptimum {
    pub outcome: PatOutcome,
    /// `-theta g` of the exact field-maximum trajectory, for comparison.
    pub exact_field_max: f64,
    /// Exact energy gain `W - F0 x_exit` on that trajectory, J.
    pub exact_delta_e: f64,
    pub threshold_ratio: f64,
}

const PAT_GRID: usize = 64;

/// Maximises `2 (dE / hbar Omega) ln(a q E / hbar Omega) - A0(E + dE)` over
/// `dE in [0, W]`.
pub fn pat_optimize(spec: &BarrierSpec) -> Result<PatOptimum> {
    let rb: ReducedBarrier<f64> = spec.reduce(Phase::FieldMax)?;
    if rb.eps() == 0.0 {
        return Err(Error::invalid("osc_amplitude", "photon-assisted tunneling needs an oscillating field"));
    }
    let exact = dynamics::dominant(&rb)?;
    let exact_field_max = -rb.theta() * exact.action_g;
    let exact_delta_e = exact.energy_transfer_hat * spec.energy_scale();
    let ratio = threshold_ratio(spec);
    if ratio < 1.0 {
        return Ok(PatOptimum {
            outcome: PatOutcome::StaticDominant {
                ln_w: -spec.static_wkb_exponent(),
            },
            exact_field_max,
            exact_delta_e,
            threshold_ratio: ratio,
        });
    }
    let w = spec.barrier_offset();
    let quantum = spec.quantum();
    let log = quantum_log(spec);
    let f0 = spec.static_force();
    let m = spec.mass();
    let a0 = |offset: f64| {
        let offset = offset.max(0.0);
        4.0 / 3.0 * offset * (2.0 * m * offset).sqrt() / (f0 * HBAR)
    };
    let objective = |de: f64| -2.0 * de / quantum * log - a0(w - de);

    let grid: Vec<f64> = (0..=PAT_GRID).map(|i| w * i as f64 / PAT_GRID as f64).collect();
    let best = grid
        .iter()
        .enumerate()
        .max_by(|a, b| objective(*a.1).partial_cmp(&objective(*b.1)).expect("finite objective"))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(PAT_GRID)];
    let de = golden_section_max(objective, lo, hi, w * 1e-13);
    let saturated = best == PAT_GRID && (w - de) <= w * 1e-9;
    let ln_w = if saturated {
        -2.0 * w / quantum * log
    } else {
        objective(de)
    };
    Ok(PatOptimum {
        outcome: PatOutcome::Assisted {
            delta_e: if saturated { w } else { de },
            ln_w,
            saturated,
            tau0: log / spec.angular_frequency(),
        },
        exact_field_max,
        exact_delta_e,
        threshold_ratio: ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    StaticWkb,
    PhotonAssisted,
    MultiQuantaTop,
    EuclideanResonance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "flag")]
pub enum ValidityFlag {
    /// `hbar Omega / W` is not small.
    NotSemiclassical { ratio: f64 },
    /// The field-minimum time equation has no root.
    BeyondTwoRootWindow { eps: f64, tangency: f64 },
    /// No exact resonant amplitude could be found at this `u`.
    NoResonantAmplitude,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// Classification ignoring the resonance flag.
    pub pat_regime: Regime,
    /// `eps e^u / u`.
    pub threshold_ratio: f64,
    pub eps_r: Option<f64>,
    pub validity_flags: Vec<ValidityFlag>,
}

/// Classifies the operating regime; `window` is the relative distance from
/// `eps_R` that counts as resonant.
pub fn classify_regime(spec: &BarrierSpec, window: f64) -> Result<RegimeReport> {
    let rb: ReducedBarrier<f64> = spec.reduce(Phase::FieldMin)?;
    let mut flags = Vec::new();
    if !spec.is_semiclassical(SEMICLASSICAL_LIMIT) {
        flags.push(ValidityFlag::NotSemiclassical {
            ratio: spec.semiclassical_ratio(),
        });
    }
    let tangency = dynamics::tangency_eps(rb.u())?;
    if rb.eps() > tangency {
        flags.push(ValidityFlag::BeyondTwoRootWindow {
            eps: rb.eps(),
            tangency,
        });
    }
    let eps_r = match solve_resonant_amplitude(rb.u()) {
        Ok(a) => Some(a.eps_r),
        Err(_) => {
            flags.push(ValidityFlag::NoResonantAmplitude);
            None
        }
    };
    let ratio = threshold_ratio(spec);
    let pat_regime = if rb.eps() == 0.0 || ratio < 1.0 {
        Regime::StaticWkb
    } else {
        match pat_optimize(spec)?.outcome {
            PatOutcome::Assisted { saturated: true, .. } => Regime::MultiQuantaTop,
            PatOutcome::Assisted { .. } => Regime::PhotonAssisted,
            PatOutcome::StaticDominant { .. } => Regime::StaticWkb,
        }
    };
    let resonant = eps_r.is_some_and(|e| rb.eps() > 0.0 && ((rb.eps() - e) / e).abs() < window);
    Ok(RegimeReport {
        regime: if resonant {
            Regime::EuclideanResonance
        } else {
            pat_regime
        },
        pat_regime,
        threshold_ratio: if rb.eps() == 0.0 { 0.0 } else { ratio },
        eps_r,
        validity_flags: flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    /// Incident energy relative to the spec's level, J.
    pub energy: f64,
    /// Dominant exponent over both phases; `None` above the exact `E_R`.
    pub ln_w_exact: Option<f64>,
    pub ln_w_asymptotic: Option<f64>,
    /// Exponent without the oscillating field.
    pub ln_w_static: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCurve {
    pub samples: Vec<CurveSample>,
    /// Exact `E_R` relative to the spec's level, J.
    pub resonant_energy: Option<f64>,
    /// Large-`u` `E_R` relative to the spec's level, J.
    pub resonant_energy_asymptotic: Option<f64>,
    /// Peak estimate `2 R ln(a q E / hbar Omega)` evaluated at the exact `E_R`.
    pub peak_estimate: Option<f64>,
}

/// Penetration exponent against incident energy `E` at fixed fields; `E = 0`
/// is the spec's own level and every `E` must stay below the barrier top.
pub fn resonance_curve(spec: &BarrierSpec, energies: &[f64], r: f64, window: f64) -> Result<ResonanceCurve> {
    if energies.is_empty() {
        return Err(Error::invalid("energies", "empty grid"));
    }
    if energies.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("energies", "grid must be strictly increasing"));
    }
    let top = spec.barrier_offset();
    if energies.iter().any(|&e| !(e < top)) {
        return Err(Error::invalid("energies", "every energy must lie below the barrier top"));
    }
    let resonance = if spec.osc_amplitude() > 0.0 {
        resonance_point(spec).ok()
    } else {
        None
    };
    let mut samples = Vec::with_capacity(energies.len());
    for &e in energies {
        let at = spec.with_barrier_offset(top - e)?;
        let pe = penetration_exponent(&at, r)?;
        let regime = if at.osc_amplitude() > 0.0 {
            classify_regime(&at, window)?.regime
        } else {
            Regime::StaticWkb
        };
        let below_resonance = resonance.is_none_or(|res| e < res.detuning);
        samples.push(CurveSample {
            energy: e,
            ln_w_exact: if below_resonance { pe.total() } else { None },
            ln_w_asymptotic: pe.asymptotic,
            ln_w_static: pe.static_exponent,
            regime,
        });
    }
    let peak_estimate = match resonance {
        Some(res) => Some(penetration_exponent(&spec.with_barrier_offset(res.resonant_offset)?, r)?.peak),
        None => None,
    };
    Ok(ResonanceCurve {
        samples,
        resonant_energy: resonance.map(|r| r.detuning),
        resonant_energy_asymptotic: if spec.osc_amplitude() > 0.0 {
            resonant_energy(spec).ok().map(|a| a.detuning)
        } else {
            None
        },
        peak_estimate,
    })
}

#[cfg(test)]
mod tests;
