//! Resonance peaks of the dissociation rate against the static field.
//!
//! With the oscillating amplitude and frequency fixed, each vibrational level
//! `n` becomes resonant at the static field solving
//! `E0 ln(E0 / E) = K (1 - hbar omega n / 2V)`, `K = Omega sqrt(6 m V) / |q|`.

use serde::{Deserialize, Serialize};

use super::config::SpeciesConfig;
use crate::error::{Error, Result};
use crate::units::constants::BOLTZMANN;
use crate::units::{hz_to_angular, kelvin_to_joule, v_per_m_to_v_per_cm};

const MAX_ITERATIONS: usize = 50;
const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPeak {
    pub n: u32,
    /// Resonant static field, V/cm.
    pub dc_field_position: f64,
    /// Boltzmann weight relative to `n = 0`.
    pub relative_amplitude: f64,
    /// `E0 dE_T / V`, V/cm.
    pub width_in_field: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Hz.
    pub frequency: f64,
    /// Oscillating amplitude, V/cm.
    pub ac_field: f64,
    pub peaks: Vec<SpectrumPeak>,
    /// `E0(0) - E0(1)` of the self-consistent solve, V/cm.
    pub spacing: f64,
    /// `E0(0) hbar omega / 2V`, the spacing with the logarithm held fixed, V/cm.
    pub frozen_log_spacing: f64,
    /// Largest distance of a peak from the chord through the first and last
    /// peaks, relative to `E0(0)`.
    pub affine_deviation: f64,
}

impl Spectrum {
    /// Thermally weighted sum of Gaussian peaks on a static-field axis (V/cm).
    pub fn profile(&self, fields: &[f64]) -> Vec<f64> {
        fields
            .iter()
            .map(|&f| {
                self.peaks
                    .iter()
                    .map(|p| {
                        let z = (f - p.dc_field_position) / p.width_in_field;
                        p.relative_amplitude * (-0.5 * z * z).exp()
                    })
                    .sum()
            })
            .collect()
    }
}

fn log_prefactor(species: &SpeciesConfig, nu: f64) -> f64 {
    hz_to_angular(nu) * (6.0 * species.mass * species.binding_energy).sqrt() / species.charge.abs()
}

/// Solves `x ln(x / ac) = k` by relaxed fixed-point iteration; the relaxation
/// `ln / (ln + 1)` cancels the first-order contraction of `k / ln(x / ac)`.
fn solve_position(k: f64, ac: f64) -> Result<(f64, usize)> {
    let mut x = k.max(ac * std::f64::consts::E);
    let mut trace = vec![x];
    for it in 1..=MAX_ITERATIONS {
        let log = (x / ac).ln();
        if !(log > 0.0) {
            return Err(Error::FixedPoint {
                what: "peak position",
                trace,
            });
        }
        let lambda = log / (log + 1.0);
        let next = x + lambda * (k / log - x);
        trace.push(next);
        if (next - x).abs() <= TOLERANCE * next.abs() {
            return Ok((next, it));
        }
        x = next;
    }
    Err(Error::FixedPoint {
        what: "peak position",
        trace,
    })
}

/// Peaks `n = 0..=n_max` for oscillating amplitude `ac_field` (V/m).
pub fn dissociation_spectrum(species: &SpeciesConfig, nu: f64, n_max: u32, ac_field: f64) -> Result<Spectrum> {
    species.validate()?;
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid("frequency", format!("must be finite and > 0, got {nu}")));
    }
    if !(ac_field.is_finite() && ac_field > 0.0) {
        return Err(Error::invalid("ac_field", format!("must be > 0, got {ac_field}")));
    }
    let hw = species.vibrational_quantum;
    let v = species.binding_energy;
    if !(hw > 0.0) {
        return Err(Error::invalid("hbar_omega", "a spectrum needs a vibrational quantum > 0"));
    }
    if !(n_max as f64 * hw < v) {
        return Err(Error::invalid("n_max", format!("n_max * hbar*omega must stay below V (n_max = {n_max})")));
    }
    let k = log_prefactor(species, nu);
    let kt = BOLTZMANN * species.temperature;
    let dt = kelvin_to_joule(species.thermal_width);
    let mut peaks = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let (x, iterations) = solve_position(k * (1.0 - hw * n as f64 / (2.0 * v)), ac_field)?;
        let relative_amplitude = if n == 0 {
            1.0
        } else if kt == 0.0 {
            0.0
        } else {
            (-(n as f64) * hw / kt).exp()
        };
        peaks.push(SpectrumPeak {
            n,
            dc_field_position: v_per_m_to_v_per_cm(x),
            relative_amplitude,
            width_in_field: v_per_m_to_v_per_cm(x * dt / v),
            iterations,
        });
    }
    let first = peaks[0].dc_field_position;
    let spacing = match peaks.get(1) {
        Some(p) => first - p.dc_field_position,
        None => {
            let (x1, _) = solve_position(k * (1.0 - hw / (2.0 * v)), ac_field)?;
            first - v_per_m_to_v_per_cm(x1)
        }
    };
    let last = peaks[peaks.len() - 1];
    let affine_deviation = peaks
        .iter()
        .map(|p| {
            let chord = if last.n == 0 {
                first
            } else {
                first + (last.dc_field_position - first) * p.n as f64 / last.n as f64
            };
            (p.dc_field_position - chord).abs() / first
        })
        .fold(0.0, f64::max);
    Ok(Spectrum {
        frequency: nu,
        ac_field: v_per_m_to_v_per_cm(ac_field),
        peaks,
        spacing,
        frozen_log_spacing: first * hw / (2.0 * v),
        affine_deviation,
    })
}

/// Shift of the peaks when the mass changes by `delta_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopeShift {
    /// kg.
    pub delta_m: f64,
    /// `dm / 2m`.
    pub relative: f64,
    /// `relative * E0(0)`, V/cm.
    pub absolute: f64,
    /// `d ln E0 / d ln m` from a recomputation at `m + dm` with the logarithm
    /// held at its `m` value; `None` for `dm = 0`.
    pub elasticity: Option<f64>,
    /// Finite relative shift of that recomputation, `sqrt(1 + dm/m) - 1`.
    pub relative_frozen_log: f64,
    /// Finite relative shift of the full self-consistent recomputation.
    pub relative_self_consistent: f64,
    /// Peak width at `n = 0`, V/cm.
    pub width_in_field: f64,
    /// The shift exceeds the peak width.
    pub separable: bool,
    pub shifted: Spectrum,
}

pub fn isotope_shift(
    species: &SpeciesConfig,
    nu: f64,
    n_max: u32,
    ac_field: f64,
    delta_m: f64,
) -> Result<IsotopeShift> {
    if !(delta_m.abs() < species.mass) {
        return Err(Error::invalid("delta_m", "|dm| must be below the mass"));
    }
    let base = dissociation_spectrum(species, nu, n_max, ac_field)?;
    let heavy = SpeciesConfig {
        mass: species.mass + delta_m,
        ..species.clone()
    };
    let shifted = dissociation_spectrum(&heavy, nu, n_max, ac_field)?;
    let e0 = base.peaks[0].dc_field_position;
    let frozen_log = (e0 / base.ac_field).ln();
    let frozen = v_per_m_to_v_per_cm(log_prefactor(&heavy, nu) / frozen_log);
    let relative = delta_m / (2.0 * species.mass);
    let width = base.peaks[0].width_in_field;
    Ok(IsotopeShift {
        delta_m,
        relative,
        absolute: relative * e0,
        elasticity: (delta_m != 0.0).then(|| (frozen / e0).ln() / (heavy.mass / species.mass).ln()),
        relative_frozen_log: frozen / e0 - 1.0,
        relative_self_consistent: shifted.peaks[0].dc_field_position / e0 - 1.0,
        width_in_field: width,
        separable: (relative * e0).abs() > width,
        shifted,
    })
}
