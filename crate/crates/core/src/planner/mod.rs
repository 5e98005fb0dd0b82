//! Experiment planning: field amplitudes, power, path, time and width at
//! resonance, dissociation spectra and isotope shifts.

pub mod config;
pub mod spectrum;

use serde::{Deserialize, Serialize};

pub use config::{parse_species, ConfigError, SpeciesConfig};
pub use spectrum::{dissociation_spectrum, isotope_shift, IsotopeShift, Spectrum, SpectrumPeak};

use crate::barrier::{BarrierSpec, Phase, ReducedBarrier};
use crate::dynamics;
use crate::error::{Error, Result};
use crate::resonance::{resonance_width, solve_resonant_amplitude};
use crate::units::{hz_to_angular, joule_to_kelvin, m_to_cm, v_per_m_to_v_per_cm, w_per_m2_to_w_per_cm2, UnitConventions};

/// Conditions of resonance for one species at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    /// Hz.
    pub frequency: f64,
    pub u: f64,
    /// Resonant `E/E0`.
    pub eps: f64,
    /// V/cm.
    pub dc_field: f64,
    /// V/cm.
    pub ac_field: f64,
    /// W/cm^2.
    pub ac_power: f64,
    /// `3 V / (|q| E0)`, cm.
    pub x_exit: f64,
    /// Exit point of the exact resonant trajectory, cm.
    pub x_exit_trajectory: f64,
    /// Reported under-barrier time, s.
    pub tau0: f64,
    /// Exact deep root, s.
    pub tau0_exact: f64,
    /// Resonance width, K.
    pub width: f64,
    /// `eps^(2R) / tau0`, s^-1.
    pub rate: f64,
    pub r: f64,
}

fn check_frequency(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("frequency", format!("must be finite and > 0, got {nu}")))
    }
}

/// Static field putting the species at reduced `u` for frequency `nu`, V/m.
pub fn dc_field_for(species: &SpeciesConfig, nu: f64, u: f64) -> f64 {
    hz_to_angular(nu) * (2.0 * species.mass * species.binding_energy).sqrt() / (species.charge.abs() * u)
}

/// The barrier seen at resonance: offset `V`, static field for `u`, oscillating
/// amplitude `eps_R(u) E0`.
pub fn resonant_spec(species: &SpeciesConfig, nu: f64, u: f64) -> Result<(BarrierSpec, f64, f64)> {
    species.validate()?;
    check_frequency(nu)?;
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::invalid("u", format!("must be finite and > 0, got {u}")));
    }
    let res = solve_resonant_amplitude(u)?;
    let e0 = dc_field_for(species, nu, u);
    let spec = BarrierSpec::new(
        species.mass,
        species.charge,
        species.binding_energy,
        e0,
        res.eps_r * e0,
        hz_to_angular(nu),
    )?;
    Ok((spec, res.eps_r, res.tau0_hat))
}

pub fn plan_at_resonance(
    species: &SpeciesConfig,
    nu: f64,
    u: f64,
    conventions: UnitConventions,
    r: f64,
) -> Result<PlanRow> {
    if !(r >= 1.0) {
        return Err(Error::invalid("R", format!("must be >= 1, got {r}")));
    }
    let (spec, eps, tau_hat) = resonant_spec(species, nu, u)?;
    let omega = spec.angular_frequency();
    let tau00 = spec.static_time();
    let reduced: ReducedBarrier<f64> = ReducedBarrier::shape(u, eps, Phase::FieldMin)?;
    let exit_hat = dynamics::position(&reduced, tau_hat, 0.0);
    let tau0 = conventions.tau0_reporting.ratio(tau_hat / u) * tau00;
    let mut row = PlanRow {
        frequency: nu,
        u,
        eps,
        dc_field: v_per_m_to_v_per_cm(spec.static_field()),
        ac_field: v_per_m_to_v_per_cm(spec.osc_amplitude()),
        ac_power: w_per_m2_to_w_per_cm2(conventions.power_convention.flux(spec.osc_amplitude())),
        x_exit: m_to_cm(3.0 * spec.barrier_offset() / spec.static_force()),
        x_exit_trajectory: m_to_cm(exit_hat * spec.length_scale()),
        tau0,
        tau0_exact: tau_hat / omega,
        width: joule_to_kelvin(resonance_width(&spec)),
        rate: 0.0,
        r,
    };
    row.rate = rate_estimate(&row, r)?;
    Ok(row)
}

/// `tau0^-1 (E/E0)^(2R)`.
pub fn rate_estimate(plan: &PlanRow, r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::invalid("R", format!("must be >= 1, got {r}")));
    }
    if !(plan.tau0 > 0.0 && plan.dc_field > 0.0) {
        return Err(Error::invalid("plan", "tau0 and dc field must be positive"));
    }
    let eps = plan.ac_field / plan.dc_field;
    Ok(eps.powf(2.0 * r) / plan.tau0)
}

/// Frequencies of the three electron planning columns, Hz.
pub const TABLE_FREQUENCIES: [f64; 3] = [1e8, 1e9, 3e13];

pub fn electron_table(conventions: UnitConventions, r: f64) -> Result<Vec<PlanRow>> {
    let species = SpeciesConfig::electron();
    TABLE_FREQUENCIES
        .iter()
        .map(|&nu| plan_at_resonance(&species, nu, 1.0, conventions, r))
        .collect()
}
