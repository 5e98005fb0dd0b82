//! Physical constants and the conversions used at the API boundary.
//!
//! Everything inside the crate is SI (J, V/m, kg, C, s, m). Electron-volts,
//! V/cm, W/cm^2 and kelvin only appear when values enter or leave.

use serde::{Deserialize, Serialize};

/// CODATA 2018 values. Fixed here so regression output is bit-stable.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// Vacuum permittivity, F/m.
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    /// Elementary charge, C.
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Electron mass, kg.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    /// Boltzmann constant, J/K.
    pub const BOLTZMANN: f64 = 1.380_649e-23;
    /// Unified atomic mass unit, kg.
    pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
}

use constants::*;

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE
}

pub fn joule_to_ev(j: f64) -> f64 {
    j / ELEMENTARY_CHARGE
}

pub fn v_per_cm_to_v_per_m(f: f64) -> f64 {
    f * 100.0
}

pub fn v_per_m_to_v_per_cm(f: f64) -> f64 {
    f / 100.0
}

pub fn kelvin_to_joule(t: f64) -> f64 {
    t * BOLTZMANN
}

pub fn joule_to_kelvin(e: f64) -> f64 {
    e / BOLTZMANN
}

pub fn w_per_m2_to_w_per_cm2(p: f64) -> f64 {
    p * 1e-4
}

pub fn m_to_cm(x: f64) -> f64 {
    x * 100.0
}

pub fn hz_to_angular(nu: f64) -> f64 {
    2.0 * std::f64::consts::PI * nu
}

pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * std::f64::consts::PI)
}

/// How the electromagnetic energy flux of the oscillating field is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerConvention {
    /// `c * eps_vac * E^2`, the convention the published planning numbers follow.
    #[default]
    PaperPeak,
    /// `c * eps_vac * E^2 / 2`, the cycle-averaged Poynting flux.
    TimeAveraged,
}

impl PowerConvention {
    /// Flux in W/m^2 of a field with amplitude `field` V/m.
    pub fn flux(self, field: f64) -> f64 {
        let peak = SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * field * field;
        match self {
            PowerConvention::PaperPeak => peak,
            PowerConvention::TimeAveraged => 0.5 * peak,
        }
    }
}

/// Which under-barrier time a plan reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tau0Reporting {
    /// Exact root rounded to one significant figure in units of the static time
    /// (3 static times at u = 1, as printed in the planning tables).
    #[default]
    PaperLogEstimate,
    /// The exact deep root of the time equation.
    ExactRoot,
}

impl Tau0Reporting {
    /// Ratio tau0/tau00 reported for an exact ratio.
    pub fn ratio(self, exact_ratio: f64) -> f64 {
        match self {
            Tau0Reporting::ExactRoot => exact_ratio,
            Tau0Reporting::PaperLogEstimate => round_one_significant(exact_ratio),
        }
    }
}

fn round_one_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powf(x.abs().log10().floor());
    (x / scale).round() * scale
}

/// Reporting conventions for numbers whose published form rests on unstated choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UnitConventions {
    pub power_convention: PowerConvention,
    pub tau0_reporting: Tau0Reporting,
}

impl UnitConventions {
    /// Short tags echoed into every output record.
    pub fn tags(&self) -> Vec<String> {
        let power = match self.power_convention {
            PowerConvention::PaperPeak => "power=paper-peak (flux = c*eps0*E^2)",
            PowerConvention::TimeAveraged => "power=time-averaged (flux = c*eps0*E^2/2)",
        };
        let tau = match self.tau0_reporting {
            Tau0Reporting::PaperLogEstimate => {
                "tau0=paper-log-estimate (exact ratio tau0/tau00 rounded to one significant figure)"
            }
            Tau0Reporting::ExactRoot => "tau0=exact-root",
        };
        vec![power.to_string(), tau.to_string()]
    }
}
