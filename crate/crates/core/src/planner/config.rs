//! Species descriptions and their plain-text `key = value` format (TOML).
//!
//! ```text
//! # NaCl ionic dissociation
//! label = "NaCl"
//! mass_kg = 2.3e-26
//! charge_e = 1
//! V_eV = 9
//! hbar_omega_eV = 0.045
//! T_K = 300
//! thermal_width_K = 1
//! ```
//!
//! Exactly one of `mass_amu` / `mass_kg` is required, as is `V_eV`. Everything
//! else has a default: `label` is empty, `charge_e` 1, `hbar_omega_eV` 0,
//! `T_K` 300 and `thermal_width_K` 1. Unknown or repeated keys are errors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::units::constants::{ATOMIC_MASS_UNIT, ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::units::{ev_to_joule, joule_to_ev};

pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;
pub const DEFAULT_THERMAL_WIDTH_K: f64 = 1.0;

/// Particle and well of one tunneling scenario, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesConfig {
    pub label: String,
    /// kg; the electron mass or an ionic reduced mass.
    pub mass: f64,
    /// C.
    pub charge: f64,
    /// Binding (electron) or dissociation (ion) energy `V`, J.
    pub binding_energy: f64,
    /// Vibrational quantum, J; zero for electrons.
    pub vibrational_quantum: f64,
    /// K.
    pub temperature: f64,
    /// Thermal smearing of each vibrational level, K.
    pub thermal_width: f64,
    /// Values that are assumptions rather than measured inputs.
    pub assumptions: Vec<String>,
}

impl SpeciesConfig {
    pub fn new(label: impl Into<String>, mass: f64, charge: f64, binding_energy: f64) -> Result<Self> {
        let s = SpeciesConfig {
            label: label.into(),
            mass,
            charge,
            binding_energy,
            vibrational_quantum: 0.0,
            temperature: DEFAULT_TEMPERATURE_K,
            thermal_width: DEFAULT_THERMAL_WIDTH_K,
            assumptions: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        if !finite_pos(self.mass) {
            return Err(Error::invalid("mass", format!("must be > 0, got {}", self.mass)));
        }
        if !(self.charge.is_finite() && self.charge != 0.0) {
            return Err(Error::invalid("charge", format!("must be nonzero, got {}", self.charge)));
        }
        if !finite_pos(self.binding_energy) {
            return Err(Error::invalid("V", format!("must be > 0, got {} J", self.binding_energy)));
        }
        if !(self.vibrational_quantum >= 0.0 && self.vibrational_quantum < self.binding_energy) {
            return Err(Error::invalid("hbar_omega", "must satisfy 0 <= hbar*omega < V"));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid("T", format!("must be >= 0, got {}", self.temperature)));
        }
        if !finite_pos(self.thermal_width) {
            return Err(Error::invalid("thermal_width", format!("must be > 0, got {}", self.thermal_width)));
        }
        Ok(())
    }

    /// Electron bound 3.3 eV below the barrier top.
    pub fn electron() -> Self {
        SpeciesConfig {
            label: "electron".into(),
            mass: ELECTRON_MASS,
            charge: -ELEMENTARY_CHARGE,
            binding_energy: ev_to_joule(3.3),
            vibrational_quantum: 0.0,
            temperature: DEFAULT_TEMPERATURE_K,
            thermal_width: DEFAULT_THERMAL_WIDTH_K,
            assumptions: vec![
                "binding energy 3.3 eV inferred from the electron planning table (385 V/cm at 1 GHz, u = 1); not a printed input"
                    .into(),
            ],
        }
    }

    /// NaCl dissociating into Na+ and Cl-.
    pub fn nacl() -> Self {
        SpeciesConfig {
            label: "NaCl".into(),
            mass: 2.3e-26,
            charge: ELEMENTARY_CHARGE,
            binding_energy: ev_to_joule(9.0),
            vibrational_quantum: ev_to_joule(0.045),
            temperature: DEFAULT_TEMPERATURE_K,
            thermal_width: DEFAULT_THERMAL_WIDTH_K,
            assumptions: vec![
                format!("temperature {DEFAULT_TEMPERATURE_K} K is a default"),
                format!("thermal level width {DEFAULT_THERMAL_WIDTH_K} K is a default"),
            ],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "electron" => Some(Self::electron()),
            "nacl" => Some(Self::nacl()),
            _ => None,
        }
    }

    /// Serialises back to the text format.
    pub fn to_config_string(&self) -> String {
        let raw = RawSpecies {
            label: Some(self.label.clone()),
            mass_amu: None,
            mass_kg: Some(self.mass),
            charge_e: Some(self.charge / ELEMENTARY_CHARGE),
            v_ev: Some(joule_to_ev(self.binding_energy)),
            hbar_omega_ev: Some(joule_to_ev(self.vibrational_quantum)),
            t_k: Some(self.temperature),
            thermal_width_k: Some(self.thermal_width),
        };
        toml::to_string(&raw).expect("flat table serialises")
    }
}

/// The file layout; every key optional so missing ones get a precise error.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecies {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mass_amu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mass_kg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    charge_e: Option<f64>,
    #[serde(rename = "V_eV", skip_serializing_if = "Option::is_none")]
    v_ev: Option<f64>,
    #[serde(rename = "hbar_omega_eV", skip_serializing_if = "Option::is_none")]
    hbar_omega_ev: Option<f64>,
    #[serde(rename = "T_K", skip_serializing_if = "Option::is_none")]
    t_k: Option<f64>,
    #[serde(rename = "thermal_width_K", skip_serializing_if = "Option::is_none")]
    thermal_width_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    /// Syntax, unknown or repeated key, or a value of the wrong type; the
    /// message carries line, column and key.
    #[error("{0}")]
    Parse(String),
    #[error("missing required key {0}")]
    Missing(&'static str),
    #[error("mass_amu and mass_kg are mutually exclusive")]
    ConflictingMass,
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub fn parse_species(text: &str) -> Result<SpeciesConfig, ConfigError> {
    let raw: RawSpecies = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string().trim_end().to_string()))?;
    let mass = match (raw.mass_amu, raw.mass_kg) {
        (Some(_), Some(_)) => return Err(ConfigError::ConflictingMass),
        (Some(amu), None) => amu * ATOMIC_MASS_UNIT,
        (None, Some(kg)) => kg,
        (None, None) => return Err(ConfigError::Missing("mass_amu or mass_kg")),
    };
    let v = raw.v_ev.ok_or(ConfigError::Missing("V_eV"))?;
    let mut assumptions = Vec::new();
    let temperature = raw.t_k.unwrap_or_else(|| {
        assumptions.push(format!("temperature {DEFAULT_TEMPERATURE_K} K is a default"));
        DEFAULT_TEMPERATURE_K
    });
    let thermal_width = raw.thermal_width_k.unwrap_or_else(|| {
        assumptions.push(format!("thermal level width {DEFAULT_THERMAL_WIDTH_K} K is a default"));
        DEFAULT_THERMAL_WIDTH_K
    });
    let s = SpeciesConfig {
        label: raw.label.unwrap_or_default(),
        mass,
        charge: raw.charge_e.unwrap_or(1.0) * ELEMENTARY_CHARGE,
        binding_energy: ev_to_joule(v),
        vibrational_quantum: ev_to_joule(raw.hbar_omega_ev.unwrap_or(0.0)),
        temperature,
        thermal_width,
        assumptions,
    };
    s.validate()?;
    Ok(s)
}
