use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use euclidres::units::{PowerConvention, Tau0Reporting};
use euclidres::verify::GridPreset;
use euclidres::UnitConventions;

#[derive(Debug, Parser)]
#[command(name = "euclidres", version, about = "Plan and check resonant tunneling through an oscillating barrier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field amplitudes, power, path, time and width at resonance.
    Plan(PlanArgs),
    /// Dissociation peaks against the static field, with optional isotope overlay.
    Spectrum(SpectrumArgs),
    /// Penetration exponent against incident energy at fixed fields.
    Curve(CurveArgs),
    /// Exact and asymptotic resonant amplitude over a range of u.
    Scan(ScanArgs),
    /// Run the oracle suites, or replay a saved JSON record.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SpeciesArgs {
    /// Species config file (TOML, key = value).
    #[arg(long, conflicts_with = "preset")]
    pub species: Option<PathBuf>,
    /// Built-in species: electron or nacl.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerArg {
    /// Flux c*eps0*E^2.
    PaperPeak,
    /// Flux c*eps0*E^2/2.
    TimeAveraged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tau0Arg {
    /// Exact root rounded to one significant figure of tau00.
    PaperLogEstimate,
    /// Exact deep root.
    ExactRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
pub struct ConventionArgs {
    #[arg(long = "power-convention", value_enum, default_value_t = PowerArg::PaperPeak)]
    pub power: PowerArg,
    #[arg(long = "tau0", value_enum, default_value_t = Tau0Arg::PaperLogEstimate)]
    pub tau0: Tau0Arg,
}

impl ConventionArgs {
    pub fn resolve(&self) -> UnitConventions {
        UnitConventions {
            power_convention: match self.power {
                PowerArg::PaperPeak => PowerConvention::PaperPeak,
                PowerArg::TimeAveraged => PowerConvention::TimeAveraged,
            },
            tau0_reporting: match self.tau0 {
                Tau0Arg::PaperLogEstimate => Tau0Reporting::PaperLogEstimate,
                Tau0Arg::ExactRoot => Tau0Reporting::ExactRoot,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PlanArgs {
    #[command(flatten)]
    pub species: SpeciesArgs,
    /// Frequencies in Hz (repeatable); 1e9 when neither this nor --table1 is given.
    #[arg(long = "freq", num_args = 1..)]
    pub freq: Vec<f64>,
    /// The three electron planning columns: 100 MHz, 1 GHz, 30 THz.
    #[arg(long)]
    pub table1: bool,
    /// Reduced frequency u = Omega * tau00.
    #[arg(long, default_value_t = 1.0)]
    pub u: f64,
    #[command(flatten)]
    pub conventions: ConventionArgs,
    /// Exponent multiplier R >= 1 in the rate estimate.
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub species: SpeciesArgs,
    /// Frequency, Hz.
    #[arg(long, default_value_t = 1e6)]
    pub freq: f64,
    /// Highest vibrational level.
    #[arg(long, default_value_t = 10)]
    pub nmax: u32,
    /// Temperature, K (overrides the species value).
    #[arg(long)]
    pub temp: Option<f64>,
    /// Thermal level width, K (overrides the species value).
    #[arg(long)]
    pub thermal_width: Option<f64>,
    /// Oscillating amplitude, V/cm; defaults to the resonant amplitude at --u for the ground level.
    #[arg(long)]
    pub ac_field: Option<f64>,
    /// u used to derive the default oscillating amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub u: f64,
    /// Relative isotope mass change dm/m; overlays the shifted spectrum.
    #[arg(long)]
    pub isotope_dm: Option<f64>,
    /// Points on the dense field axis.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CurveArgs {
    #[command(flatten)]
    pub species: SpeciesArgs,
    /// Frequency, Hz.
    #[arg(long, default_value_t = 1e9)]
    pub freq: f64,
    /// u of the reference level (sets the static field).
    #[arg(long, default_value_t = 1.0)]
    pub u: f64,
    /// Oscillating-to-static field ratio.
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// Lowest energy relative to the reference level, eV; default -0.2 V.
    #[arg(long, allow_hyphen_values = true)]
    pub emin: Option<f64>,
    /// Highest energy relative to the reference level, eV; default +0.2 V.
    #[arg(long, allow_hyphen_values = true)]
    pub emax: Option<f64>,
    /// Grid points.
    #[arg(long, default_value_t = 201)]
    pub n: usize,
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
    /// Relative distance from eps_R classified as resonant.
    #[arg(long, default_value_t = euclidres::resonance::DEFAULT_RESONANCE_WINDOW)]
    pub window: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.5)]
    pub umin: f64,
    #[arg(long, default_value_t = 8.0)]
    pub umax: f64,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridArg {
    Default,
    Quick,
}

impl From<GridArg> for GridPreset {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Default => GridPreset::Default,
            GridArg::Quick => GridPreset::Quick,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = GridArg::Default)]
    pub grid: GridArg,
    /// Relative error injected into the closed-form action.
    #[arg(long, default_value_t = 0.0)]
    pub perturb_action: f64,
    /// Re-run the command recorded in a JSON output and compare every value.
    #[arg(long)]
    pub replay: Option<PathBuf>,
}
