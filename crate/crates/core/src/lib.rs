//! Semiclassical tunneling through a triangular barrier whose slope oscillates
//! in time.
//!
//! The crate computes imaginary-time trajectories and their actions at both
//! extremal phases of the field, locates the Euclidean resonance (the field
//! ratio at which the field-minimum action vanishes), optimises
//! photon-assisted tunneling, and turns all of it into experiment plans for
//! electron ionization, ionic dissociation and isotope separation.
//!
//! Dimensional quantities are SI `f64`. The dimensionless solvers are generic
//! over [`Scalar`] (`f32` or `f64`); the aliases below fix the common choice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod dynamics;
pub mod error;
pub mod planner;
pub mod resonance;
pub mod rootfind;
pub mod scalar;
pub mod units;
pub mod verify;

pub use barrier::{BarrierSpec, Phase, ReducedBarrier};
pub use dynamics::{Branch, Root, SampledPath, TrajectorySolution};
pub use error::{Error, Result};
pub use resonance::{RegimeReport, ResonancePoint};
pub use scalar::Scalar;
pub use units::UnitConventions;

pub type ReducedBarrier64 = ReducedBarrier<f64>;
pub type ReducedBarrier32 = ReducedBarrier<f32>;
pub type TrajectorySolution64 = TrajectorySolution<f64>;
pub type TrajectorySolution32 = TrajectorySolution<f32>;
pub type SampledPath64 = SampledPath<f64>;
pub type ResonancePoint64 = ResonancePoint<f64>;
