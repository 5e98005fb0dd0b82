//! Dimensional barrier description and its reduction to dimensionless form.
//!
//! The barrier is `V - x (E0 + E cos(Omega t))` for `x > 0` and zero for `x < 0`.
//! A particle sitting `W = V - E` below the top sees a force `F0 = |q| E0`. With
//! the static under-barrier time `tau00 = sqrt(2 m W) / F0` the whole problem
//! is governed by
//!
//! * `u = Omega * tau00`,
//! * `eps = E / E0`,
//! * `theta = F0^2 / (m hbar Omega^3)`, the action scale,
//!
//! together with the phase of the oscillation at which the imaginary-time
//! trajectory is launched.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::units::constants::HBAR;

/// Default upper bound on `hbar * Omega / W` for the semiclassical regime.
pub const SEMICLASSICAL_LIMIT: f64 = 0.1;

/// Moment of the oscillation period around which the trajectory is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    /// Field maximum, barrier thinnest: photon-assisted tunneling.
    FieldMax,
    /// Field minimum, barrier thickest: Euclidean resonance.
    FieldMin,
}

impl Phase {
    /// Sign `s` multiplying the oscillating force in imaginary time.
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Phase::FieldMin => T::one(),
            Phase::FieldMax => -T::one(),
        }
    }
}

/// Particle, barrier and fields in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierSpec {
    mass: f64,
    charge: f64,
    barrier_offset: f64,
    static_field: f64,
    osc_amplitude: f64,
    angular_frequency: f64,
}

impl BarrierSpec {
    /// `mass` kg, `charge` C, `barrier_offset` J (`V - E`), fields in V/m,
    /// `angular_frequency` rad/s.
    pub fn new(
        mass: f64,
        charge: f64,
        barrier_offset: f64,
        static_field: f64,
        osc_amplitude: f64,
        angular_frequency: f64,
    ) -> Result<Self> {
        let positive = |v: f64, field: &'static str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
            }
        };
        positive(mass, "mass")?;
        positive(barrier_offset, "barrier_offset")?;
        positive(static_field, "static_field")?;
        positive(angular_frequency, "angular_frequency")?;
        if !(charge.is_finite() && charge != 0.0) {
            return Err(Error::invalid("charge", format!("must be finite and non-zero, got {charge}")));
        }
        if !(osc_amplitude.is_finite() && osc_amplitude >= 0.0) {
            return Err(Error::invalid(
                "osc_amplitude",
                format!("must be finite and >= 0, got {osc_amplitude}"),
            ));
        }
        Ok(Self {
            mass,
            charge,
            barrier_offset,
            static_field,
            osc_amplitude,
            angular_frequency,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    /// `V - E` in J.
    pub fn barrier_offset(&self) -> f64 {
        self.barrier_offset
    }
    pub fn static_field(&self) -> f64 {
        self.static_field
    }
    pub fn osc_amplitude(&self) -> f64 {
        self.osc_amplitude
    }
    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    /// Same particle and fields, different distance below the barrier top.
    pub fn with_barrier_offset(&self, barrier_offset: f64) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            barrier_offset,
            self.static_field,
            self.osc_amplitude,
            self.angular_frequency,
        )
    }

    pub fn with_osc_amplitude(&self, osc_amplitude: f64) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            self.barrier_offset,
            self.static_field,
            osc_amplitude,
            self.angular_frequency,
        )
    }

    /// Static force `F0 = |q| E0`, N.
    pub fn static_force(&self) -> f64 {
        self.charge.abs() * self.static_field
    }

    /// Static under-barrier time `sqrt(2 m W) / F0`, s.
    pub fn static_time(&self) -> f64 {
        (2.0 * self.mass * self.barrier_offset).sqrt() / self.static_force()
    }

    /// `a = hbar / sqrt(2 m W)`, of the order of the de Broglie wavelength.
    pub fn de_broglie_length(&self) -> f64 {
        HBAR / (2.0 * self.mass * self.barrier_offset).sqrt()
    }

    /// Energy quantum of the oscillating field, J.
    pub fn quantum(&self) -> f64 {
        HBAR * self.angular_frequency
    }

    /// `hbar Omega / W`; small in the semiclassical regime.
    pub fn semiclassical_ratio(&self) -> f64 {
        self.quantum() / self.barrier_offset
    }

    pub fn is_semiclassical(&self, limit: f64) -> bool {
        self.semiclassical_ratio() < limit
    }

    /// Length unit of the reduced coordinate, `F0 / (m Omega^2)`, m.
    pub fn length_scale(&self) -> f64 {
        self.static_force() / (self.mass * self.angular_frequency * self.angular_frequency)
    }

    /// Energy unit of the reduced problem, `F0^2 / (m Omega^2) = theta * hbar * Omega`, J.
    pub fn energy_scale(&self) -> f64 {
        self.static_force() * self.length_scale()
    }

    /// Dimensionless parameters at the requested phase.
    pub fn reduce<T: Scalar>(&self, phase: Phase) -> Result<ReducedBarrier<T>> {
        let omega = self.angular_frequency;
        let force = self.static_force();
        let u = omega * (2.0 * self.mass * self.barrier_offset).sqrt() / force;
        let eps = self.osc_amplitude / self.static_field;
        let theta = (force / omega) * (force / omega) / (self.mass * HBAR * omega);
        ReducedBarrier::new(T::lit(u), T::lit(eps), T::lit(theta), phase)
    }

    /// Static WKB exponent `A0 = (4/3) W tau00 / hbar`; the probability is `exp(-A0)`.
    pub fn static_wkb_exponent(&self) -> f64 {
        4.0 / 3.0 * self.barrier_offset * self.static_time() / HBAR
    }
}

/// Dimensionless form of a [`BarrierSpec`] at a given phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedBarrier<T> {
    u: T,
    eps: T,
    theta: T,
    phase: Phase,
}

impl<T: Scalar> ReducedBarrier<T> {
    pub fn new(u: T, eps: T, theta: T, phase: Phase) -> Result<Self> {
        if !(u.is_finite() && u > T::zero()) {
            return Err(Error::invalid("u", format!("must be finite and > 0, got {u}")));
        }
        if !(theta.is_finite() && theta > T::zero()) {
            return Err(Error::invalid("theta", format!("must be finite and > 0, got {theta}")));
        }
        if !(eps.is_finite() && eps >= T::zero()) {
            return Err(Error::invalid("eps", format!("must be finite and >= 0, got {eps}")));
        }
        if eps >= T::one() {
            return Err(Error::FieldRatioTooLarge { eps: eps.as_f64() });
        }
        Ok(Self { u, eps, theta, phase })
    }

    /// Shape-only barrier (`theta = 1`), for callers that only need `g`.
    pub fn shape(u: T, eps: T, phase: Phase) -> Result<Self> {
        Self::new(u, eps, T::one(), phase)
    }

    pub fn u(&self) -> T {
        self.u
    }
    pub fn eps(&self) -> T {
        self.eps
    }
    pub fn theta(&self) -> T {
        self.theta
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn sign(&self) -> T {
        self.phase.sign()
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        Self { phase, ..*self }
    }

    pub fn with_eps(&self, eps: T) -> Result<Self> {
        Self::new(self.u, eps, self.theta, self.phase)
    }

    pub fn with_u(&self, u: T) -> Result<Self> {
        Self::new(u, self.eps, self.theta, self.phase)
    }

    /// Reduced barrier offset `W / (theta hbar Omega) = u^2 / 2`.
    pub fn reduced_offset(&self) -> T {
        self.u * self.u * T::lit(0.5)
    }

    /// Static action in units of theta: `(2/3) u^3`.
    pub fn static_action(&self) -> T {
        T::lit(2.0 / 3.0) * self.u * self.u * self.u
    }

    /// Static WKB exponent `A0 = theta * (2/3) u^3`.
    pub fn static_wkb_exponent(&self) -> T {
        self.theta * self.static_action()
    }

    /// Rebuilds the dimensional spec given the three scales the reduction drops.
    pub fn expand(&self, mass: f64, charge: f64, angular_frequency: f64) -> Result<BarrierSpec> {
        let (u, eps, theta) = (self.u.as_f64(), self.eps.as_f64(), self.theta.as_f64());
        let quantum = HBAR * angular_frequency;
        let barrier_offset = theta * quantum * u * u / 2.0;
        let force = (theta * mass * quantum).sqrt() * angular_frequency;
        let static_field = force / charge.abs();
        BarrierSpec::new(
            mass,
            charge,
            barrier_offset,
            static_field,
            eps * static_field,
            angular_frequency,
        )
    }
}
