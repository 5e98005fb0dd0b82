//! Imaginary-time trajectories under the oscillating triangular barrier.
//!
//! In reduced units (`tau = Omega t_imag`, `x` in units of `F0 / (m Omega^2)`)
//! the trajectory obeys `x'' = -1 + s eps cosh(tau)` with `x'(0) = 0`,
//! `x(tau0) = 0` and `x'(tau0) = -u`. The sign `s` is `+1` at the field minimum
//! and `-1` at the field maximum. Integrating once gives the time equation
//!
//! ```text
//! tau0 - s eps sinh(tau0) = u
//! ```
//!
//! which has a single root at the field maximum and zero, one or two roots at
//! the field minimum.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::barrier::{Phase, ReducedBarrier};
use crate::error::{Error, Result};
use crate::rootfind::solve_bracketed;
use crate::scalar::Scalar;

/// Width of the search interval above the turning point of the time equation.
const DEEP_BRACKET: f64 = 50.0;

/// Which solution of the time equation a root is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The only root: field maximum, or no oscillating field.
    Unique,
    /// Field minimum, root below the turning point.
    Perturbative,
    /// Field minimum, root above the turning point; carries the resonance.
    Deep,
    /// Field minimum at the edge of the existence window: both roots merged.
    Tangent,
}

/// A root of the time equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root<T> {
    pub tau0_hat: T,
    pub branch: Branch,
}

/// Everything the closed form gives for one root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySolution<T> {
    /// `Omega * tau0`.
    pub tau0_hat: T,
    /// Reduced exit point `x(0)`; multiply by the spec's length scale for metres.
    pub exit_x0: T,
    /// Action in units of theta: `A = theta * g`.
    pub action_g: T,
    /// Energy transfer in units of `theta hbar Omega`; negative means emission.
    pub energy_transfer_hat: T,
    pub branch: Branch,
}

impl<T: Scalar> TrajectorySolution<T> {
    /// Full action `A = theta * g`.
    pub fn action(&self, rb: &ReducedBarrier<T>) -> T {
        rb.theta() * self.action_g
    }

    /// `ln w = -A`.
    pub fn ln_probability(&self, rb: &ReducedBarrier<T>) -> T {
        -self.action(rb)
    }
}

/// Residual of the time equation, `tau - s eps sinh(tau) - u`.
pub fn time_residual<T: Scalar>(rb: &ReducedBarrier<T>, tau: T) -> T {
    tau - rb.sign() * rb.eps() * tau.sinh() - rb.u()
}

fn time_residual_slope<T: Scalar>(rb: &ReducedBarrier<T>, tau: T) -> T {
    T::one() - rb.sign() * rb.eps() * tau.cosh()
}

/// Turning point `arccosh(1/eps)` of `tau - eps sinh(tau)`.
pub fn turning_point<T: Scalar>(eps: T) -> T {
    eps.recip().acosh()
}

/// Maximum of `tau - eps sinh(tau)` over `tau > 0`: `arccosh(1/eps) - sqrt(1 - eps^2)`.
/// Field-minimum roots exist iff this is at least `u`.
pub fn window_peak<T: Scalar>(eps: T) -> T {
    // arccosh(1/eps) = atanh(s) with s = sqrt(1 - eps^2); a series near eps = 1
    let s = ((T::one() - eps) * (T::one() + eps)).sqrt();
    if s >= T::lit(0.1) {
        return s.atanh() - s;
    }
    let s2 = s * s;
    let mut term = s * s2;
    let mut sum = T::zero();
    for k in 1..12 {
        sum = sum + term / T::lit((2 * k + 1) as f64);
        term = term * s2;
    }
    sum
}

/// Largest field ratio for which field-minimum roots exist at this `u`.
pub fn tangency_eps<T: Scalar>(u: T) -> Result<T> {
    if !(u > T::zero()) {
        return Err(Error::invalid("u", "must be > 0"));
    }
    // window_peak falls monotonically from +inf (eps -> 0) to 0 (eps -> 1).
    let f = |ln_eps: T| window_peak(ln_eps.exp()) - u;
    let df = |ln_eps: T| {
        let e = ln_eps.exp();
        // d/d(ln eps) of arccosh(1/eps) - sqrt(1-eps^2)
        -(T::one() - e * e).sqrt()
    };
    let ln_lo = T::min_positive_value().ln() + T::one();
    let ln = solve_bracketed(f, df, ln_lo, T::lit(-1e-12), T::lit(T::ROOT_TOL) * u, "tangency eps")?;
    Ok(ln.exp())
}

fn ftol<T: Scalar>(rb: &ReducedBarrier<T>) -> T {
    T::lit(T::ROOT_TOL) * rb.u().max(T::lit(1e-3))
}

/// Roots of the time equation, ascending.
///
/// The field maximum always has exactly one root in `(0, u]`. The field
/// minimum has a perturbative and a deep root separated by the turning point,
/// a single tangent root at the window edge, or none (an error).
pub fn solve_tunneling_time<T: Scalar>(rb: &ReducedBarrier<T>) -> Result<Vec<Root<T>>> {
    let (u, eps) = (rb.u(), rb.eps());
    if eps == T::zero() {
        return Ok(vec![Root {
            tau0_hat: u,
            branch: Branch::Unique,
        }]);
    }
    let f = |t: T| time_residual(rb, t);
    let df = |t: T| time_residual_slope(rb, t);
    match rb.phase() {
        Phase::FieldMax => {
            let tau = solve_bracketed(f, df, T::zero(), u, ftol(rb), "field-max time")?;
            Ok(vec![Root {
                tau0_hat: tau,
                branch: Branch::Unique,
            }])
        }
        Phase::FieldMin => {
            let turn = turning_point(eps);
            let peak = f(turn);
            if peak.abs() <= ftol(rb) {
                return Ok(vec![Root {
                    tau0_hat: turn,
                    branch: Branch::Tangent,
                }]);
            }
            if peak < T::zero() {
                return Err(Error::NoSaddle {
                    u: u.as_f64(),
                    eps: eps.as_f64(),
                    peak: (peak + u).as_f64(),
                });
            }
            let pert = solve_bracketed(f, df, T::zero(), turn, ftol(rb), "perturbative time")?;
            let deep = solve_bracketed(
                f,
                df,
                turn,
                turn + T::lit(DEEP_BRACKET),
                ftol(rb),
                "deep time",
            )?;
            Ok(vec![
                Root {
                    tau0_hat: pert,
                    branch: Branch::Perturbative,
                },
                Root {
                    tau0_hat: deep,
                    branch: Branch::Deep,
                },
            ])
        }
    }
}

/// The deep field-minimum root (the tangent root at the window edge).
pub fn deep_root<T: Scalar>(rb: &ReducedBarrier<T>) -> Result<T> {
    let rb = rb.with_phase(Phase::FieldMin);
    let roots = solve_tunneling_time(&rb)?;
    Ok(roots.last().expect("at least one root").tau0_hat)
}

/// Rejects a `tau0` that does not satisfy the time equation.
pub fn check_root<T: Scalar>(rb: &ReducedBarrier<T>, tau0: T) -> Result<()> {
    let tol = T::lit(T::ROOT_TOL * 1e3) * (T::one() + rb.u());
    let r = time_residual(rb, tau0);
    if tau0 > T::zero() && r.abs() <= tol {
        Ok(())
    } else {
        Err(Error::invalid(
            "tau0",
            format!("{tau0} is not a root of the time equation (residual {r})"),
        ))
    }
}

/// Reduced position on the closed-form trajectory ending at `tau0`.
pub fn position<T: Scalar>(rb: &ReducedBarrier<T>, tau0: T, tau: T) -> T {
    (tau0 * tau0 - tau * tau) * T::lit(0.5) - rb.sign() * rb.eps() * (tau0.cosh() - tau.cosh())
}

/// Reduced velocity `dx/dtau`.
pub fn velocity<T: Scalar>(rb: &ReducedBarrier<T>, tau: T) -> T {
    -tau + rb.sign() * rb.eps() * tau.sinh()
}

/// Trajectory sampled uniformly in imaginary time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPath<T> {
    pub tau: Vec<T>,
    pub x: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Scalar> SampledPath<T> {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// `sup |x - other.x| / sup |other.x|` over shared nodes.
    pub fn relative_sup_distance(&self, other: &SampledPath<T>) -> T {
        let scale = other.x.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let diff = self
            .x
            .iter()
            .zip(&other.x)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        diff / scale
    }
}

/// Closed-form path on `[0, tau0]` with `n_samples` uniform nodes.
pub fn trajectory<T: Scalar>(rb: &ReducedBarrier<T>, tau0: T, n_samples: usize) -> Result<SampledPath<T>> {
    check_root(rb, tau0)?;
    if n_samples < 2 {
        return Err(Error::invalid("n_samples", "need at least 2 samples"));
    }
    let step = tau0 / T::lit((n_samples - 1) as f64);
    let tau: Vec<T> = (0..n_samples)
        .map(|i| if i == n_samples - 1 { tau0 } else { step * T::lit(i as f64) })
        .collect();
    let x = tau.iter().map(|&t| position(rb, tau0, t)).collect();
    let v = tau.iter().map(|&t| velocity(rb, t)).collect();
    Ok(SampledPath { tau, x, v })
}

/// Action along the closed-form trajectory, in units of theta.
///
/// `g = u^2 tau0 - tau0^3/3 + 2 s eps (tau0 cosh tau0 - sinh tau0)
///      + eps^2 (2 tau0 - sinh 2 tau0) / 4`
pub fn action_closed_form<T: Scalar>(rb: &ReducedBarrier<T>, tau0: T) -> T {
    let (u, eps, s) = (rb.u(), rb.eps(), rb.sign());
    let two = T::lit(2.0);
    u * u * tau0 - tau0 * tau0 * tau0 / T::lit(3.0)
        + two * s * eps * (tau0 * tau0.cosh() - tau0.sinh())
        + eps * eps * (two * tau0 - (two * tau0).sinh()) / T::lit(4.0)
}

/// Energy transfer `u^2/2 - x(0)` in units of `theta hbar Omega`.
pub fn energy_transfer<T: Scalar>(rb: &ReducedBarrier<T>, tau0: T) -> T {
    rb.reduced_offset() - position(rb, tau0, T::zero())
}

/// Closed-form summary of a root.
pub fn solution_for<T: Scalar>(rb: &ReducedBarrier<T>, root: Root<T>) -> TrajectorySolution<T> {
    let t = root.tau0_hat;
    TrajectorySolution {
        tau0_hat: t,
        exit_x0: position(rb, t, T::zero()),
        action_g: action_closed_form(rb, t),
        energy_transfer_hat: energy_transfer(rb, t),
        branch: root.branch,
    }
}

/// All trajectories at the barrier's phase.
pub fn solve<T: Scalar>(rb: &ReducedBarrier<T>) -> Result<Vec<TrajectorySolution<T>>> {
    Ok(solve_tunneling_time(rb)?
        .into_iter()
        .map(|r| solution_for(rb, r))
        .collect())
}

/// The saddle with the smallest action, which controls the exponent.
pub fn dominant<T: Scalar>(rb: &ReducedBarrier<T>) -> Result<TrajectorySolution<T>> {
    let all = solve(rb)?;
    Ok(all
        .into_iter()
        .min_by(|a, b| a.action_g.partial_cmp(&b.action_g).expect("finite action"))
        .expect("at least one root"))
}

#[cfg(test)]
mod tests;
