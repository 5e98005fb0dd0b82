//! Brute-force checks of the closed-form solution: fixed-step RK4 shooting of
//! the equation of motion, and composite Simpson quadrature of the action
//! integrand along a sampled path. Neither uses the closed-form expressions.

use crate::barrier::ReducedBarrier;
use crate::dynamics::SampledPath;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fewest nodes the quadrature oracle accepts.
pub const MIN_QUADRATURE_NODES: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl<T> {
    /// `N` uniform steps ending exactly at the located `tau0`.
    Subdivisions(usize),
    /// Constant step from `tau = 0`; the last step is shortened to land on `tau0`.
    Fixed(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig<T> {
    pub steps: StepControl<T>,
    /// Step used to locate velocity crossings before the final integration.
    pub scan_step: T,
    /// Give up looking for a crossing beyond this imaginary time.
    pub max_tau: T,
    /// Upper bound on bisection shots for the exit point.
    pub max_shots: usize,
}

impl<T: Scalar> Default for ShootingConfig<T> {
    fn default() -> Self {
        Self {
            steps: StepControl::Subdivisions(4096),
            scan_step: T::lit(1.0 / 256.0),
            max_tau: T::lit(80.0),
            max_shots: 400,
        }
    }
}

/// A trajectory found by shooting.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution<T> {
    pub tau0_hat: T,
    pub exit_x0: T,
    pub path: SampledPath<T>,
    /// 1 for the first crossing of `x' = -u`, 2 for the second.
    pub crossing: usize,
    pub shots: usize,
}

fn accel<T: Scalar>(rb: &ReducedBarrier<T>, tau: T) -> T {
    -T::one() + rb.sign() * rb.eps() * tau.cosh()
}

/// One classical RK4 step of `x' = v, v' = accel(tau)`.
fn rk4_step<T: Scalar>(rb: &ReducedBarrier<T>, tau: T, x: T, v: T, h: T) -> (T, T) {
    let half = h * T::lit(0.5);
    let (k1x, k1v) = (v, accel(rb, tau));
    let (k2x, k2v) = (v + half * k1v, accel(rb, tau + half));
    let (k3x, k3v) = (v + half * k2v, accel(rb, tau + half));
    let (k4x, k4v) = (v + h * k3v, accel(rb, tau + h));
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    (
        x + sixth * (k1x + two * k2x + two * k3x + k4x),
        v + sixth * (k1v + two * k2v + two * k3v + k4v),
    )
}

/// Marches with constant step `h` and stops on the `which`-th sign change of
/// `v + u`, shortening the last step so the scheme lands on it.
fn march_fixed<T: Scalar>(
    rb: &ReducedBarrier<T>,
    x0: T,
    h: T,
    which: usize,
    max_tau: T,
) -> Option<SampledPath<T>> {
    let u = rb.u();
    let mut path = SampledPath {
        tau: vec![T::zero()],
        x: vec![x0],
        v: vec![T::zero()],
    };
    let (mut tau, mut x, mut v) = (T::zero(), x0, T::zero());
    let mut seen = 0;
    while tau < max_tau {
        let (xn, vn) = rk4_step(rb, tau, x, v, h);
        let (r0, r1) = (v + u, vn + u);
        let before = r0.signum();
        // a crossing that lands exactly on a node is counted on arrival only
        if (r0 > T::zero() && r1 <= T::zero()) || (r0 < T::zero() && r1 >= T::zero()) {
            seen += 1;
            if seen == which {
                // partial step theta*h with v(theta) = -u, by bisection on theta
                let (mut lo, mut hi) = (T::zero(), T::one());
                for _ in 0..200 {
                    let mid = (lo + hi) * T::lit(0.5);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let (_, vm) = rk4_step(rb, tau, x, v, h * mid);
                    if (vm + u).signum() == before {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let theta = (lo + hi) * T::lit(0.5);
                let (xe, ve) = rk4_step(rb, tau, x, v, h * theta);
                path.tau.push(tau + h * theta);
                path.x.push(xe);
                path.v.push(ve);
                return Some(path);
            }
        }
        tau = tau + h;
        x = xn;
        v = vn;
        path.tau.push(tau);
        path.x.push(x);
        path.v.push(v);
        if v > T::zero() {
            // past the turning point the velocity only grows
            return None;
        }
    }
    None
}

/// `n` uniform RK4 steps from 0 to `tau_end`.
fn march_uniform<T: Scalar>(rb: &ReducedBarrier<T>, x0: T, tau_end: T, n: usize) -> SampledPath<T> {
    let h = tau_end / T::lit(n as f64);
    let mut path = SampledPath {
        tau: Vec::with_capacity(n + 1),
        x: Vec::with_capacity(n + 1),
        v: Vec::with_capacity(n + 1),
    };
    let (mut x, mut v) = (x0, T::zero());
    path.tau.push(T::zero());
    path.x.push(x);
    path.v.push(v);
    for i in 0..n {
        let tau = h * T::lit(i as f64);
        (x, v) = rk4_step(rb, tau, x, v, h);
        path.tau.push(if i + 1 == n { tau_end } else { h * T::lit((i + 1) as f64) });
        path.x.push(x);
        path.v.push(v);
    }
    path
}

/// Secant iteration for the end time at which `n` uniform steps give `v = -u`.
fn uniform_end_time<T: Scalar>(rb: &ReducedBarrier<T>, guess: T, n: usize) -> Result<T> {
    let resid = |t: T| *march_uniform(rb, T::zero(), t, n).v.last().expect("non-empty") + rb.u();
    let (mut a, mut b) = (guess, guess * (T::one() + T::lit(1e-4)));
    let (mut fa, mut fb) = (resid(a), resid(b));
    let tol = T::lit(T::ROOT_TOL * 0.1) * rb.u();
    for _ in 0..60 {
        if fb.abs() <= tol {
            return Ok(b);
        }
        if fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = resid(b);
    }
    if fb.abs() <= tol * T::lit(100.0) {
        Ok(b)
    } else {
        Err(Error::NoConvergence {
            what: "shooting end time",
            iterations: 60,
            lo: a.min(b).as_f64(),
            hi: a.max(b).as_f64(),
        })
    }
}

/// Finds trajectories by shooting on the unknown exit point `x(0)`.
///
/// Velocity crossings of `-u` are located first (one at the field maximum, up to
/// two at the field minimum); for each, `x(0)` is bisected until the
/// integrated path ends at `x(tau0) = 0`.
pub fn ode_shooting_oracle<T: Scalar>(
    rb: &ReducedBarrier<T>,
    cfg: &ShootingConfig<T>,
) -> Result<Vec<ShootingSolution<T>>> {
    let mut out = Vec::new();
    for which in 1..=2 {
        let Some(scan) = march_fixed(rb, T::zero(), cfg.scan_step, which, cfg.max_tau) else {
            break;
        };
        let scan_end = *scan.tau.last().expect("non-empty");
        let integrate: Box<dyn Fn(T) -> Option<SampledPath<T>>> = match cfg.steps {
            StepControl::Fixed(h) => Box::new(move |x0| march_fixed(rb, x0, h, which, cfg.max_tau)),
            StepControl::Subdivisions(n) => {
                let end = uniform_end_time(rb, scan_end, n)?;
                Box::new(move |x0| Some(march_uniform(rb, x0, end, n)))
            }
        };
        let end_x = |x0: T| -> Result<T> {
            integrate(x0)
                .and_then(|p| p.x.last().copied())
                .ok_or(Error::NoConvergence {
                    what: "shooting integration",
                    iterations: 0,
                    lo: x0.as_f64(),
                    hi: x0.as_f64(),
                })
        };
        let (mut lo, mut hi) = (-T::one(), T::one());
        let mut shots = 0;
        while end_x(lo)? > T::zero() || end_x(hi)? < T::zero() {
            lo = lo * T::lit(2.0);
            hi = hi * T::lit(2.0);
            shots += 2;
            if shots > cfg.max_shots {
                return Err(Error::NoConvergence {
                    what: "shooting bracket",
                    iterations: shots,
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
        }
        loop {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            shots += 1;
            if shots > cfg.max_shots {
                return Err(Error::NoConvergence {
                    what: "shooting on exit point",
                    iterations: shots,
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
            let r = end_x(mid)?;
            if r == T::zero() {
                lo = mid;
                hi = mid;
                break;
            }
            if r < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let exit = (lo + hi) * T::lit(0.5);
        let path = integrate(exit).expect("bracketed shot integrates");
        out.push(ShootingSolution {
            tau0_hat: *path.tau.last().expect("non-empty"),
            exit_x0: exit,
            path,
            crossing: which,
            shots,
        });
    }
    Ok(out)
}

/// Composite Simpson rule over uniformly spaced samples (odd count).
pub fn simpson<T: Scalar>(values: &[T], h: T) -> T {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let mut acc = values[0] + values[n - 1];
    for (i, &y) in values.iter().enumerate().take(n - 1).skip(1) {
        acc = acc + y * if i % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
    }
    acc * h / T::lit(3.0)
}

/// Action in units of theta by quadrature of
/// `2 * integral of [x'^2/2 + u^2/2 - x (1 - s eps cosh tau)] dtau`
/// along a uniformly sampled path.
pub fn action_quadrature_oracle<T: Scalar>(rb: &ReducedBarrier<T>, path: &SampledPath<T>) -> Result<T> {
    let n = path.len();
    if n < MIN_QUADRATURE_NODES || n.is_multiple_of(2) || path.x.len() != n || path.v.len() != n {
        return Err(Error::InsufficientSamples {
            required: MIN_QUADRATURE_NODES,
            got: n,
        });
    }
    let h = (path.tau[n - 1] - path.tau[0]) / T::lit((n - 1) as f64);
    let uniform = path
        .tau
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= h * T::lit(1e-6));
    if !uniform {
        return Err(Error::invalid("path", "quadrature needs uniformly spaced samples"));
    }
    let (u, eps, s) = (rb.u(), rb.eps(), rb.sign());
    let half = T::lit(0.5);
    let integrand: Vec<T> = (0..n)
        .map(|i| {
            let (t, x, v) = (path.tau[i], path.x[i], path.v[i]);
            v * v * half + u * u * half - x * (T::one() - s * eps * t.cosh())
        })
        .collect();
    Ok(T::lit(2.0) * simpson(&integrand, h))
}
