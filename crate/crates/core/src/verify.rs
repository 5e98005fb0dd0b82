//! Self-check suites run by `euclidres verify`: closed forms against the
//! brute-force oracles, the resonance anchors and asymptotic convergence.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::barrier::{Phase, ReducedBarrier};
use crate::dynamics::oracle::{action_quadrature_oracle, ode_shooting_oracle, ShootingConfig, MIN_QUADRATURE_NODES};
use crate::dynamics::{self, action_closed_form, solve_tunneling_time, trajectory};
use crate::error::{Error, Result};
use crate::resonance::{asymptotic_resonant_amplitude, solve_resonant_amplitude};

pub const TRAJECTORY_TOL: f64 = 1e-8;
pub const ACTION_TOL: f64 = 1e-8;
pub const STATIC_TOL: f64 = 1e-12;

/// Points at which the oracles are compared with the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridPreset {
    /// `u in {0.5, 1, 2, 4}`, `eps in {0, 0.05, 0.2}`, both phases.
    #[default]
    Default,
    /// `u in {1, 2}`, `eps in {0, 0.2}`, both phases.
    Quick,
}

impl GridPreset {
    pub fn points(self) -> Vec<(f64, f64, Phase)> {
        let (us, epss): (&[f64], &[f64]) = match self {
            GridPreset::Default => (&[0.5, 1.0, 2.0, 4.0], &[0.0, 0.05, 0.2]),
            GridPreset::Quick => (&[1.0, 2.0], &[0.0, 0.2]),
        };
        let mut out = Vec::new();
        for &u in us {
            for &eps in epss {
                for phase in [Phase::FieldMax, Phase::FieldMin] {
                    out.push((u, eps, phase));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub grid: GridPreset,
    /// Relative error injected into the closed-form action, to prove the
    /// suites can fail.
    pub perturb_action: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Routine under test.
    pub target: String,
    pub observed: f64,
    pub expected: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub runtime_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub suites: Vec<SuiteReport>,
    pub runtime_s: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.suite.as_str(), c)))
            .filter(|(_, c)| !c.passed)
    }
}

fn check(name: String, target: &str, observed: f64, bound: f64) -> Check {
    Check {
        name,
        target: target.into(),
        observed,
        expected: format!("<= {bound:e}"),
        passed: observed <= bound,
    }
}

fn within(name: &str, target: &str, observed: f64, lo: f64, hi: f64) -> Check {
    Check {
        name: name.into(),
        target: target.into(),
        observed,
        expected: format!("in [{lo}, {hi}]"),
        passed: (lo..=hi).contains(&observed),
    }
}

fn label(u: f64, eps: f64, phase: Phase) -> String {
    let p = match phase {
        Phase::FieldMax => "field-max",
        Phase::FieldMin => "field-min",
    };
    format!("u={u} eps={eps} {p}")
}

fn timed(suite: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = f()?;
    Ok(SuiteReport {
        suite: suite.into(),
        checks,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Closed-form trajectories against RK4 shooting, root by root.
pub fn trajectory_suite(grid: GridPreset) -> Result<Vec<Check>> {
    let cfg = ShootingConfig::default();
    let mut out = Vec::new();
    for (u, eps, phase) in grid.points() {
        let rb = ReducedBarrier::shape(u, eps, phase)?;
        let roots = match solve_tunneling_time(&rb) {
            Ok(r) => r,
            Err(Error::NoSaddle { .. }) => Vec::new(),
            Err(e) => return Err(e),
        };
        let shots = ode_shooting_oracle(&rb, &cfg)?;
        let name = label(u, eps, phase);
        out.push(Check {
            name: format!("{name} root count"),
            target: "solve_tunneling_time".into(),
            observed: roots.len() as f64,
            expected: format!("= {} (shooting)", shots.len()),
            passed: roots.len() == shots.len(),
        });
        for (root, shot) in roots.iter().zip(&shots) {
            let analytic = trajectory(&rb, root.tau0_hat, shot.path.len())?;
            out.push(check(
                format!("{name} {:?} path", root.branch),
                "trajectory",
                analytic.relative_sup_distance(&shot.path),
                TRAJECTORY_TOL,
            ));
        }
    }
    Ok(out)
}

/// Closed-form action against Simpson quadrature along the closed-form path.
pub fn action_suite(grid: GridPreset, perturb: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (u, eps, phase) in grid.points() {
        let rb = ReducedBarrier::shape(u, eps, phase)?;
        let roots = match solve_tunneling_time(&rb) {
            Ok(r) => r,
            Err(Error::NoSaddle { .. }) => continue,
            Err(e) => return Err(e),
        };
        for root in roots {
            let path = trajectory(&rb, root.tau0_hat, MIN_QUADRATURE_NODES)?;
            let quad = action_quadrature_oracle(&rb, &path)?;
            let closed = action_closed_form(&rb, root.tau0_hat) * (1.0 + perturb);
            out.push(check(
                format!("{} {:?} action", label(u, eps, phase), root.branch),
                "action_closed_form",
                (closed - quad).abs() / quad.abs(),
                ACTION_TOL,
            ));
        }
    }
    Ok(out)
}

/// `eps = 0` reproduces `g = 2u^3/3`.
pub fn static_suite(perturb: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for u in [0.5, 1.0, 2.0, 4.0, 8.0] {
        for phase in [Phase::FieldMax, Phase::FieldMin] {
            let rb = ReducedBarrier::shape(u, 0.0, phase)?;
            let s = dynamics::dominant(&rb)?;
            let g = action_closed_form(&rb, s.tau0_hat) * (1.0 + perturb);
            let expected = 2.0 / 3.0 * u * u * u;
            out.push(check(
                label(u, 0.0, phase),
                "action_closed_form",
                (g - expected).abs() / expected,
                STATIC_TOL,
            ));
        }
    }
    Ok(out)
}

/// Published resonance anchors at `u = 1` and `u = 2`.
pub fn anchor_suite() -> Result<Vec<Check>> {
    let one = solve_resonant_amplitude(1.0f64)?;
    let two = solve_resonant_amplitude(2.0f64)?;
    let t = "solve_resonant_amplitude";
    Ok(vec![
        within("u=1 tau0/u", t, one.tau0_hat, 2.9, 3.1),
        within("u=1 eps_R", t, one.eps_r, 0.18, 0.21),
        within("u=2 tau0/u", t, two.tau0_hat / 2.0, 2.33, 2.43),
        within("u=2 eps_R", t, two.eps_r, 0.043, 0.051),
    ])
}

/// Relative log error of the asymptotic `eps_R`, which must fall with `u`.
pub fn asymptotic_log_errors(us: &[f64]) -> Result<Vec<f64>> {
    us.iter()
        .map(|&u| {
            let exact = solve_resonant_amplitude(u)?.eps_r.ln();
            Ok((asymptotic_resonant_amplitude(u).ln() - exact).abs() / exact.abs())
        })
        .collect()
}

pub const CONVERGENCE_US: [f64; 5] = [3.0, 4.0, 5.0, 6.0, 8.0];

pub fn convergence_suite() -> Result<Vec<Check>> {
    let errs = asymptotic_log_errors(&CONVERGENCE_US)?;
    let t = "asymptotic_resonant_amplitude";
    let mut out = vec![check("u=6 log error".into(), t, errs[3], 0.15)];
    for (w, us) in errs.windows(2).zip(CONVERGENCE_US.windows(2)) {
        out.push(Check {
            name: format!("log error falls from u={} to u={}", us[0], us[1]),
            target: t.into(),
            observed: w[1],
            expected: format!("< {}", w[0]),
            passed: w[1] < w[0],
        });
    }
    Ok(out)
}

pub fn run(options: VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let suites = vec![
        timed("trajectory-vs-shooting", || trajectory_suite(options.grid))?,
        timed("action-vs-quadrature", || action_suite(options.grid, options.perturb_action))?,
        timed("static-degeneracy", || static_suite(options.perturb_action))?,
        timed("resonance-anchors", anchor_suite)?,
        timed("asymptotic-convergence", convergence_suite)?,
    ];
    Ok(VerifyReport {
        options,
        suites,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}
