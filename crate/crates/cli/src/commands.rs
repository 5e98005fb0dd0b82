use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use euclidres::barrier::BarrierSpec;
use euclidres::dynamics::tangency_eps;
use euclidres::planner::{
    dc_field_for, dissociation_spectrum, isotope_shift, parse_species, plan_at_resonance, resonant_spec, Spectrum,
    SpeciesConfig, TABLE_FREQUENCIES,
};
use euclidres::resonance::{asymptotic_resonant_amplitude, resonance_curve, resonance_width, solve_resonant_amplitude};
use euclidres::units::{ev_to_joule, hz_to_angular, joule_to_ev, v_per_cm_to_v_per_m};
use euclidres::verify::{self, VerifyOptions};
use euclidres::UnitConventions;

use crate::args::{CurveArgs, PlanArgs, ScanArgs, SpeciesArgs, SpectrumArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{Cell, OutputRecord, Table, SCHEMA_VERSION};

type Result<T> = std::result::Result<T, CliError>;

/// Reference spacing of neighbouring dissociation peaks at 1 MHz, V/cm.
const REFERENCE_SPACING: f64 = 0.17;

pub fn read_species(path: &Path) -> Result<SpeciesConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_species(&text)?)
}

pub fn resolve_species(args: &SpeciesArgs, default: &str) -> Result<SpeciesConfig> {
    if let Some(path) = &args.species {
        return read_species(path);
    }
    let name = args.preset.as_deref().unwrap_or(default);
    SpeciesConfig::preset(name).ok_or_else(|| CliError::Usage(format!("unknown preset {name:?} (electron, nacl)")))
}

fn record(
    command: &str,
    args: &impl Serialize,
    species: Option<&SpeciesConfig>,
    conventions: Option<UnitConventions>,
    tables: Vec<Table>,
    mut notes: Vec<String>,
) -> OutputRecord {
    let tags = conventions.map(|c| c.tags()).unwrap_or_default();
    let mut all = Vec::new();
    if let Some(s) = species {
        all.extend(s.assumptions.iter().map(|a| format!("assumption: {a}")));
    }
    all.append(&mut notes);
    OutputRecord {
        schema_version: SCHEMA_VERSION,
        command: command.into(),
        inputs_echo: json!({ "args": args, "species": species }),
        conventions: tags,
        tables,
        notes: all,
    }
}

fn check_r(r: f64) -> Result<()> {
    if r >= 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("R must be >= 1, got {r}")))
    }
}

pub fn plan(args: &PlanArgs, species: &SpeciesConfig) -> Result<OutputRecord> {
    check_r(args.r)?;
    let conventions = args.conventions.resolve();
    let freqs: Vec<f64> = if args.table1 {
        TABLE_FREQUENCIES.to_vec()
    } else if args.freq.is_empty() {
        vec![1e9]
    } else {
        args.freq.clone()
    };
    let mut t = Table::new(
        "plan",
        &[
            "frequency (Hz)",
            "u (1)",
            "eps (1)",
            "dc_field (V/cm)",
            "ac_field (V/cm)",
            "ac_power (W/cm^2)",
            "x_exit (cm)",
            "x_exit_trajectory (cm)",
            "tau0 (s)",
            "tau0_exact (s)",
            "width (K)",
            "rate (1/s)",
            "R (1)",
        ],
    );
    for &nu in &freqs {
        let p = plan_at_resonance(species, nu, args.u, conventions, args.r)?;
        t.push(vec![
            p.frequency.into(),
            p.u.into(),
            p.eps.into(),
            p.dc_field.into(),
            p.ac_field.into(),
            p.ac_power.into(),
            p.x_exit.into(),
            p.x_exit_trajectory.into(),
            p.tau0.into(),
            p.tau0_exact.into(),
            p.width.into(),
            p.rate.into(),
            p.r.into(),
        ]);
    }
    let notes = vec![
        format!("assumption: R = {} in the rate estimate eps^(2R)/tau0", args.r),
        "x_exit is 3V/(|q| E0), the resonant offset taken as the full binding energy; x_exit_trajectory is the exit point of the exact resonant trajectory".into(),
        "rate prefactor is the inverse reported under-barrier time".into(),
    ];
    Ok(record("plan", args, Some(species), Some(conventions), vec![t], notes))
}

fn peaks_table(name: &str, s: &Spectrum, dm: Option<(f64, &Spectrum)>) -> Table {
    let mut cols = vec!["n", "dc_field (V/cm)", "relative_amplitude (1)", "width (V/cm)", "iterations"];
    if dm.is_some() {
        cols.extend(["separation (V/cm)", "separation_recomputed (V/cm)"]);
    }
    let mut t = Table::new(name, &cols);
    for (i, p) in s.peaks.iter().enumerate() {
        let mut row = vec![
            p.n.into(),
            p.dc_field_position.into(),
            p.relative_amplitude.into(),
            p.width_in_field.into(),
            p.iterations.into(),
        ];
        if let Some((rel, base)) = dm {
            let b = base.peaks[i].dc_field_position;
            row.push((rel * b).into());
            row.push((p.dc_field_position - b).into());
        }
        t.push(row);
    }
    t
}

pub fn spectrum(args: &SpectrumArgs, species: &SpeciesConfig) -> Result<OutputRecord> {
    let mut species = species.clone();
    if let Some(t) = args.temp {
        species.temperature = t;
        species.assumptions.retain(|a| !a.starts_with("temperature"));
    }
    if let Some(w) = args.thermal_width {
        species.thermal_width = w;
        species.assumptions.retain(|a| !a.starts_with("thermal level width"));
    }
    species.validate()?;
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let ac = match args.ac_field {
        Some(f) => v_per_cm_to_v_per_m(f),
        None => resonant_spec(&species, args.freq, args.u)?.0.osc_amplitude(),
    };
    let s = dissociation_spectrum(&species, args.freq, args.nmax, ac)?;
    let mut tables = vec![];
    let mut summary = Table::new(
        "summary",
        &["ac_field (V/cm)", "spacing (V/cm)", "frozen_log_spacing (V/cm)", "affine_deviation (1)"],
    );
    summary.push(vec![s.ac_field.into(), s.spacing.into(), s.frozen_log_spacing.into(), s.affine_deviation.into()]);
    tables.push(summary);
    tables.push(peaks_table("peaks", &s, None));

    let mut notes = vec![format!(
        "peak spacing: self-consistent E0(0)-E0(1) = {:.4} V/cm; with the logarithm held fixed E0(0)*hbar_omega/2V = {:.4} V/cm; reference spacing {REFERENCE_SPACING} V/cm",
        s.spacing, s.frozen_log_spacing
    )];
    let shift = match args.isotope_dm {
        Some(frac) => {
            let sh = isotope_shift(&species, args.freq, args.nmax, ac, frac * species.mass)?;
            let mut t = Table::new(
                "isotope",
                &[
                    "dm/m (1)",
                    "relative_shift (1)",
                    "absolute_shift (V/cm)",
                    "relative_shift_frozen_log (1)",
                    "relative_shift_self_consistent (1)",
                    "elasticity (1)",
                    "width (V/cm)",
                    "separable",
                ],
            );
            t.push(vec![
                frac.into(),
                sh.relative.into(),
                sh.absolute.into(),
                sh.relative_frozen_log.into(),
                sh.relative_self_consistent.into(),
                Cell::opt(sh.elasticity),
                sh.width_in_field.into(),
                sh.separable.into(),
            ]);
            tables.push(t);
            tables.push(peaks_table("isotope_peaks", &sh.shifted, Some((sh.relative, &s))));
            notes.push(
                "isotope relative_shift is dm/2m, the first-order response of E0 ~ sqrt(m); relative_shift_frozen_log is the finite recomputation sqrt(1+dm/m)-1; relative_shift_self_consistent also moves the logarithm".into(),
            );
            Some(sh)
        }
        None => None,
    };

    let all = s.peaks.iter().chain(shift.iter().flat_map(|sh| sh.shifted.peaks.iter()));
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (
            lo.min(p.dc_field_position - 5.0 * p.width_in_field),
            hi.max(p.dc_field_position + 5.0 * p.width_in_field),
        )
    });
    let axis: Vec<f64> = (0..args.points)
        .map(|i| lo + (hi - lo) * i as f64 / (args.points - 1) as f64)
        .collect();
    let mut cols = vec!["dc_field (V/cm)", "rate_profile (arb.)"];
    if shift.is_some() {
        cols.push("rate_profile_isotope (arb.)");
    }
    let mut profile = Table::new("profile", &cols);
    let base = s.profile(&axis);
    let iso = shift.as_ref().map(|sh| sh.shifted.profile(&axis));
    for (i, &f) in axis.iter().enumerate() {
        let mut row = vec![f.into(), base[i].into()];
        if let Some(iso) = &iso {
            row.push(iso[i].into());
        }
        profile.push(row);
    }
    tables.push(profile);
    Ok(record("spectrum", args, Some(&species), None, tables, notes))
}

pub fn curve_spec(args: &CurveArgs, species: &SpeciesConfig) -> Result<BarrierSpec> {
    if !(args.freq.is_finite() && args.freq > 0.0) {
        return Err(CliError::Usage(format!("--freq must be > 0, got {}", args.freq)));
    }
    if !(args.u.is_finite() && args.u > 0.0) {
        return Err(CliError::Usage(format!("--u must be > 0, got {}", args.u)));
    }
    let e0 = dc_field_for(species, args.freq, args.u);
    Ok(BarrierSpec::new(
        species.mass,
        species.charge,
        species.binding_energy,
        e0,
        args.eps * e0,
        hz_to_angular(args.freq),
    )?)
}

pub fn curve(args: &CurveArgs, species: &SpeciesConfig) -> Result<OutputRecord> {
    check_r(args.r)?;
    if args.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let spec = curve_spec(args, species)?;
    let v = joule_to_ev(species.binding_energy);
    let emin = args.emin.unwrap_or(-0.2 * v);
    let emax = args.emax.unwrap_or(0.2 * v);
    let energies: Vec<f64> = (0..args.n)
        .map(|i| ev_to_joule(emin + (emax - emin) * i as f64 / (args.n - 1) as f64))
        .collect();
    let c = resonance_curve(&spec, &energies, args.r, args.window)?;
    let mut t = Table::new(
        "curve",
        &["E - E_ref (eV)", "ln_w_exact (1)", "ln_w_asymptotic (1)", "ln_w_static (1)", "regime"],
    );
    for s in &c.samples {
        let regime = serde_json::to_value(s.regime).expect("regime serialises");
        t.push(vec![
            joule_to_ev(s.energy).into(),
            Cell::opt(s.ln_w_exact),
            Cell::opt(s.ln_w_asymptotic),
            s.ln_w_static.into(),
            Cell::text(regime.as_str().unwrap_or_default()),
        ]);
    }
    let mut r = Table::new(
        "resonance",
        &[
            "E_R_exact - E_ref (eV)",
            "E_R_asymptotic - E_ref (eV)",
            "peak_ln_w (1)",
            "R (1)",
            "width (eV)",
        ],
    );
    r.push(vec![
        Cell::opt(c.resonant_energy.map(joule_to_ev)),
        Cell::opt(c.resonant_energy_asymptotic.map(joule_to_ev)),
        Cell::opt(c.peak_estimate),
        args.r.into(),
        joule_to_ev(resonance_width(&spec)).into(),
    ]);
    let notes = vec![
        format!("assumption: R = {} in the peak estimate", args.r),
        "saddle: where two field-minimum roots coexist, ln_w_exact uses the one with the smaller action".into(),
        "ln_w_exact is empty above the exact resonant energy, where a single trajectory no longer describes the process".into(),
        "ln_w_asymptotic is empty above the asymptotic resonant energy or when hbar*Omega/(a q E) <= 1".into(),
    ];
    Ok(record("curve", args, Some(species), None, vec![t, r], notes))
}

pub fn scan(args: &ScanArgs) -> Result<OutputRecord> {
    if !(args.umin > 0.0 && args.umax >= args.umin && args.n >= 1) {
        return Err(CliError::Usage("need 0 < umin <= umax and n >= 1".into()));
    }
    let mut t = Table::new(
        "scan",
        &[
            "u (1)",
            "eps_R (1)",
            "eps_R_asymptotic (1)",
            "tau0/tau00 (1)",
            "tangency_eps (1)",
            "log_error (1)",
        ],
    );
    for i in 0..args.n {
        let u = if args.n == 1 {
            args.umin
        } else {
            args.umin + (args.umax - args.umin) * i as f64 / (args.n - 1) as f64
        };
        let a = solve_resonant_amplitude(u)?;
        let asym = asymptotic_resonant_amplitude(u);
        t.push(vec![
            u.into(),
            a.eps_r.into(),
            asym.into(),
            (a.tau0_hat / u).into(),
            tangency_eps(u)?.into(),
            ((asym.ln() - a.eps_r.ln()).abs() / a.eps_r.ln().abs()).into(),
        ]);
    }
    Ok(record("scan", args, None, None, vec![t], vec![]))
}

fn from_echo<T: DeserializeOwned>(rec: &OutputRecord, key: &str) -> Result<T> {
    serde_json::from_value(rec.inputs_echo[key].clone())
        .map_err(|e| CliError::Usage(format!("replay: cannot read inputs_echo.{key}: {e}")))
}

/// Re-runs the command recorded in `rec` from its inputs echo.
pub fn rerun(rec: &OutputRecord) -> Result<OutputRecord> {
    match rec.command.as_str() {
        "plan" => plan(&from_echo(rec, "args")?, &from_echo(rec, "species")?),
        "spectrum" => spectrum(&from_echo(rec, "args")?, &from_echo(rec, "species")?),
        "curve" => curve(&from_echo(rec, "args")?, &from_echo(rec, "species")?),
        "scan" => scan(&from_echo(rec, "args")?),
        other => Err(CliError::Usage(format!("replay: command {other:?} cannot be replayed"))),
    }
}

/// Returns the verification record and whether every check passed.
pub fn verify(args: &VerifyArgs) -> Result<(OutputRecord, bool)> {
    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let saved: OutputRecord =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("replay: {}: {e}", path.display())))?;
        let fresh = rerun(&saved)?;
        let mut t = Table::new("replay", &["table", "rows", "mismatched_cells", "passed"]);
        let mut ok = saved.tables.len() == fresh.tables.len();
        for (a, b) in saved.tables.iter().zip(&fresh.tables) {
            let mismatched = if a.columns != b.columns || a.rows.len() != b.rows.len() {
                a.rows.iter().map(Vec::len).sum::<usize>().max(1)
            } else {
                a.rows
                    .iter()
                    .zip(&b.rows)
                    .map(|(x, y)| x.iter().zip(y).filter(|(p, q)| p != q).count())
                    .sum()
            };
            ok &= mismatched == 0;
            t.push(vec![
                Cell::text(&a.name),
                a.rows.len().into(),
                mismatched.into(),
                (mismatched == 0).into(),
            ]);
        }
        let rec = record("verify", args, None, None, vec![t], vec![format!("replayed command: {}", saved.command)]);
        return Ok((rec, ok));
    }
    let report = verify::run(VerifyOptions {
        grid: args.grid.into(),
        perturb_action: args.perturb_action,
    })?;
    let mut checks = Table::new("checks", &["suite", "check", "target", "observed", "expected", "passed"]);
    for s in &report.suites {
        for c in &s.checks {
            checks.push(vec![
                Cell::text(&s.suite),
                Cell::text(&c.name),
                Cell::text(&c.target),
                c.observed.into(),
                Cell::text(&c.expected),
                c.passed.into(),
            ]);
        }
    }
    let mut suites = Table::new("suites", &["suite", "checks", "failed", "runtime (s)"]);
    for s in &report.suites {
        suites.push(vec![
            Cell::text(&s.suite),
            s.checks.len().into(),
            s.checks.iter().filter(|c| !c.passed).count().into(),
            s.runtime_s.into(),
        ]);
    }
    let mut notes = vec![format!("total runtime {:.3} s", report.runtime_s)];
    notes.extend(
        report
            .failures()
            .map(|(suite, c)| format!("FAIL {suite} / {}: {} observed {:e}, expected {}", c.name, c.target, c.observed, c.expected)),
    );
    let ok = report.passed();
    Ok((record("verify", args, None, None, vec![checks, suites], notes), ok))
}
