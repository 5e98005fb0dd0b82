use std::process::{Command, Output};

use euclidres_cli::output::{parse_csv_tables, Cell, OutputRecord, Table};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euclidres")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> OutputRecord {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    t.column(name)
        .unwrap_or_else(|| panic!("no column {name} in {:?}", t.columns))
        .into_iter()
        .map(|c| c.as_f64().unwrap())
        .collect()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("euclidres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn table1_has_three_rows() {
    let rec = json(&["plan", "--table1"]);
    let t = rec.table("plan").unwrap();
    assert_eq!(column(t, "frequency (Hz)"), vec![1e8, 1e9, 3e13]);
    let dc = column(t, "dc_field (V/cm)");
    assert!((dc[1] - 384.9).abs() < 0.1);
    assert!(rec.conventions.iter().any(|c| c.starts_with("power=paper-peak")));
}

#[test]
fn csv_and_json_carry_identical_values() {
    for args in [
        &["plan", "--preset", "nacl", "--freq", "1e6"][..],
        &["spectrum", "--preset", "nacl", "--nmax", "4", "--points", "21"],
        &["curve", "--n", "11"],
    ] {
        let rec = json(args);
        let parsed = parse_csv_tables(&stdout(args));
        assert_eq!(parsed.len(), rec.tables.len());
        for (a, b) in rec.tables.iter().zip(&parsed) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.columns, b.columns);
            assert_eq!(a.rows, b.rows, "table {}", a.name);
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["spectrum", "--preset", "nacl", "--isotope-dm", "0.01", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn output_file_matches_stdout() {
    let path = tmp("plan.csv");
    let p = path.to_str().unwrap();
    let out = run(&["plan", "--freq", "1e9", "-o", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["plan", "--freq", "1e9"]));
}

#[test]
fn replay_round_trip() {
    for (name, args) in [
        ("plan.json", &["plan", "--table1"][..]),
        ("curve.json", &["curve", "--n", "9", "--eps", "0.15"]),
        ("spectrum.json", &["spectrum", "--preset", "nacl", "--nmax", "3", "--isotope-dm", "0.02"]),
        ("scan.json", &["scan", "--n", "4"]),
    ] {
        let path = tmp(name);
        let p = path.to_str().unwrap();
        let mut a = args.to_vec();
        a.extend(["--format", "json", "-o", p]);
        assert!(run(&a).status.success());
        let rec = json(&["verify", "--replay", p]);
        let t = rec.table("replay").unwrap();
        assert!(column(t, "mismatched_cells").iter().all(|&m| m == 0.0), "{name}");
    }
}

#[test]
fn replay_detects_tampering() {
    let path = tmp("tampered.json");
    let p = path.to_str().unwrap();
    assert!(run(&["plan", "--freq", "1e9", "--format", "json", "-o", p]).status.success());
    let mut rec: OutputRecord = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    rec.tables[0].rows[0][3] = Cell::Num(1.0);
    std::fs::write(&path, rec.to_json()).unwrap();
    assert_eq!(run(&["verify", "--replay", p]).status.code(), Some(1));
}

#[test]
fn zero_temperature_leaves_one_peak() {
    let rec = json(&["spectrum", "--preset", "nacl", "--temp", "0", "--nmax", "5", "--points", "11"]);
    let amp = column(rec.table("peaks").unwrap(), "relative_amplitude (1)");
    assert_eq!(amp[0], 1.0);
    assert!(amp[1..].iter().all(|&a| a == 0.0));
}

#[test]
fn static_curve_is_monotone() {
    let rec = json(&["curve", "--eps", "0", "--n", "21"]);
    let t = rec.table("curve").unwrap();
    let exact = column(t, "ln_w_exact (1)");
    let stat = column(t, "ln_w_static (1)");
    assert!(exact.windows(2).all(|w| w[1] > w[0]));
    for (a, b) in exact.iter().zip(&stat) {
        assert!((a - b).abs() <= 1e-12 * b.abs());
    }
    let regimes = t.column("regime").unwrap();
    assert!(regimes.iter().all(|c| **c == Cell::text("static-wkb")));
}

#[test]
fn verify_quick_grid_passes() {
    let out = run(&["verify", "--grid", "quick"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn perturbed_action_fails_verification() {
    let out = run(&["verify", "--grid", "quick", "--perturb-action", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("# note: FAIL") && l.contains("action_closed_form")));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["plan", "--freq", "0"][..],
        &["plan", "--freq", "-1e9"],
        &["plan", "--r", "0.5"],
        &["curve", "--eps", "1.5"],
        &["plan", "--preset", "proton"],
        &["plan", "--species", "/nonexistent/species.cfg"],
        &["plan", "--bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_errors_exit_2() {
    for (name, text) in [
        ("unknown.cfg", "label = \"x\"\nfoo = 1\n"),
        ("both.cfg", "mass_amu = 1\nmass_kg = 1e-27\nV_eV = 1\n"),
        ("dup.cfg", "mass_amu = 1\nmass_amu = 2\nV_eV = 1\n"),
        ("number.cfg", "mass_amu = heavy\nV_eV = 1\n"),
        ("missing.cfg", "mass_amu = 1\n"),
        ("syntax.cfg", "mass_amu 1\n"),
        ("negative.cfg", "mass_amu = -1\nV_eV = 1\n"),
    ] {
        let path = tmp(name);
        std::fs::write(&path, text).unwrap();
        let out = run(&["plan", "--species", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
}

#[test]
fn species_file_matches_preset() {
    let path = tmp("nacl.cfg");
    std::fs::write(
        &path,
        "# sodium chloride\nlabel = \"NaCl\"\nmass_kg = 2.3e-26\ncharge_e = 1\nV_eV = 9\nhbar_omega_eV = 0.045\nT_K = 300\nthermal_width_K = 1\n",
    )
    .unwrap();
    let from_file = json(&["plan", "--species", path.to_str().unwrap(), "--freq", "1e6"]);
    let preset = json(&["plan", "--preset", "nacl", "--freq", "1e6"]);
    assert_eq!(from_file.tables, preset.tables);
}

#[test]
fn out_of_validity_exits_4() {
    // the resonant amplitude sits closer to eps = 1 than f64 resolves
    let out = run(&["plan", "--u", "1e-9", "--freq", "1e9"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no resonant amplitude"));
}

#[test]
fn tiny_u_still_plans() {
    let rec = json(&["plan", "--u", "1e-6", "--freq", "1e9"]);
    let eps = column(rec.table("plan").unwrap(), "eps (1)");
    assert!(eps[0] > 0.999 && eps[0] < 1.0);
}
