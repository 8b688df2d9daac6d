use std::fs;
use std::path::{Path, PathBuf};

use kgosc::cli::run;
use kgosc::FieldState;
use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn kgosc(args: &[&str]) -> i32 {
    run(std::iter::once("kgosc").chain(args.iter().copied()))
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const CLOSE_PAIR: &str = r#"
[model]
mass = 1.0
[[model.oscillators]]
position = 0.0
coefficients = [0.0, -2.0, 1.0]
[[model.oscillators]]
position = 0.2
coefficients = [0.0, -2.0, 1.0]
"#;

const SINGLE: &str = r#"
[model]
mass = 1.0
[[model.oscillators]]
position = 0.0
coefficients = [0.0, -2.0, 1.0]
"#;

fn simulation(initial: &str) -> String {
    format!(
        "{CLOSE_PAIR}\n[grid]\nx_min = -10.0\nx_max = 10.0\ndx_target = 0.05\n\n[run]\nt_final = 3.0\nobserve_every = 1\nradii = [1.0, 2.0]\nr_max = 3\n\n{initial}\n[spectral]\nwindows = [[0.0, 2.5], [0.0, 0.5]]\n"
    )
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(kgosc(&["check", "--config", write(dir.path(), "a.toml", CLOSE_PAIR).to_str().unwrap()]), 0);
    let wide = CLOSE_PAIR.replace("position = 0.2", "position = 3.14159");
    assert_eq!(kgosc(&["check", "--config", write(dir.path(), "b.toml", &wide).to_str().unwrap()]), 2);
    assert_eq!(kgosc(&["check", "--config", write(dir.path(), "c.toml", "[model\nmass=").to_str().unwrap()]), 1);
    assert_eq!(kgosc(&["check", "--config", dir.path().join("missing.toml").to_str().unwrap()]), 1);
}

#[test]
fn solve_at_zero_frequency() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "s.toml", SINGLE);
    let out = dir.path().join("out");
    assert_eq!(kgosc(&["solve", "--config", cfg.to_str().unwrap(), "--omega", "0", "--out", out.to_str().unwrap()]), 0);
    let wave = json(&out.join("wave.json"));
    let c = &wave["amplitudes"][0];
    let norm = (c[0].as_f64().unwrap().powi(2) + c[1].as_f64().unwrap().powi(2)).sqrt();
    assert!((norm - 0.5f64.sqrt()).abs() < 1e-10, "|C| = {norm}");
    assert_eq!(kgosc(&["solve", "--config", cfg.to_str().unwrap(), "--omega", "1.5"]), 2);
}

#[test]
fn solve_branch_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "s.toml", SINGLE);
    let out = dir.path().join("branch");
    let args = ["solve", "--config", cfg.to_str().unwrap(), "--omega-range", "0:0.9:0.1", "--out", out.to_str().unwrap()];
    assert_eq!(kgosc(&args), 0);
    let mut r = csv::Reader::from_path(out.join("branch.csv")).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["omega", "kappa", "re_C1", "im_C1", "abs_C1", "residual"]);
    let kappas: Vec<f64> = r.records().map(|rec| rec.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(kappas.len(), 10);
    assert!(kappas.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn simulate_writes_outputs_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let initial = "[initial]\nkind = \"perturbed_solitary\"\nomega = 0.4\nnoise_amplitude = 0.1\nseed = 5\n";
    let cfg = write(dir.path(), "p.toml", &simulation(initial));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert_eq!(kgosc(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    }
    assert_eq!(fs::read(a.join("series.csv")).unwrap(), fs::read(b.join("series.csv")).unwrap());

    let summary = json(&a.join("summary.json"));
    assert_eq!(summary["bound_violations"], 0);
    assert!(summary["energy_drift"].as_f64().unwrap() < 1e-3);
    assert!(summary["final_dist_to_manifold"]["dist"].as_f64().is_some());
    // The second window is too short for a spectrum.
    assert!(summary["spectra"][0]["dominant"].as_f64().is_some());
    assert!(summary["spectra"][1]["error"].is_string());
    assert!(a.join("spectrum_0.csv").is_file());

    let mut r = csv::Reader::from_path(a.join("series.csv")).unwrap();
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    for col in ["t", "H", "Q", "E_norm", "seminorm_R1", "seminorm_R2", "re_psi_1", "im_psi_2", "re_pi_1"] {
        assert!(headers.iter().any(|h| h == col), "missing column {col}: {headers:?}");
    }

    // A different seed changes the run.
    let c = dir.path().join("c");
    let args = ["simulate", "--config", cfg.to_str().unwrap(), "--out", c.to_str().unwrap(), "--seed", "6"];
    assert_eq!(kgosc(&args), 0);
    assert_ne!(fs::read(a.join("series.csv")).unwrap(), fs::read(c.join("series.csv")).unwrap());
}

#[test]
fn zero_data_stays_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "z.toml", &simulation("[initial]\nkind = \"zero\"\n"));
    let out = dir.path().join("z");
    assert_eq!(kgosc(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    let mut r = csv::Reader::from_path(out.join("series.csv")).unwrap();
    for rec in r.records() {
        let rec = rec.unwrap();
        assert!(rec.iter().skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn snapshot_round_trip_through_file_initial_data() {
    let dir = TempDir::new().unwrap();
    let initial = "[initial]\nkind = \"solitary\"\nomega = 0.3\n";
    let cfg = write(dir.path(), "first.toml", &simulation(initial));
    let first = dir.path().join("first");
    assert_eq!(kgosc(&["simulate", "--config", cfg.to_str().unwrap(), "--out", first.to_str().unwrap()]), 0);
    let snap = first.join("final_state.csv");
    let (_, state) = FieldState::read_csv(fs::File::open(&snap).unwrap()).unwrap();
    assert!(state.max_abs_psi() > 0.1);

    let cfg2 = write(
        dir.path(),
        "second.toml",
        &simulation(&format!("[initial]\nkind = \"file\"\npath = \"{}\"\n", snap.display())),
    );
    let second = dir.path().join("second");
    assert_eq!(kgosc(&["simulate", "--config", cfg2.to_str().unwrap(), "--out", second.to_str().unwrap()]), 0);

    // Mismatched grid is a domain error.
    let cfg3 = write(
        dir.path(),
        "third.toml",
        &simulation(&format!("[initial]\nkind = \"file\"\npath = \"{}\"\n", snap.display())).replace("dx_target = 0.05", "dx_target = 0.1"),
    );
    assert_eq!(kgosc(&["simulate", "--config", cfg3.to_str().unwrap(), "--out", dir.path().join("t").to_str().unwrap()]), 2);
}

#[test]
fn parallel_sweep_uses_per_config_directories() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "one.toml", &simulation("[initial]\nkind = \"solitary\"\nomega = 0.2\n"));
    let b = write(dir.path(), "two.toml", &simulation("[initial]\nkind = \"solitary\"\nomega = 0.5\n"));
    let out = dir.path().join("sweep");
    let args = ["simulate", "--config", a.to_str().unwrap(), "--config", b.to_str().unwrap(), "--parallel", "2", "--out", out.to_str().unwrap()];
    assert_eq!(kgosc(&args), 0);
    assert!(out.join("one/summary.json").is_file());
    assert!(out.join("two/summary.json").is_file());
}

#[test]
fn spectrum_command() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "s.toml", &simulation("[initial]\nkind = \"solitary\"\nomega = 0.4\n").replace("t_final = 3.0", "t_final = 40.0"));
    let sim = dir.path().join("sim");
    assert_eq!(kgosc(&["simulate", "--config", cfg.to_str().unwrap(), "--out", sim.to_str().unwrap()]), 0);
    let trace = sim.join("series.csv");
    let spec = dir.path().join("spec");
    assert_eq!(kgosc(&["spectrum", "--trace", trace.to_str().unwrap(), "--windows", "0:39", "--out", spec.to_str().unwrap()]), 0);
    let summary = json(&spec.join("spectrum_summary.json"));
    let dominant = summary[0]["dominant"].as_f64().unwrap();
    assert!((dominant - 0.4).abs() < 0.02, "dominant {dominant}");
    assert!(spec.join("spectrum_0.csv").is_file());
    // Too short a window fails the command with exit 2.
    assert_eq!(kgosc(&["spectrum", "--trace", trace.to_str().unwrap(), "--windows", "0:39,0:0.5", "--out", spec.to_str().unwrap()]), 2);
    assert_eq!(kgosc(&["spectrum", "--trace", trace.to_str().unwrap(), "--windows", "0:10", "--signal", "nope"]), 1);
}

#[test]
fn counterexample_command() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("wide");
    assert_eq!(kgosc(&["counterexample", "--kind", "wide-gap", "--out", out.to_str().unwrap()]), 0);
    let v = json(&out.join("verification.json"));
    assert!(v["max_jump_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["max_equation_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["assumptions"]["a3"], false);
    let params = json(&out.join("params.json"));
    assert!((params["omega"].as_f64().unwrap() - 2f64.sqrt() / 3.0).abs() < 1e-14);

    let lin = dir.path().join("lin");
    assert_eq!(kgosc(&["counterexample", "--kind", "linear-deg", "--out", lin.to_str().unwrap()]), 0);
    assert!(json(&lin.join("verification.json"))["max_equation_residual"].as_f64().unwrap() <= 1e-12);

    assert_eq!(kgosc(&["counterexample", "--kind", "wide-gap", "--gap", "0.5", "--out", out.to_str().unwrap()]), 2);
}
