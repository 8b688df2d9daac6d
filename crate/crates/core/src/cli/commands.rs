use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{Counterexample, CounterexampleArgs, InitialData, LoadedConfig};
use super::{parse_floats, parse_windows, CliError, CounterexampleCmd};
use crate::counterexamples::{init_from, period_samples, verify_exact};
use crate::model::{check_assumptions, lower_bound_constants, ModelSpec};
use crate::simulator::{
    a_priori_bound_sq, build_grid, dist_to_manifold, evolve, gaussian_perturbation, solitary_state, Evolution,
    FieldState, Grid, Observe, ObserverSeries, PerturbationSpec, DEFAULT_CFL,
};
use crate::solitary::{amplitude_residual, continue_branch, default_guess, solve_profile, SolitaryWave};
use crate::spectral::{spectrum_series, SpectrumEstimate, SpectrumOptions, Taper};

/// Residual tolerance for exact-solution verification.
const VERIFY_TOL: f64 = 1e-10;

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(&format!("cannot create {}", dir.display()), e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::io("serialization failed", e))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(&format!("cannot write {}", path.display()), e))
}

fn create(path: &Path) -> Result<fs::File, CliError> {
    fs::File::create(path).map_err(|e| CliError::io(&format!("cannot write {}", path.display()), e))
}

fn print_json(value: &impl Serialize) {
    use std::io::Write;
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Assumption report and lower-bound constants; exit 2 unless every
/// assumption holds.
pub fn cmd_check(config: &Path) -> Result<i32, CliError> {
    let loaded = LoadedConfig::load(config)?;
    let model = loaded.config.resolved_model()?;
    let report = check_assumptions(&model);
    let lower = lower_bound_constants(&model);
    print_json(&json!({
        "assumptions": report,
        "all_hold": report.all_hold(),
        "lower_bound": lower.as_ref().ok(),
        "lower_bound_error": lower.as_ref().err().map(|e| e.to_string()),
    }));
    Ok(if report.all_hold() { 0 } else { 2 })
}

fn guess_for(loaded: &LoadedConfig, model: &ModelSpec, omega: f64) -> Result<Vec<Complex64>, CliError> {
    match loaded.config.solve.as_ref().and_then(|s| s.guess()) {
        Some(g) => Ok(g),
        None => Ok(default_guess(model, omega)?),
    }
}

/// Single solve (`wave.json`) or branch continuation (`branch.csv`, `branch.json`).
pub fn cmd_solve(config: &Path, omega: Option<f64>, omega_range: Option<&str>, out: &Path) -> Result<i32, CliError> {
    let loaded = LoadedConfig::load(config)?;
    let model = loaded.config.resolved_model()?;
    ensure_dir(out)?;
    match (omega, omega_range) {
        (Some(w), None) => {
            let wave = solve_profile(&model, w, &guess_for(&loaded, &model, w)?)?;
            let residual = max_abs(&amplitude_residual(&model, &wave));
            write_json(&out.join("wave.json"), &wave)?;
            print_json(&json!({
                "wave": wave,
                "residual": residual,
                "abs_amplitudes": wave.amplitudes.iter().map(|c| c.norm()).collect::<Vec<_>>(),
            }));
            Ok(0)
        }
        (None, Some(range)) => {
            let [a, b, step] = parse_floats(range, ':')?[..] else {
                return Err(CliError::Usage(format!("--omega-range '{range}' must be start:end:step")));
            };
            let branch = continue_branch(&model, a, b, step, &guess_for(&loaded, &model, a)?)?;
            write_branch_csv(&out.join("branch.csv"), &model, &branch.waves)?;
            write_json(&out.join("branch.json"), &branch)?;
            print_json(&json!({
                "points": branch.waves.len(),
                "collapsed_at": branch.collapsed_at,
                "last_good_omega": branch.last_good_omega(),
            }));
            Ok(0)
        }
        _ => Err(CliError::Usage("solve needs exactly one of --omega or --omega-range".into())),
    }
}

fn write_branch_csv(path: &Path, model: &ModelSpec, waves: &[SolitaryWave]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header = vec!["omega".to_string(), "kappa".to_string()];
    for j in 1..=model.len() {
        header.extend([format!("re_C{j}"), format!("im_C{j}"), format!("abs_C{j}")]);
    }
    header.push("residual".into());
    let err = |e: csv::Error| CliError::io("csv write failed", e);
    w.write_record(&header).map_err(err)?;
    let fmt = |v: f64| format!("{v:.16e}");
    for wave in waves {
        let mut row = vec![fmt(wave.omega), fmt(wave.kappa)];
        for c in &wave.amplitudes {
            row.extend([fmt(c.re), fmt(c.im), fmt(c.norm())]);
        }
        row.push(fmt(max_abs(&amplitude_residual(model, wave))));
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::io("csv write failed", e))
}

#[derive(Debug, Serialize)]
struct WindowReport {
    t0: f64,
    #[serde(rename = "T")]
    length: f64,
    dominant: Option<f64>,
    band_mass_ratio: Option<f64>,
    peaks: Vec<f64>,
    error: Option<String>,
}

fn window_reports(
    estimates: &[Result<SpectrumEstimate, crate::spectral::SpectralError>],
    windows: &[(f64, f64)],
) -> Vec<WindowReport> {
    estimates
        .iter()
        .zip(windows)
        .map(|(e, &(t0, length))| match e {
            Ok(e) => WindowReport {
                t0: e.window_start,
                length: e.window_length,
                dominant: e.dominant,
                band_mass_ratio: Some(e.band_mass_ratio),
                peaks: e.peaks(0.05).into_iter().take(6).collect(),
                error: None,
            },
            Err(err) => WindowReport {
                t0,
                length,
                dominant: None,
                band_mass_ratio: None,
                peaks: Vec::new(),
                error: Some(err.to_string()),
            },
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct SimulationSummary {
    config: String,
    x_min: f64,
    dx: f64,
    nodes: usize,
    oscillator_nodes: Vec<usize>,
    /// Grid coordinates of the `probe_K` trace columns.
    probe_positions: Vec<f64>,
    dt: f64,
    t_final: f64,
    samples: usize,
    energy_initial: f64,
    energy_drift: f64,
    charge_drift: f64,
    max_energy_norm: f64,
    a_priori_bound: Option<f64>,
    bound_violations: Option<usize>,
    assumptions_hold: bool,
    spectra: Vec<WindowReport>,
    final_dist_to_manifold: Option<serde_json::Value>,
}

fn initial_state(
    loaded: &LoadedConfig,
    model: &ModelSpec,
    grid: &Grid,
    seed_override: Option<u64>,
) -> Result<FieldState, CliError> {
    let initial = loaded.config.initial.clone().unwrap_or(InitialData::Zero);
    match initial {
        InitialData::Zero => Ok(FieldState::zeros(grid)),
        InitialData::Solitary { omega, phase } => {
            let wave = solve_profile(model, omega, &guess_for(loaded, model, omega)?)?;
            Ok(solitary_state(model, grid, &wave, phase))
        }
        InitialData::PerturbedSolitary { omega, noise_amplitude, seed } => {
            let wave = solve_profile(model, omega, &guess_for(loaded, model, omega)?)?;
            let base = solitary_state(model, grid, &wave, 0.0);
            let spec = PerturbationSpec::near_oscillators(model, noise_amplitude, seed_override.unwrap_or(seed));
            Ok(gaussian_perturbation(model, grid, &base, &spec))
        }
        InitialData::Counterexample { family, params } => {
            let c = Counterexample::construct(family, &params).map_err(CliError::from_counterexample)?;
            init_from(c.solution(), grid).map_err(CliError::from_counterexample)
        }
        InitialData::File { path } => {
            let full = loaded.resolve(&path);
            let file = fs::File::open(&full).map_err(|e| CliError::io(&format!("cannot open {}", full.display()), e))?;
            let (xs, state) = FieldState::read_csv(file)
                .map_err(|e| CliError::Usage(format!("bad snapshot {}: {e}", full.display())))?;
            let aligned = xs.len() == grid.count
                && xs.iter().zip(grid.nodes()).all(|(a, b)| (a - b).abs() <= 1e-9 * grid.dx.max(b.abs() * 1e-6));
            if !aligned {
                return Err(CliError::Domain(format!("snapshot {} does not match the grid", full.display())));
            }
            Ok(state)
        }
    }
}

fn a_priori(model: &ModelSpec, grid: &Grid, initial: &FieldState, series: &ObserverSeries) -> (Option<f64>, Option<usize>) {
    match a_priori_bound_sq(model, grid, initial) {
        Ok(bound) => {
            let violations = series.energy_norm.iter().filter(|&&n| n * n > bound * (1.0 + 1e-9)).count();
            (Some(bound.max(0.0).sqrt()), Some(violations))
        }
        Err(_) => (None, None),
    }
}

fn write_series(dir: &Path, ev: &Evolution, grid: &Grid) -> Result<(), CliError> {
    ev.series
        .write_csv(create(&dir.join("series.csv"))?)
        .map_err(|e| CliError::io("cannot write series", e))?;
    ev.final_state
        .write_csv(grid, create(&dir.join("final_state.csv"))?)
        .map_err(|e| CliError::io("cannot write snapshot", e))
}

fn simulate_one(loaded: &LoadedConfig, out: &Path, seed: Option<u64>) -> Result<SimulationSummary, CliError> {
    let cfg = &loaded.config;
    let model = cfg.resolved_model()?;
    let g = cfg.grid()?;
    let run = cfg.run()?;
    let grid = build_grid(&model, g.x_min, g.x_max, g.dx_target)?;
    let dt = run.dt.unwrap_or(DEFAULT_CFL * grid.dx);
    let state = initial_state(loaded, &model, &grid, seed)?;
    let observe = Observe { every: run.observe_every, radii: run.radii.clone(), probes: run.probes.clone() };
    let ev = evolve(&model, &grid, &state, run.t_final, dt, &observe)?;
    ensure_dir(out)?;
    write_series(out, &ev, &grid)?;

    let spectral = cfg.spectral.clone().unwrap_or(super::config::SpectralConfig { windows: Vec::new(), taper: Taper::Hann });
    let options = SpectrumOptions::with_taper(spectral.taper);
    let estimates = spectrum_series(&ev.series.traces[0], ev.series.sample_dt(), &spectral.windows, &options);
    for (k, e) in estimates.iter().enumerate() {
        if let Ok(e) = e {
            e.write_csv(create(&out.join(format!("spectrum_{k}.csv")))?)
                .map_err(|err| CliError::io("cannot write spectrum", err))?;
        }
    }

    let final_dist = match run.r_max {
        Some(r_max) => {
            let m = model.mass();
            let omegas: Vec<f64> = (-19..=19).map(|k| 0.05 * k as f64 * m).collect();
            let d = dist_to_manifold(&model, &grid, &ev.final_state, &omegas, r_max)?;
            Some(json!({ "t": ev.final_state.t, "dist": d.dist, "best_omega": d.best_omega }))
        }
        None => None,
    };
    let (bound, violations) = a_priori(&model, &grid, &state, &ev.series);
    let summary = SimulationSummary {
        config: loaded.path.display().to_string(),
        x_min: grid.x_min,
        dx: grid.dx,
        nodes: grid.count,
        oscillator_nodes: grid.oscillator_nodes.clone(),
        probe_positions: ev.series.probe_positions.clone(),
        dt: ev.series.dt,
        t_final: ev.final_state.t,
        samples: ev.series.len(),
        energy_initial: ev.series.energy[0],
        energy_drift: ev.series.energy_drift(),
        charge_drift: ev.series.charge_drift(),
        max_energy_norm: ev.series.energy_norm.iter().copied().fold(0.0, f64::max),
        a_priori_bound: bound,
        bound_violations: violations,
        assumptions_hold: check_assumptions(&model).all_hold(),
        spectra: window_reports(&estimates, &spectral.windows),
        final_dist_to_manifold: final_dist,
    };
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Evolves each configuration; with several, each writes to
/// `<out>/<config stem>/`. Returns the worst exit code.
pub fn cmd_simulate(configs: &[PathBuf], out: &Path, seed: Option<u64>, parallel: usize) -> Result<i32, CliError> {
    let loaded: Vec<LoadedConfig> = configs.iter().map(|p| LoadedConfig::load(p)).collect::<Result<_, _>>()?;
    if loaded.len() == 1 {
        let summary = simulate_one(&loaded[0], out, seed)?;
        print_json(&summary);
        return Ok(0);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<SimulationSummary, CliError>> = pool.install(|| {
        loaded
            .par_iter()
            .map(|l| simulate_one(l, &out.join(l.stem()), seed))
            .collect()
    });
    let mut code = 0;
    let mut summaries = Vec::new();
    for (l, r) in loaded.iter().zip(results) {
        match r {
            Ok(s) => summaries.push(serde_json::to_value(s).expect("serializable")),
            Err(e) => {
                eprintln!("error in {}: {e}", l.path.display());
                code = code.max(e.exit_code());
                summaries.push(json!({ "config": l.path.display().to_string(), "error": e.to_string() }));
            }
        }
    }
    print_json(&summaries);
    Ok(code)
}

/// Reads `t` and the `re_<signal>`/`im_<signal>` columns of an observer CSV.
fn read_trace(path: &Path, signal: &str) -> Result<(Vec<f64>, Vec<Complex64>), CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(&format!("cannot open {}", path.display()), e))?;
    let mut r = csv::Reader::from_reader(file);
    let bad = |e: csv::Error| CliError::Usage(format!("bad trace file {}: {e}", path.display()));
    let headers = r.headers().map_err(bad)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("column '{name}' not found in {}", path.display())))
    };
    let (it, ire, iim) = (col("t")?, col(&format!("re_{signal}"))?, col(&format!("im_{signal}"))?);
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(bad)?;
        let num = |i: usize| {
            rec[i].parse::<f64>().map_err(|e| CliError::Usage(format!("bad number '{}': {e}", &rec[i])))
        };
        times.push(num(it)?);
        values.push(Complex64::new(num(ire)?, num(iim)?));
    }
    Ok((times, values))
}

/// Spectra of one trace column over the given windows. Exit 2 when any
/// window is invalid (the valid ones are still written).
pub fn cmd_spectrum(trace: &Path, windows: &[(f64, f64)], signal: &str, taper: Taper, out: &Path) -> Result<i32, CliError> {
    let (times, values) = read_trace(trace, signal)?;
    if times.len() < 2 {
        return Err(CliError::Domain("trace needs at least two samples".into()));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(CliError::Domain("trace samples are not uniformly spaced".into()));
    }
    let shifted: Vec<(f64, f64)> = windows.iter().map(|&(t0, len)| (t0 - times[0], len)).collect();
    let estimates = spectrum_series(&values, dt, &shifted, &SpectrumOptions::with_taper(taper));
    ensure_dir(out)?;
    for (k, e) in estimates.iter().enumerate() {
        if let Ok(e) = e {
            e.write_csv(create(&out.join(format!("spectrum_{k}.csv")))?)
                .map_err(|err| CliError::io("cannot write spectrum", err))?;
        }
    }
    let mut reports = window_reports(&estimates, windows);
    for r in &mut reports {
        if r.error.is_none() {
            r.t0 += times[0];
        }
    }
    write_json(&out.join("spectrum_summary.json"), &reports)?;
    print_json(&reports);
    Ok(if estimates.iter().all(|e| e.is_ok()) { 0 } else { 2 })
}

/// Constructs, verifies and optionally simulates an exact solution.
pub fn cmd_counterexample(cmd: &CounterexampleCmd) -> Result<i32, CliError> {
    let args = CounterexampleArgs { mass: cmd.mass, gap: cmd.gap, alpha: cmd.alpha, beta: cmd.beta, omega: cmd.omega };
    let c = Counterexample::construct(cmd.kind, &args).map_err(CliError::from_counterexample)?;
    let sol = c.solution();
    let report = verify_exact(sol, &period_samples(sol, 50));
    let model = sol.model();
    ensure_dir(&cmd.out)?;
    write_json(&cmd.out.join("params.json"), &c)?;
    let verification = json!({
        "equation_residuals": c.equation_residuals(),
        "max_equation_residual": max_abs(&c.equation_residuals()),
        "report": report,
        "max_jump_residual": report.max_jump(),
        "assumptions": check_assumptions(&model),
    });
    write_json(&cmd.out.join("verification.json"), &verification)?;
    let mut summary = json!({ "params": c, "verification": verification });
    let verified = report.max_jump() <= VERIFY_TOL && report.max_continuity() <= VERIFY_TOL;

    if let Some(t_final) = cmd.simulate {
        let margin = t_final + 10.0;
        let grid = build_grid(&model, -margin, c.gap() + margin, cmd.dx)?;
        let state = init_from(sol, &grid).map_err(CliError::from_counterexample)?;
        let dt = DEFAULT_CFL * grid.dx;
        let every = ((0.05 / dt).round() as usize).max(1);
        let observe = Observe::every(every).with_probes(&[0.5 * c.gap()]);
        let ev = evolve(&model, &grid, &state, t_final, dt, &observe)?;
        write_series(&cmd.out, &ev, &grid)?;
        let windows = match &cmd.windows {
            Some(w) => parse_windows(w)?,
            None => vec![(0.0, t_final)],
        };
        let options = SpectrumOptions::default();
        let sdt = ev.series.sample_dt();
        let at_x1 = spectrum_series(&ev.series.traces[0], sdt, &windows, &options);
        let at_mid = spectrum_series(&ev.series.probe_traces[0], sdt, &windows, &options);
        let w = sol.omega();
        let harmonic_ratio = |e: &SpectrumEstimate| {
            let hw = e.band_half_width;
            let fund = e.band_mass(w, hw) + e.band_mass(-w, hw);
            (e.band_mass(3.0 * w, hw) + e.band_mass(-3.0 * w, hw)) / fund
        };
        let ratios: Vec<Option<f64>> = at_mid.iter().map(|e| e.as_ref().ok().map(harmonic_ratio)).collect();
        let (bound, violations) = a_priori(&model, &grid, &state, &ev.series);
        summary["simulation"] = json!({
            "dx": grid.dx,
            "dt": ev.series.dt,
            "energy_drift": ev.series.energy_drift(),
            "a_priori_bound": bound,
            "bound_violations": violations,
            "spectra_at_x1": window_reports(&at_x1, &windows),
            "spectra_at_midpoint": window_reports(&at_mid, &windows),
            "harmonic_mass_ratio_at_midpoint": ratios,
        });
    }
    write_json(&cmd.out.join("summary.json"), &summary)?;
    print_json(&summary);
    Ok(if verified { 0 } else { 3 })
}
