//! A perturbed solitary wave sheds its perturbation: the windowed spectrum at
//! X_1 narrows to one frequency and the distance to the solitary manifold
//! shrinks.

use kgosc::simulator::{build_grid, dist_to_manifold, evolve, gaussian_perturbation, solitary_state, Observe, PerturbationSpec};
use kgosc::solitary::solve_profile_default;
use kgosc::spectral::{in_band_check, spectrum_series, SpectrumOptions};
use kgosc::{ModelSpec, OscillatorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let osc = |x| OscillatorSpec::new(x, vec![0.0, -2.0, 1.0]);
    let model = ModelSpec::new(1.0, vec![osc(0.0), osc(0.2)])?;
    let grid = build_grid(&model, -60.0, 60.0, 0.02)?;
    let wave = solve_profile_default(&model, 0.4)?;
    let base = solitary_state(&model, &grid, &wave, 0.0);
    let init = gaussian_perturbation(&model, &grid, &base, &PerturbationSpec::near_oscillators(&model, 0.1, 7));

    let ev = evolve(&model, &grid, &init, 90.0, 0.009, &Observe::every(10))?;
    let s = &ev.series;
    let windows = [(0.0, 10.0), (10.0, 20.0), (40.0, 20.0), (70.0, 20.0)];
    for (est, (t0, len)) in spectrum_series(&s.traces[0], s.sample_dt(), &windows, &SpectrumOptions::default()).into_iter().zip(windows) {
        let est = est?;
        println!(
            "window [{t0}, {}]: dominant {:.4}, band mass ratio {:.4}, in band: {}",
            t0 + len,
            est.dominant.unwrap_or(f64::NAN),
            est.band_mass_ratio,
            in_band_check(&est, model.mass())
        );
    }

    let omegas: Vec<f64> = (-19..=19).map(|k| 0.05 * k as f64).collect();
    let d0 = dist_to_manifold(&model, &grid, &init, &omegas, 6)?;
    let d1 = dist_to_manifold(&model, &grid, &ev.final_state, &omegas, 6)?;
    println!("dist to manifold: t = 0: {:.4e} (ω* = {:?}), t = 90: {:.4e} (ω* = {:?})", d0.dist, d0.best_omega, d1.dist, d1.best_omega);
    Ok(())
}
