//! Energy and charge drift of the leapfrog scheme as the time step shrinks.

use kgosc::simulator::{build_grid, evolve, gaussian_perturbation, solitary_state, Observe, PerturbationSpec};
use kgosc::solitary::solve_profile_default;
use kgosc::{ModelSpec, OscillatorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let osc = |x| OscillatorSpec::new(x, vec![0.0, -2.0, 1.0]);
    let model = ModelSpec::new(1.0, vec![osc(0.0), osc(0.2)])?;
    let grid = build_grid(&model, -30.0, 30.0, 0.02)?;
    let wave = solve_profile_default(&model, 0.4)?;
    let base = solitary_state(&model, &grid, &wave, 0.0);
    let init = gaussian_perturbation(&model, &grid, &base, &PerturbationSpec::near_oscillators(&model, 0.1, 11));

    println!("{:>8} {:>12} {:>12}", "dt", "energy drift", "charge drift");
    for dt in [0.018, 0.009, 0.0045] {
        let ev = evolve(&model, &grid, &init, 100.0, dt, &Observe::every(50))?;
        println!("{dt:>8} {:>12.3e} {:>12.3e}", ev.series.energy_drift(), ev.series.charge_drift());
    }
    Ok(())
}
