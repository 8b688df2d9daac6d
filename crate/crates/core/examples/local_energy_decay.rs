//! Free Klein–Gordon evolution of compact data: the local energy seminorm
//! near the origin decays as the wave packet disperses.

use kgosc::simulator::{build_grid, evolve, smooth_bump, FieldState, Observe};
use kgosc::{Complex64, ModelSpec, OscillatorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelSpec::new(1.0, vec![OscillatorSpec::inert(0.0)])?;
    let grid = build_grid(&model, -50.0, 50.0, 0.02)?;
    let odd = |x: f64| x * smooth_bump(x, 0.0, 2.0);
    let init = FieldState::from_fn(&grid, |x| Complex64::new(odd(x), 0.0), |x| Complex64::new(0.0, odd(x)));

    let ev = evolve(&model, &grid, &init, 40.0, 0.009, &Observe::every(555).with_radii(&[2.0, 5.0, 10.0]))?;
    let s = &ev.series;
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "R=2", "R=5", "R=10");
    for (i, t) in s.times.iter().enumerate() {
        println!("{t:>6.1} {:>12.4e} {:>12.4e} {:>12.4e}", s.seminorms[0][i], s.seminorms[1][i], s.seminorms[2][i]);
    }
    Ok(())
}
