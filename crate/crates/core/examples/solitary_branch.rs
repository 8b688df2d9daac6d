//! Continues the solitary-wave branch of a close oscillator pair in ω and
//! prints the amplitude table.

use kgosc::solitary::{amplitude_residual, continue_branch, default_guess};
use kgosc::{ModelSpec, OscillatorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let osc = |x| OscillatorSpec::new(x, vec![0.0, -2.0, 1.0]);
    let model = ModelSpec::new(1.0, vec![osc(0.0), osc(0.2)])?;

    let branch = continue_branch(&model, 0.0, 0.95, 0.05, &default_guess(&model, 0.0)?)?;
    println!("{:>6} {:>8} {:>10} {:>10} {:>10}", "omega", "kappa", "|C1|", "|C2|", "residual");
    for w in &branch.waves {
        let res = amplitude_residual(&model, w).iter().fold(0.0f64, |a, r| a.max(r.abs()));
        println!(
            "{:>6.2} {:>8.4} {:>10.6} {:>10.6} {:>10.1e}",
            w.omega,
            w.kappa,
            w.amplitudes[0].norm(),
            w.amplitudes[1].norm(),
            res
        );
    }
    if let Some(w) = branch.collapsed_at {
        println!("branch reaches the zero wave at omega = {w}");
    }
    Ok(())
}
