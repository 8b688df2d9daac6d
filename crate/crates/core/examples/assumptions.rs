//! How far apart two quartic oscillators may sit before the gap assumption
//! fails.

use kgosc::model::{check_assumptions, lower_bound_constants};
use kgosc::{ModelSpec, OscillatorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let osc = |x| OscillatorSpec::new(x, vec![0.0, -2.0, 1.0]);
    for gap in [0.1, 0.2, 0.5, 1.0, 1.5, 3.0] {
        let model = ModelSpec::new(1.0, vec![osc(0.0), osc(gap)])?;
        let r = check_assumptions(&model);
        let g = &r.details.gaps[0];
        println!("L = {gap:<4} Λ = {} threshold = {:>8.4} holds: {}", g.lambda, g.threshold, g.holds);
    }
    let model = ModelSpec::new(1.0, vec![osc(0.0), osc(0.2)])?;
    println!("{:?}", lower_bound_constants(&model)?);
    Ok(())
}
