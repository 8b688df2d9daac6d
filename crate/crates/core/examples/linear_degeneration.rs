//! The two-frequency solution with a linear second oscillator.

use kgosc::counterexamples::{linear_deg_unmatched_gamma, period_samples, verify_exact, LinearDegParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = LinearDegParams::construct(1.0, 1.0, 0.3, 0.0, 10.0)?;
    println!("{p:#?}");
    println!("equation residuals: {:?}", p.equation_residuals());
    println!("max jump residual: {:.1e}", verify_exact(&p, &period_samples(&p, 50)).max_jump());
    println!(
        "γ with the 3ω branch matched continuously: {:.5}; with the unmatched normalisation: {:.5}",
        p.gamma,
        linear_deg_unmatched_gamma(1.0, 1.0, 0.3)
    );
    Ok(())
}
